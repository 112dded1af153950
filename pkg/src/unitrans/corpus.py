"""Manifest ingestion, text normalization, sample filtering and the language registry."""

from __future__ import annotations

import json
import unicodedata
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from unitrans._languages import LANGUAGES, LanguageInfo
from unitrans.errors import ManifestError, UnknownLanguageError

REQUIRED_KEYS = ("id", "lang", "ref_text")
OPTIONAL_KEYS = ("roman_ref", "emission_path")

PARENTHESES = frozenset("()（）")


@dataclass(frozen=True)
class UtteranceRecord:
    id: str
    lang: str
    ref_text: str
    roman_ref: str | None = None
    emission_path: str | None = None

    def to_json(self) -> str:
        data = {k: v for k, v in asdict(self).items() if v is not None}
        return json.dumps(data, ensure_ascii=False)


class LanguageRegistry(Mapping[str, LanguageInfo]):
    """Read-only code -> (display name, seen flag) mapping.

    Lookups are exact; there is no case folding or alias resolution.
    """

    def __init__(self, entries: Mapping[str, LanguageInfo] = LANGUAGES):
        self._entries = dict(entries)

    def __getitem__(self, code: str) -> LanguageInfo:
        try:
            return self._entries[code]
        except KeyError:
            raise UnknownLanguageError(code) from None

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def seen_codes(self) -> list[str]:
        return [c for c, info in self._entries.items() if info.seen]

    def unseen_codes(self) -> list[str]:
        return [c for c, info in self._entries.items() if not info.seen]


REGISTRY = LanguageRegistry()


def lookup_language(code: str) -> LanguageInfo:
    """Return ``(display_name, seen)`` for ``code``; raises UnknownLanguageError."""
    return REGISTRY[code]


def normalize_text(raw: str) -> str:
    """NFKC-normalize then lowercase.

    A second NFKC pass runs after lowercasing: lowercasing can reorder or
    expose combining sequences (U+0130 between combining marks, for one) that
    NFKC then changes, so a single pass is not idempotent.
    """
    text = unicodedata.normalize("NFKC", raw).lower()
    return unicodedata.normalize("NFKC", text)


class FilterResult(NamedTuple):
    accepted: bool
    reason: str | None = None

    def __bool__(self):
        return self.accepted


ACCEPT = FilterResult(True)


def filter_sample(text: str) -> FilterResult:
    """Reject text containing a parenthesis or a decimal digit (category Nd)."""
    for ch in text:
        if ch in PARENTHESES:
            return FilterResult(False, "parenthesis")
        if unicodedata.category(ch) == "Nd":
            return FilterResult(False, "digit")
    return ACCEPT


def parse_manifest_line(line: str, lineno: int | None = None) -> UtteranceRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"invalid JSON ({exc.msg})", lineno) from None
    if not isinstance(obj, dict):
        raise ManifestError("record must be a JSON object", lineno)

    unknown = sorted(set(obj) - set(REQUIRED_KEYS) - set(OPTIONAL_KEYS))
    if unknown:
        raise ManifestError(f"unknown keys: {', '.join(unknown)}", lineno)
    for key in REQUIRED_KEYS:
        if key not in obj:
            raise ManifestError(f"missing required key {key!r}", lineno)
    for key, value in obj.items():
        if key in OPTIONAL_KEYS and value is None:
            continue
        if not isinstance(value, str):
            raise ManifestError(f"{key!r} must be a string", lineno)
    if not obj["id"]:
        raise ManifestError("empty id", lineno)
    if obj["lang"] not in REGISTRY:
        raise ManifestError(f"unknown language code {obj['lang']!r}", lineno)

    return UtteranceRecord(
        id=obj["id"],
        lang=obj["lang"],
        ref_text=obj["ref_text"],
        roman_ref=obj.get("roman_ref"),
        emission_path=obj.get("emission_path"),
    )


def load_manifest(path: str | Path) -> list[UtteranceRecord]:
    """Parse a JSON-lines manifest, preserving file order.

    Blank lines are skipped. Any malformed line, duplicate id, or unknown
    language code raises :class:`ManifestError` naming the 1-based line.
    """
    records = []
    seen_ids: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            record = parse_manifest_line(line, lineno)
            if record.id in seen_ids:
                raise ManifestError(
                    f"duplicate id {record.id!r} (first seen on line {seen_ids[record.id]})",
                    lineno,
                )
            seen_ids[record.id] = lineno
            records.append(record)
    return records


def dump_manifest(records: Iterable[UtteranceRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(record.to_json())
            fh.write("\n")


class Rejection(NamedTuple):
    record: UtteranceRecord
    reason: str


def prepare_records(
    records: Iterable[UtteranceRecord],
) -> tuple[list[UtteranceRecord], list[Rejection]]:
    """Normalize references and split records into accepted and rejected.

    Accepted records carry the normalized ``ref_text`` (and ``roman_ref``
    when present). Filtering is applied to the language-specific reference.
    """
    accepted, rejected = [], []
    for record in records:
        text = normalize_text(record.ref_text)
        verdict = filter_sample(text)
        if not verdict:
            rejected.append(Rejection(record, verdict.reason))
            continue
        if not " ".join(text.split()):
            rejected.append(Rejection(record, "empty"))
            continue
        roman = normalize_text(record.roman_ref) if record.roman_ref is not None else None
        accepted.append(replace(record, ref_text=text, roman_ref=roman))
    return accepted, rejected
