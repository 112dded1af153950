"""Error rates, repetition rate and evaluation reports."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from statistics import fmean
from typing import Hashable, Iterable, Sequence

from unitrans import _kernels
from unitrans.converter import ConversionOutcome, Status
from unitrans.corpus import REGISTRY
from unitrans.errors import EmptyReferenceError

REPORT_FORMATS = ("tsv", "md", "json")


def edit_distance(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Levenshtein distance with unit insertion, deletion and substitution costs."""
    codes: dict[Hashable, int] = {}
    x = [codes.setdefault(s, len(codes)) for s in a]
    y = [codes.setdefault(s, len(codes)) for s in b]
    return int(_kernels.edit_distance(x, y))


def _collapse(text: str) -> str:
    return " ".join(text.split())


def cer(ref: str, hyp: str) -> float:
    """Character error rate. Whitespace runs count as one space character."""
    ref, hyp = _collapse(ref), _collapse(hyp)
    if not ref:
        raise EmptyReferenceError("reference is empty")
    return edit_distance(ref, hyp) / len(ref)


def wer(ref: str, hyp: str) -> float:
    ref_words, hyp_words = ref.split(), hyp.split()
    if not ref_words:
        raise EmptyReferenceError("reference has no words")
    return edit_distance(ref_words, hyp_words) / len(ref_words)


def per(ref_phones: Sequence[str], hyp_phones: Sequence[str]) -> float:
    """Phone error rate over pre-tokenized phone sequences."""
    if not ref_phones:
        raise EmptyReferenceError("reference has no phones")
    return edit_distance(ref_phones, hyp_phones) / len(ref_phones)


def repetition_rate(outcomes: Sequence[ConversionOutcome]) -> float:
    """Fraction of outcomes that ended in a format error."""
    if not outcomes:
        raise ValueError("repetition rate of an empty outcome list")
    return sum(o.status is Status.FORMAT_ERROR for o in outcomes) / len(outcomes)


def relative_error_reduction(baseline: float, ours: float) -> float:
    if baseline <= 0:
        raise ValueError("baseline error rate must be positive")
    return (baseline - ours) / baseline


@dataclass(frozen=True)
class ScoredRow:
    """One record's reference and converter result.

    ``hyp`` is None when the record produced no output; it then scores as
    empty text. ``status`` is None for records that failed before reaching
    the converter.
    """

    record_id: str
    lang: str
    ref: str
    hyp: str | None
    status: Status | None = Status.OK
    ref_phones: tuple[str, ...] | None = None
    hyp_phones: tuple[str, ...] | None = None

    @property
    def hypothesis(self) -> str:
        return self.hyp if self.hyp is not None else ""

    def cer(self) -> float:
        return cer(self.ref, self.hypothesis)

    def wer(self) -> float:
        return wer(self.ref, self.hypothesis)

    def per(self) -> float | None:
        if self.ref_phones is None:
            return None
        return per(self.ref_phones, self.hyp_phones or ())


@dataclass(frozen=True)
class LanguageScore:
    lang: str
    cer: float
    wer: float
    per: float | None
    n_records: int
    n_format_errors: int
    n_failed: int = 0


@dataclass(frozen=True)
class EvalReport:
    per_language: dict[str, LanguageScore]
    cer: float
    wer: float
    per: float | None
    repetition_rate: float
    n_records: int
    n_failed: int

    def to_dict(self) -> dict:
        return {
            "aggregate": {
                "cer": self.cer,
                "wer": self.wer,
                "per": self.per,
                "repetition_rate": self.repetition_rate,
                "n_records": self.n_records,
                "n_failed": self.n_failed,
            },
            "per_language": {
                code: {
                    "name": REGISTRY[code].name,
                    "cer": s.cer,
                    "wer": s.wer,
                    "per": s.per,
                    "n_records": s.n_records,
                    "n_format_errors": s.n_format_errors,
                    "n_failed": s.n_failed,
                }
                for code, s in self.per_language.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2) + "\n"

    def to_tsv(self) -> str:
        out = io.StringIO()
        out.write("lang\tcer\twer\tper\tn_records\tn_format_errors\tn_failed\n")
        for code, s in self.per_language.items():
            out.write(
                f"{code}\t{s.cer:.6f}\t{s.wer:.6f}\t{_opt(s.per, '.6f')}\t"
                f"{s.n_records}\t{s.n_format_errors}\t{s.n_failed}\n"
            )
        n_fmt = sum(s.n_format_errors for s in self.per_language.values())
        out.write(
            f"average\t{self.cer:.6f}\t{self.wer:.6f}\t{_opt(self.per, '.6f')}\t"
            f"{self.n_records}\t{n_fmt}\t{self.n_failed}\n"
        )
        return out.getvalue()

    def to_markdown(self) -> str:
        """Rates as percentages with one decimal."""
        lines = [
            "| Language | CER (%) | WER (%) | PER (%) | Records | Format errors |",
            "|---|---:|---:|---:|---:|---:|",
        ]
        for code, s in self.per_language.items():
            lines.append(
                f"| {REGISTRY[code].name} ({code}) | {100 * s.cer:.1f} | {100 * s.wer:.1f} "
                f"| {_pct(s.per)} | {s.n_records} | {s.n_format_errors} |"
            )
        n_fmt = sum(s.n_format_errors for s in self.per_language.values())
        lines.append(
            f"| **Average** | {100 * self.cer:.1f} | {100 * self.wer:.1f} | {_pct(self.per)} "
            f"| {self.n_records} | {n_fmt} |"
        )
        lines.append("")
        lines.append(f"Repetition rate: {100 * self.repetition_rate:.1f}%")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "tsv":
            return self.to_tsv()
        if fmt == "md":
            return self.to_markdown()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown report format {fmt!r}; expected one of {REPORT_FORMATS}")


def _opt(value: float | None, fmt_spec: str) -> str:
    return "" if value is None else format(value, fmt_spec)


def _pct(value: float | None) -> str:
    return "-" if value is None else f"{100 * value:.1f}"


def aggregate_report(rows: Iterable[ScoredRow]) -> EvalReport:
    """Per-language means and their unweighted average across languages.

    Languages appear in sorted code order. PER is reported for a language only
    when every one of its rows carries phone sequences. The repetition rate
    counts only rows that reached the converter. ``n_failed`` counts rows
    with no hypothesis for a reason other than a format error.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("cannot aggregate an empty set of rows")
    by_lang: dict[str, list[ScoredRow]] = {}
    for row in rows:
        REGISTRY[row.lang]
        by_lang.setdefault(row.lang, []).append(row)

    per_language = {}
    for code in sorted(by_lang):
        group = by_lang[code]
        pers = [r.per() for r in group]
        per_language[code] = LanguageScore(
            lang=code,
            cer=fmean(r.cer() for r in group),
            wer=fmean(r.wer() for r in group),
            per=None if any(p is None for p in pers) else fmean(pers),
            n_records=len(group),
            n_format_errors=sum(r.status is Status.FORMAT_ERROR for r in group),
            n_failed=sum(r.hyp is None and r.status is not Status.FORMAT_ERROR for r in group),
        )

    scores = list(per_language.values())
    pers = [s.per for s in scores if s.per is not None]
    n_fmt = sum(s.n_format_errors for s in scores)
    n_converted = sum(r.status is not None for r in rows)
    return EvalReport(
        per_language=per_language,
        cer=fmean(s.cer for s in scores),
        wer=fmean(s.wer for s in scores),
        per=fmean(pers) if pers else None,
        repetition_rate=n_fmt / n_converted if n_converted else 0.0,
        n_records=len(rows),
        n_failed=sum(s.n_failed for s in scores),
    )
