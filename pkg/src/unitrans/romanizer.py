"""Rule-table transliteration into the universal Roman alphabet.

Table files are UTF-8, one ``source<TAB>target`` rule per line. Lines starting
with ``#`` are comments. Two directives are recognised::

    %include NAME        splice in NAME.tsv from the same directory
    %normalize NFD       apply a Unicode normal form before matching

Matching is greedy, left to right, longest source first. The text is padded
with one space on each side, so a source with a leading or trailing space
matches only at a word boundary. A one-character rule whose target is a
single space acts as a word separator and is applied before matching.
"""

from __future__ import annotations

import logging
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple

from unitrans.corpus import REGISTRY
from unitrans.errors import RomanizationError, RuleTableError, UnsupportedScriptError

logger = logging.getLogger(__name__)

ALPHABET = frozenset("abcdefghijklmnopqrstuvwxyz' ")
TABLE_DIR = Path(__file__).parent / "data" / "tables"
INDEX_FILE = "index.tsv"
FALLBACK_TABLE = "latin"


class Rule(NamedTuple):
    source: str
    target: str


@dataclass(frozen=True)
class ScriptRuleTable:
    name: str
    rules: tuple[Rule, ...]
    normalization: str | None = None
    _lookup: dict[str, str] = field(init=False, repr=False, compare=False)
    _max_len: int = field(init=False, repr=False, compare=False)
    _separators: frozenset[str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ordered = tuple(sorted(self.rules, key=lambda r: -len(r.source)))
        object.__setattr__(self, "rules", ordered)
        object.__setattr__(self, "_lookup", {r.source: r.target for r in ordered})
        object.__setattr__(self, "_max_len", max((len(r.source) for r in ordered), default=0))
        seps = frozenset(r.source for r in ordered if len(r.source) == 1 and r.target == " ")
        object.__setattr__(self, "_separators", seps)

    def __len__(self):
        return len(self.rules)

    def apply(self, text: str) -> tuple[str, list[Dropped]]:
        """Transliterate ``text``; returns the Roman text and dropped characters."""
        if self.normalization:
            text = unicodedata.normalize(self.normalization, text)
        seps = self._separators
        text = "".join(" " if ch.isspace() or ch in seps else ch for ch in text)
        padded = f" {text} "
        lookup, max_len = self._lookup, self._max_len
        out: list[str] = []
        dropped: list[Dropped] = []
        i, n = 0, len(padded)
        while i < n:
            for size in range(min(max_len, n - i), 0, -1):
                target = lookup.get(padded[i : i + size])
                if target is not None:
                    out.append(target)
                    i += size
                    break
            else:
                ch = padded[i]
                if ch in ALPHABET:
                    out.append(ch)
                else:
                    dropped.append(Dropped(ch, i - 1))
                i += 1
        return " ".join("".join(out).split()), dropped


class Dropped(NamedTuple):
    char: str
    position: int

    def describe(self) -> str:
        name = unicodedata.name(self.char, "UNNAMED")
        return f"U+{ord(self.char):04X} {name} at {self.position}"


def _parse_table(path: Path, stack: tuple[Path, ...] = ()) -> tuple[list[Rule], str | None]:
    if path in stack:
        chain = " -> ".join(p.stem for p in (*stack, path))
        raise RuleTableError(f"include cycle: {chain}")
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        raise RuleTableError(f"rule table not found: {path}") from None

    rules: list[Rule] = []
    own: dict[str, int] = {}
    own_rules: dict[str, Rule] = {}
    normalization = None
    for lineno, line in enumerate(lines, start=1):
        if not line or line.startswith("#"):
            continue
        where = f"{path.name}:{lineno}"
        if line.startswith("%"):
            directive, _, arg = line[1:].partition(" ")
            arg = arg.strip()
            if directive == "include":
                included, inc_norm = _parse_table(path.with_name(f"{arg}.tsv"), (*stack, path))
                rules.extend(included)
                normalization = normalization or inc_norm
            elif directive == "normalize":
                if arg not in ("NFC", "NFD", "NFKC", "NFKD"):
                    raise RuleTableError(f"{where}: unknown normal form {arg!r}")
                normalization = arg
            else:
                raise RuleTableError(f"{where}: unknown directive %{directive}")
            continue
        if "\t" not in line:
            raise RuleTableError(f"{where}: expected 'source<TAB>target'")
        source, target = line.split("\t", 1)
        if not source:
            raise RuleTableError(f"{where}: empty source")
        bad = sorted(set(target) - ALPHABET)
        if bad:
            raise RuleTableError(
                f"{where}: invalid target {target!r} (characters {''.join(bad)!r} "
                "are outside the universal alphabet)"
            )
        if set(source) <= ALPHABET:
            raise RuleTableError(
                f"{where}: source {source!r} is already Roman text; such a rule "
                "would make romanization non-idempotent"
            )
        if source in own:
            raise RuleTableError(
                f"{where}: duplicate source {source!r} (first defined on line {own[source]})"
            )
        own[source] = lineno
        rule = Rule(source, target)
        own_rules[source] = rule
        rules.append(rule)

    # a table's own rules override same-source rules it included; among
    # included rules the first definition wins
    merged: dict[str, Rule] = {}
    for rule in rules:
        if rule.source in own and own_rules[rule.source] is not rule:
            continue
        merged.setdefault(rule.source, rule)
    return list(merged.values()), normalization


def load_rule_table(path: str | Path) -> ScriptRuleTable:
    """Parse and validate a table file, resolving ``%include`` relative to it."""
    path = Path(path)
    rules, normalization = _parse_table(path)
    return ScriptRuleTable(path.stem, tuple(rules), normalization)


def load_index(path: str | Path) -> dict[str, str]:
    """Read a ``code<TAB>table`` selection file."""
    index = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            code, table = line.split("\t")
        except ValueError:
            raise RuleTableError(f"{path}:{lineno}: expected 'code<TAB>table'") from None
        index[code] = table
    return index


class Romanization(NamedTuple):
    text: str
    dropped: tuple[Dropped, ...]
    table: str | None


class Romanizer:
    """Selects a rule table per language and applies it."""

    def __init__(self, table_dir: str | Path = TABLE_DIR, index: dict[str, str] | None = None):
        self.table_dir = Path(table_dir)
        self.index = index if index is not None else load_index(self.table_dir / INDEX_FILE)
        self._tables: dict[str, ScriptRuleTable] = {}

    def table(self, name: str) -> ScriptRuleTable:
        if name not in self._tables:
            self._tables[name] = load_rule_table(self.table_dir / f"{name}.tsv")
        return self._tables[name]

    def table_names(self) -> list[str]:
        return sorted(p.stem for p in self.table_dir.glob("*.tsv") if p.name != INDEX_FILE)

    def transliterate(self, text: str, lang: str, strict: bool = False) -> Romanization:
        REGISTRY[lang]  # raises on unknown codes
        name = self.index.get(lang)
        table = self.table(name or FALLBACK_TABLE)
        out, dropped = table.apply(text)
        if name is None:
            letters = [d for d in dropped if unicodedata.category(d.char)[0] in "LM"]
            if letters:
                raise UnsupportedScriptError(
                    f"no rule table for language {lang!r} and the text is not Latin "
                    f"({letters[0].describe()})"
                )
        if dropped:
            if strict:
                raise RomanizationError(
                    f"no rule for {dropped[0].describe()} (table {table.name!r})"
                )
            for d in dropped:
                logger.debug("dropped %s (table %s)", d.describe(), table.name)
        return Romanization(out, tuple(dropped), table.name if name else None)

    def romanize(self, text: str, lang: str, strict: bool = False) -> str:
        return self.transliterate(text, lang, strict).text


@lru_cache(maxsize=1)
def default_romanizer() -> Romanizer:
    return Romanizer()


def romanize(text: str, lang: str, strict: bool = False) -> str:
    """Romanize normalized ``text`` with the shipped table for ``lang``."""
    return default_romanizer().romanize(text, lang, strict)
