"""Shared fixture loaders and input generators."""

from __future__ import annotations

import random
from pathlib import Path

from unitrans.romanizer import ScriptRuleTable

FIXTURES = Path(__file__).parent / "fixtures"

_EXTRA = "abcxyz' .,!?-\t\n()«»—…́̈‍0123456789éßøłçñ"


def read_tsv(path: Path) -> list[list[str]]:
    rows = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line and not line.startswith("#"):
            rows.append(line.split("\t"))
    return rows


def oracle_fixtures() -> list[tuple[str, str, str]]:
    return [tuple(r) for r in read_tsv(FIXTURES / "romanize_oracle.tsv")]


def documented_divergences() -> dict[tuple[str, str], str]:
    return {(lang, text): reason for lang, text, reason in read_tsv(FIXTURES / "romanize_divergences.tsv")}


def fuzz_strings(table: ScriptRuleTable, rng: random.Random, n: int, max_len: int = 24) -> list[str]:
    """Strings mixing the table's rule sources, ASCII, punctuation and random code points."""
    pieces = [r.source for r in table.rules] + list(_EXTRA)
    out = []
    for _ in range(n):
        parts = []
        for _ in range(rng.randint(0, max_len)):
            roll = rng.random()
            if roll < 0.75:
                parts.append(rng.choice(pieces))
            elif roll < 0.9:
                parts.append(" ")
            else:
                parts.append(chr(rng.randint(0x20, 0x2FFF)))
        out.append("".join(parts))
    return out
