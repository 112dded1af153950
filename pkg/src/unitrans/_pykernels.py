"""Pure-Python kernels, used when the compiled extension is unavailable.

``beam_search`` mirrors ``_beam.hpp`` step for step so both backends return
bit-identical scores.
"""

from __future__ import annotations

import heapq
from math import exp, inf, log1p

BACKEND = "python"

NEG = -inf


def log_add(a: float, b: float) -> float:
    if a < b:
        a, b = b, a
    if b == NEG:
        return a
    return a + log1p(exp(b - a))


def beam_search(logp, beam_size: int, blank: int = 0) -> tuple[tuple[int, ...], float]:
    """CTC prefix beam search over a T x V log-probability matrix.

    Each kept prefix tracks the mass of alignments ending in blank and in its
    last label. Candidates are ranked by total mass, ties broken by the
    lexicographically smaller label tuple. Returns the best prefix and its
    log-score.
    """
    rows = logp.tolist() if hasattr(logp, "tolist") else [list(r) for r in logp]
    vocab = len(rows[0]) if rows else 0
    labels = [c for c in range(vocab) if c != blank]
    beam: list[tuple[tuple[int, ...], float, float]] = [((), 0.0, NEG)]

    for row in rows:
        cands: dict[tuple[int, ...], list[float]] = {p: [NEG, NEG] for p, _, _ in beam}
        p_blank = row[blank]
        for prefix, pb, pnb in beam:
            total = log_add(pb, pnb)
            last = prefix[-1] if prefix else -1
            entry = cands[prefix]
            entry[0] = log_add(entry[0], total + p_blank)
            if last >= 0:
                entry[1] = log_add(entry[1], pnb + row[last])
            for c in labels:
                add = (pb if c == last else total) + row[c]
                ext = prefix + (c,)
                slot = cands.get(ext)
                if slot is None:
                    slot = cands[ext] = [NEG, NEG]
                slot[1] = log_add(slot[1], add)

        ranked = heapq.nsmallest(
            beam_size,
            ((log_add(pb, pnb), p, pb, pnb) for p, (pb, pnb) in cands.items()),
            key=lambda item: (-item[0], item[1]),
        )
        beam = [(p, pb, pnb) for _, p, pb, pnb in ranked]

    prefix, pb, pnb = beam[0]
    return prefix, log_add(pb, pnb)


def edit_distance(a, b) -> int:
    a, b = list(a), list(b)
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        cur = [i]
        for j, y in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]
