"""Compare the compiled and pure-Python kernel backends.

Usage:
    python benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Also checks that both backends return identical results on every input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from unitrans import _kernels
from unitrans.ctc import Vocabulary
from unitrans.synth import NoiseSpec, synthesize_emissions

BEAM_CASES = [
    # (label, T, beam)
    ("random T=50 beam=10", 50, 10),
    ("random T=100 beam=100", 100, 100),
    ("random T=300 beam=100", 300, 100),
    ("synth 40 chars beam=100", None, 100),
]
EDIT_CASES = [50, 200, 1000]


def random_logp(rng, T, V):
    x = rng.normal(0, 2, (T, V))
    x -= np.logaddexp.reduce(x, axis=1, keepdims=True)
    return x


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args(argv)

    if "compiled" not in _kernels.AVAILABLE:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    py, c = _kernels.AVAILABLE["python"], _kernels.AVAILABLE["compiled"]
    rng = np.random.default_rng(0)
    vocab = Vocabulary.default()
    rows = []

    for label, T, beam in BEAM_CASES:
        if T is None:
            text = "the quick brown fox jumps over the lazy dog"[:40]
            em = synthesize_emissions(text, vocab, NoiseSpec(substitution_rate=0.1, blank_bleed=0.2, seed=1))
            logp = em.logp.astype(np.float64)
        else:
            logp = random_logp(rng, T, len(vocab))
        t_py, r_py = best_of(lambda: py.beam_search(logp, beam, 0), args.repeat)
        t_c, r_c = best_of(lambda: c.beam_search(logp, beam, 0), args.repeat)
        rows.append(("beam_search", label, t_py, t_c, r_py == r_c))

    for n in EDIT_CASES:
        a = rng.integers(0, 30, n).tolist()
        b = rng.integers(0, 30, n).tolist()
        t_py, r_py = best_of(lambda: py.edit_distance(a, b), args.repeat)
        t_c, r_c = best_of(lambda: c.edit_distance(a, b), args.repeat)
        rows.append(("edit_distance", f"n={n}", t_py, t_c, r_py == r_c))

    print(f"{'kernel':<14} {'case':<26} {'python (ms)':>12} {'compiled (ms)':>14} {'speedup':>8}  same")
    for kernel, label, t_py, t_c, same in rows:
        print(f"{kernel:<14} {label:<26} {1e3 * t_py:>12.2f} {1e3 * t_c:>14.3f} {t_py / t_c:>7.0f}x  {same}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(
                [dict(zip(("kernel", "case", "python_s", "compiled_s", "identical"), r)) for r in rows],
                fh,
                indent=2,
            )
    return 0 if all(r[-1] for r in rows) else 2


if __name__ == "__main__":
    sys.exit(main())
