from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tests.oracles import exhaustive_best, levenshtein_table, random_emissions
from unitrans import _kernels, _pykernels


def test_python_fallback_always_available():
    assert "python" in _kernels.AVAILABLE
    assert _kernels.BACKEND in _kernels.AVAILABLE


def test_beam_search_matches_enumeration(kernels):
    rng = np.random.default_rng(11)
    for _ in range(60):
        T, V = int(rng.integers(1, 6)), int(rng.integers(2, 5))
        logp = random_emissions(rng, T, V)
        labels, score = kernels.beam_search(logp, 500, 0)
        best, best_score = exhaustive_best(logp)
        assert labels == best
        assert score == pytest.approx(best_score, abs=1e-9)


def test_beam_search_empty_matrix(kernels):
    labels, score = kernels.beam_search(np.zeros((0, 3)), 10, 0)
    assert labels == ()
    assert score == 0.0


def test_beam_one_keeps_a_single_prefix(kernels):
    logp = np.log(np.array([[0.1, 0.9], [0.1, 0.9], [0.9, 0.1]]))
    labels, _ = kernels.beam_search(logp, 1, 0)
    assert labels == (1,)


def test_nonzero_blank_index(kernels):
    # token 2 is the blank here
    logp = np.log(np.array([[0.8, 0.1, 0.1], [0.1, 0.1, 0.8], [0.8, 0.1, 0.1]]))
    labels, _ = kernels.beam_search(logp, 10, 2)
    assert labels == (0, 0)


@pytest.mark.skipif("compiled" not in _kernels.AVAILABLE, reason="extension not built")
def test_backends_are_bit_identical():
    rng = np.random.default_rng(5)
    compiled = _kernels.AVAILABLE["compiled"]
    for _ in range(100):
        T, V = int(rng.integers(1, 40)), int(rng.integers(2, 12))
        logp = random_emissions(rng, T, V, scale=float(rng.uniform(0.5, 4)))
        beam = int(rng.integers(1, 20))
        assert compiled.beam_search(logp, beam, 0) == _pykernels.beam_search(logp, beam, 0)


@pytest.mark.skipif("compiled" not in _kernels.AVAILABLE, reason="extension not built")
def test_backends_agree_on_ties():
    logp = np.log(np.full((4, 3), 1 / 3))
    compiled = _kernels.AVAILABLE["compiled"]
    for beam in (1, 2, 3, 8):
        assert compiled.beam_search(logp, beam, 0) == _pykernels.beam_search(logp, beam, 0)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.integers(0, 4), max_size=15),
    st.lists(st.integers(0, 4), max_size=15),
)
def test_edit_distance_matches_table(a, b):
    for impl in _kernels.AVAILABLE.values():
        assert impl.edit_distance(a, b) == levenshtein_table(a, b)


def test_two_frame_example(kernels):
    # paths a.b, b.a, a.a for "a": 0.4*0.6 * 2 + 0.4*0.4 = 0.64 beats blank-blank 0.36
    logp = np.log(np.array([[0.6, 0.4], [0.6, 0.4]]))
    labels, score = kernels.beam_search(logp, 100, 0)
    assert labels == (1,)
    assert score == pytest.approx(np.log(0.64), abs=1e-12)


def test_single_frame(kernels):
    labels, _ = kernels.beam_search(np.log(np.array([[0.3, 0.7]])), 100, 0)
    assert labels == (1,)
