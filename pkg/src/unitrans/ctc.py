"""Lexicon-free CTC decoding of emission matrices into Romanized text.

Emission files use the LEM1 layout::

    offset  size   field
    0       4      magic b"LEM1"
    4       4      T  (uint32, little-endian)
    8       4      V  (uint32, little-endian)
    12      4*T*V  float32 natural-log probabilities, row-major

The vocabulary sidecar is UTF-8 text, one token per line, with the blank
``<b>`` on line 0 and the word separator written as ``|``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from unitrans import _kernels
from unitrans.errors import EmissionFormatError, VocabularyError

BLANK = "<b>"
SEPARATOR = "|"
UNIVERSAL_LETTERS = frozenset("abcdefghijklmnopqrstuvwxyz'")

MAGIC = b"LEM1"
_HEADER = struct.Struct("<4sII")
ROW_SUM_TOLERANCE = 1e-3
DEFAULT_BEAM_SIZE = 100


@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    blank_index = 0

    def __post_init__(self):
        tokens = tuple(self.tokens)
        object.__setattr__(self, "tokens", tokens)
        if not tokens or tokens[0] != BLANK:
            raise VocabularyError(f"token 0 must be the blank {BLANK!r}")
        if len(set(tokens)) != len(tokens):
            raise VocabularyError("duplicate tokens in vocabulary")
        if SEPARATOR not in tokens:
            raise VocabularyError(f"separator {SEPARATOR!r} missing")
        for tok in tokens[1:]:
            if tok != SEPARATOR and tok not in UNIVERSAL_LETTERS:
                raise VocabularyError(
                    f"token {tok!r} is not a single universal-alphabet character"
                )
        object.__setattr__(self, "index", {t: i for i, t in enumerate(tokens)})

    def __len__(self):
        return len(self.tokens)

    @property
    def separator_index(self) -> int:
        return self.index[SEPARATOR]

    def letter_indices(self) -> list[int]:
        """Indices of tokens that are neither blank nor separator."""
        return [i for i, t in enumerate(self.tokens) if i != 0 and t != SEPARATOR]

    def symbol(self, index: int) -> str:
        """Output character for a non-blank token (separator renders as space)."""
        tok = self.tokens[index]
        return " " if tok == SEPARATOR else tok

    def encode_char(self, ch: str) -> int:
        key = SEPARATOR if ch == " " else ch
        try:
            return self.index[key]
        except KeyError:
            raise VocabularyError(f"character {ch!r} not in vocabulary") from None

    @classmethod
    def default(cls) -> Vocabulary:
        """Blank, separator, apostrophe and a-z: 29 tokens."""
        return cls((BLANK, SEPARATOR, "'", *"abcdefghijklmnopqrstuvwxyz"))

    @classmethod
    def load(cls, path: str | Path) -> Vocabulary:
        with open(path, encoding="utf-8") as fh:
            tokens = [line.rstrip("\r\n") for line in fh]
        while tokens and tokens[-1] == "":
            tokens.pop()
        return cls(tuple(tokens))

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(self.tokens) + "\n")


@dataclass(frozen=True, eq=False)
class EmissionMatrix:
    """T x V frame log-probabilities, stored as float32 like the file format."""

    logp: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.logp, dtype=np.float32)
        if arr.ndim != 2:
            raise EmissionFormatError(f"expected a 2-D matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise EmissionFormatError("matrix contains NaN or Inf")
        if arr.shape[0]:
            sums = np.exp(arr.astype(np.float64)).sum(axis=1)
            bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_TOLERANCE)
            if bad.size:
                t = int(bad[0])
                raise EmissionFormatError(
                    f"row {t} is not normalized (probabilities sum to {sums[t]:.6f})"
                )
        arr.setflags(write=False)
        object.__setattr__(self, "logp", arr)

    @property
    def n_frames(self) -> int:
        return self.logp.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.logp.shape[1]

    def __eq__(self, other):
        if not isinstance(other, EmissionMatrix):
            return NotImplemented
        return self.logp.shape == other.logp.shape and self.logp.tobytes() == other.logp.tobytes()

    def check_vocab(self, vocab: Vocabulary) -> None:
        if self.vocab_size != len(vocab):
            raise EmissionFormatError(
                f"emission width {self.vocab_size} does not match vocabulary size {len(vocab)}"
            )


def write_emissions(path: str | Path, em: EmissionMatrix) -> None:
    T, V = em.logp.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, T, V))
        fh.write(em.logp.astype("<f4").tobytes())


def read_emissions(path: str | Path, vocab: Vocabulary) -> EmissionMatrix:
    """Read and validate a LEM1 file against ``vocab``."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise EmissionFormatError(f"{path}: file shorter than the LEM1 header")
    magic, T, V = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise EmissionFormatError(f"{path}: bad magic {magic!r}")
    expected = _HEADER.size + 4 * T * V
    if len(data) < expected:
        raise EmissionFormatError(
            f"{path}: truncated payload ({len(data)} bytes, expected {expected})"
        )
    if len(data) > expected:
        raise EmissionFormatError(f"{path}: {len(data) - expected} trailing bytes")
    if V != len(vocab):
        raise EmissionFormatError(
            f"{path}: V={V} does not match vocabulary size {len(vocab)}"
        )
    logp = np.frombuffer(data, dtype="<f4", count=T * V, offset=_HEADER.size)
    try:
        return EmissionMatrix(logp.reshape(T, V).astype(np.float32))
    except EmissionFormatError as exc:
        raise EmissionFormatError(f"{path}: {exc}") from None


@dataclass(frozen=True)
class DecodeResult:
    text: str
    log_score: float
    n_frames: int
    labels: tuple[int, ...] = ()


def labels_to_text(labels: Sequence[int], vocab: Vocabulary) -> str:
    """Render a collapsed label sequence; separator runs become single spaces."""
    return " ".join("".join(vocab.symbol(i) for i in labels).split())


def collapse_labels(path: Sequence[int], vocab: Vocabulary) -> tuple[int, ...]:
    out = []
    prev = None
    n = len(vocab)
    for idx in path:
        idx = int(idx)
        if not 0 <= idx < n:
            raise IndexError(f"token index {idx} out of range for vocabulary of size {n}")
        if idx != prev and idx != vocab.blank_index:
            out.append(idx)
        prev = idx
    return tuple(out)


def collapse(path: Sequence[int], vocab: Vocabulary) -> str:
    """CTC labeling function: merge repeats, drop blanks, map separator to space.

    Leading, trailing and repeated separators are tidied so the result is
    valid Roman text.
    """
    return labels_to_text(collapse_labels(path, vocab), vocab)


def greedy_decode(em: EmissionMatrix, vocab: Vocabulary) -> DecodeResult:
    em.check_vocab(vocab)
    logp = em.logp.astype(np.float64)
    best = np.argmax(logp, axis=1)  # first maximum wins ties
    score = float(logp[np.arange(len(best)), best].sum())
    labels = collapse_labels(best.tolist(), vocab)
    return DecodeResult(labels_to_text(labels, vocab), score, em.n_frames, labels)


def beam_decode(
    em: EmissionMatrix, vocab: Vocabulary, beam_size: int = DEFAULT_BEAM_SIZE
) -> DecodeResult:
    """Prefix beam search with no lexicon and no language model.

    ``log_score`` is the summed log-probability of all alignment paths of the
    winning labeling that survived pruning (exact when nothing was pruned).
    """
    if beam_size < 1:
        raise ValueError("beam_size must be >= 1")
    em.check_vocab(vocab)
    labels, score = _kernels.beam_search(
        em.logp.astype(np.float64), int(beam_size), vocab.blank_index
    )
    return DecodeResult(labels_to_text(labels, vocab), float(score), em.n_frames, labels)
