"""Synthetic emission matrices and text perturbation.

Stands in for an acoustic model: a Roman string becomes a matrix whose frames
put nearly all their mass on the string's tokens, with controllable
character-level substitution/deletion and frame-level blank bleed.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace

import numpy as np

from unitrans.ctc import EmissionMatrix, Vocabulary

# probability given to every off-target token before renormalization
FLOOR = 1e-5
_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class NoiseSpec:
    substitution_rate: float = 0.0
    deletion_rate: float = 0.0
    blank_bleed: float = 0.0
    frames_per_char: int = 2
    seed: int = 0

    def __post_init__(self):
        for name in ("substitution_rate", "deletion_rate", "blank_bleed"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.substitution_rate + self.deletion_rate > 1.0:
            raise ValueError("substitution_rate + deletion_rate must not exceed 1")
        if self.frames_per_char < 1:
            raise ValueError("frames_per_char must be >= 1")

    def with_seed(self, seed: int) -> NoiseSpec:
        return replace(self, seed=seed)

    @property
    def is_zero(self) -> bool:
        return not (self.substitution_rate or self.deletion_rate or self.blank_bleed)


def derive_seed(seed: int, key: str | int) -> int:
    """Per-record seed: ``seed`` XOR a stable 64-bit hash of ``key``."""
    digest = hashlib.blake2b(str(key).encode("utf-8"), digest_size=8).digest()
    return (seed ^ int.from_bytes(digest, "little")) & _U64


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed & _U64)


def _char_noise(rng, n, spec, letters):
    """Per-character draws: 0 keep, 1 substitute, 2 delete, plus a replacement.

    Both draws are always consumed so that, for a fixed seed, raising a rate
    only ever adds corrupted positions.
    """
    u = rng.random(n)
    pick = rng.integers(0, len(letters) - 1, size=n) if len(letters) > 1 else np.zeros(n, int)
    action = np.where(
        u < spec.substitution_rate,
        1,
        np.where(u < spec.substitution_rate + spec.deletion_rate, 2, 0),
    )
    return action, pick


def _substitute(original: int, pick: int, letters: list[int]) -> int:
    others = [t for t in letters if t != original]
    return others[pick % len(others)] if others else original


def synthesize_emissions(text: str, vocab: Vocabulary, spec: NoiseSpec) -> EmissionMatrix:
    """Build an emission matrix whose zero-noise greedy decoding is ``text``.

    Each character gets ``frames_per_char`` frames; a blank frame separates
    consecutive identical tokens. Raises VocabularyError for characters the
    vocabulary cannot express.
    """
    tokens = [vocab.encode_char(ch) for ch in text]
    letters = vocab.letter_indices()
    blank = vocab.blank_index
    rng = _rng(spec.seed)
    action, pick = _char_noise(rng, len(tokens), spec, letters)

    frames: list[int] = []
    for tok, act, p in zip(tokens, action, pick):
        if act == 1:
            tok = _substitute(tok, int(p), letters)
        elif act == 2:
            tok = blank
        if tok != blank and frames and frames[-1] == tok:
            frames.append(blank)
        frames.extend([tok] * spec.frames_per_char)

    V = len(vocab)
    probs = np.full((len(frames), V), FLOOR, dtype=np.float64)
    rows = np.arange(len(frames))
    target = np.asarray(frames, dtype=np.int64)
    probs[rows, target] += 1.0
    if spec.blank_bleed:
        moved = np.where(target != blank, spec.blank_bleed, 0.0)
        probs[rows, target] -= moved
        probs[rows, blank] += moved
    probs /= probs.sum(axis=1, keepdims=True)
    return EmissionMatrix(np.log(probs).astype(np.float32))


def perturb_text(text: str, spec: NoiseSpec, vocab: Vocabulary | None = None) -> str:
    """Independently substitute or delete each character per ``spec``.

    Substitutes are drawn uniformly from the vocabulary's letters, excluding
    the original character.
    """
    vocab = vocab or Vocabulary.default()
    letters = [vocab.tokens[i] for i in vocab.letter_indices()]
    rng = _rng(spec.seed)
    action, pick = _char_noise(rng, len(text), spec, letters)
    out = []
    for ch, act, p in zip(text, action, pick):
        if act == 1:
            others = [c for c in letters if c != ch]
            out.append(others[int(p) % len(others)])
        elif act == 0:
            out.append(ch)
    return "".join(out)
