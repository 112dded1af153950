"""Prompt rendering for the Roman-to-native converter.

Five strategies are supported. Templates use ``{lang}``, ``{roman}``,
``{shots}`` and ``{pred}`` slots; ``{pred}`` only occurs in the second turn of
prompt chaining and is filled once the first turn has been answered.
"""

from __future__ import annotations

import enum
import json
import random
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from unitrans.errors import PromptError

GOLDEN_FILE = Path(__file__).parent / "data" / "prompt_templates.json"
DEFAULT_SHOTS = 5
SHOT_SEPARATOR = " -> "


class PromptStrategy(str, enum.Enum):
    ZERO_SHOT = "zero_shot"
    FEW_SHOT = "few_shot"
    ZERO_SHOT_COT = "zero_shot_cot"
    FEW_SHOT_COT = "few_shot_cot"
    PROMPT_CHAINING = "prompt_chaining"

    @property
    def uses_shots(self) -> bool:
        return self in (PromptStrategy.FEW_SHOT, PromptStrategy.FEW_SHOT_COT)

    @property
    def n_turns(self) -> int:
        return 2 if self is PromptStrategy.PROMPT_CHAINING else 1


_FEW_SHOT_HEAD = (
    "Here are some examples of transcribing a Romanized sentence into a {lang} sentence: "
    "{shots}.\nConsidering the examples above, transcribe the following Romanized "
    "sentence into a {lang} sentence"
)

TEMPLATES: dict[PromptStrategy, tuple[str, ...]] = {
    PromptStrategy.ZERO_SHOT: (
        "Transcribe following Romanized sentence into a {lang} sentence: {roman}.",
    ),
    PromptStrategy.FEW_SHOT: (_FEW_SHOT_HEAD + ": {roman}.",),
    PromptStrategy.ZERO_SHOT_COT: (
        "Transcribe the following Romanized sentence into a {lang} sentence. "
        "Think step by step: {roman}.",
    ),
    PromptStrategy.FEW_SHOT_COT: (_FEW_SHOT_HEAD + ".\nThink step by step: {roman}.",),
    PromptStrategy.PROMPT_CHAINING: (
        "Transcribe the following Romanized sentence into a {lang} sentence, "
        "based on its pronunciation: {roman}.",
        "Correct the typographical and spacing errors in the following {lang} sentence: {pred}.",
    ),
}

_SLOT = re.compile(r"\{(lang|roman|shots|pred)\}")


@lru_cache(maxsize=1)
def golden_templates() -> dict[str, tuple[str, ...]]:
    """The shipped reference copy of the templates, keyed by strategy value."""
    data = json.loads(GOLDEN_FILE.read_text(encoding="utf-8"))
    return {k: tuple(v) for k, v in data.items()}


@dataclass(frozen=True)
class FewShotExample:
    roman: str
    target: str
    source_id: str

    def render(self) -> str:
        return f"{self.roman}{SHOT_SEPARATOR}{self.target}"


@dataclass(frozen=True)
class RenderedPrompt:
    strategy: PromptStrategy
    turns: tuple[str, ...]
    roman: str = ""
    shot_ids: tuple[str, ...] = ()

    @property
    def awaiting_pred(self) -> bool:
        return len(self.turns) > 1 and "{pred}" in self.turns[1]

    def fill_pred(self, pred: str) -> str:
        """Second chaining turn with the first turn's answer substituted."""
        if not self.awaiting_pred:
            raise PromptError(f"{self.strategy.value} prompt has no {{pred}} slot")
        return _fill(self.turns[1], {"pred": pred})


def _fill(template: str, values: dict[str, str]) -> str:
    # single pass, so substituted text is never re-scanned for slots
    return _SLOT.sub(lambda m: values.get(m.group(1), m.group(0)), template)


def sample_shots(
    pool: Sequence[FewShotExample],
    n: int = DEFAULT_SHOTS,
    seed: int = 0,
    exclude_id: str | None = None,
) -> list[FewShotExample]:
    """Draw ``n`` examples uniformly without replacement, never ``exclude_id``.

    Returns the whole (shuffled) pool when it holds fewer than ``n`` examples.
    """
    if n < 1:
        raise PromptError("number of shots must be >= 1")
    candidates = [ex for ex in pool if ex.source_id != exclude_id]
    if not candidates:
        raise PromptError("few-shot pool is empty after excluding the current record")
    return random.Random(seed).sample(candidates, min(n, len(candidates)))


def render_prompt(
    strategy: PromptStrategy | str,
    lang_name: str,
    roman: str,
    shots: Sequence[FewShotExample] = (),
) -> RenderedPrompt:
    """Fill the strategy's template(s).

    Raises:
        PromptError: shots were given to a strategy that takes none, or a
            few-shot strategy got no shots.
    """
    strategy = PromptStrategy(strategy)
    if strategy.uses_shots and not shots:
        raise PromptError(f"{strategy.value} requires at least one shot")
    if shots and not strategy.uses_shots:
        raise PromptError(f"{strategy.value} does not take shots")
    values = {
        "lang": lang_name,
        "roman": roman,
        "shots": "\n".join(ex.render() for ex in shots),
    }
    turns = tuple(_fill(t, values) for t in TEMPLATES[strategy])
    return RenderedPrompt(strategy, turns, roman, tuple(ex.source_id for ex in shots))
