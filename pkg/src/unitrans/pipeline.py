"""End-to-end runs: manifest to emissions to Roman text to native text to scores."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from unitrans.converter import (
    ConversionOutcome,
    ConverterConfig,
    Transport,
    convert_batch,
)
from unitrans.corpus import REGISTRY, UtteranceRecord, load_manifest, prepare_records
from unitrans.ctc import (
    DEFAULT_BEAM_SIZE,
    Vocabulary,
    beam_decode,
    read_emissions,
)
from unitrans.errors import ConfigError, UnitransError
from unitrans.metrics import REPORT_FORMATS, EvalReport, ScoredRow, aggregate_report
from unitrans.prompts import (
    DEFAULT_SHOTS,
    FewShotExample,
    PromptStrategy,
    RenderedPrompt,
    render_prompt,
    sample_shots,
)
from unitrans.romanizer import TABLE_DIR, Romanizer
from unitrans.synth import NoiseSpec, derive_seed, synthesize_emissions

logger = logging.getLogger(__name__)

FILES = "files"


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run.

    ``emission_source`` is either ``"files"`` (read each record's
    ``emission_path``, relative paths resolved against the manifest's
    directory) or a NoiseSpec for synthetic emissions built from the Roman
    reference. With synthetic emissions the NoiseSpec's own seed is ignored:
    each record gets a seed derived from ``seed`` and its id.
    """

    manifest_path: Path
    vocab_path: Path | None = None
    rule_table_dir: Path = TABLE_DIR
    strategy: PromptStrategy = PromptStrategy.ZERO_SHOT
    shots_n: int = DEFAULT_SHOTS
    beam_size: int = DEFAULT_BEAM_SIZE
    seed: int = 0
    converter: ConverterConfig = field(default_factory=ConverterConfig)
    emission_source: str | NoiseSpec = FILES
    strict_romanize: bool = False
    report_path: Path | None = None
    report_format: str = "tsv"
    audit_path: Path | None = None
    decode_workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "manifest_path", Path(self.manifest_path))
        object.__setattr__(self, "rule_table_dir", Path(self.rule_table_dir))
        object.__setattr__(self, "strategy", PromptStrategy(self.strategy))
        if self.shots_n < 1:
            raise ConfigError("shots_n must be >= 1")
        if self.beam_size < 1:
            raise ConfigError("beam_size must be >= 1")
        if self.decode_workers < 1:
            raise ConfigError("decode_workers must be >= 1")
        if self.report_format not in REPORT_FORMATS:
            raise ConfigError(f"report_format must be one of {REPORT_FORMATS}")
        if not isinstance(self.emission_source, NoiseSpec) and self.emission_source != FILES:
            raise ConfigError(f"emission_source must be {FILES!r} or a NoiseSpec")

    def vocabulary(self) -> Vocabulary:
        return Vocabulary.load(self.vocab_path) if self.vocab_path else Vocabulary.default()


@dataclass(frozen=True)
class AuditEntry:
    """Terminal state of one manifest record."""

    id: str
    lang: str
    status: str
    roman_ref: str | None = None
    roman_hyp: str | None = None
    hyp: str | None = None
    shot_ids: tuple[str, ...] = ()
    turns_used: int = 0
    attempts: int = 0
    error: str | None = None

    def to_json(self) -> str:
        data = {k: v for k, v in self.__dict__.items() if v not in (None, ())}
        if "shot_ids" in data:
            data["shot_ids"] = list(data["shot_ids"])
        return json.dumps(data, ensure_ascii=False, sort_keys=True)


@dataclass(frozen=True)
class RunResult:
    report: EvalReport | None
    audit: tuple[AuditEntry, ...]

    @property
    def n_failed(self) -> int:
        return sum(e.status not in ("ok", "rejected") for e in self.audit)


def roman_reference(record: UtteranceRecord, romanizer: Romanizer, strict: bool = False) -> str:
    """The record's Roman transcription: ``roman_ref`` if given, else romanized ``ref_text``."""
    if record.roman_ref is not None:
        return " ".join(record.roman_ref.split())
    return romanizer.romanize(record.ref_text, record.lang, strict)


def build_mock_table(
    records: Iterable[UtteranceRecord], romanizer: Romanizer, strict: bool = False
) -> dict[str, str]:
    """Roman-to-native lookup for the ``mock_table`` backend.

    Maps each whole Roman sentence to its reference, plus each word when the
    two sides have the same number of words. Earlier records win conflicts.
    """
    table: dict[str, str] = {}
    for record in records:
        try:
            roman = roman_reference(record, romanizer, strict)
        except UnitransError:
            continue
        table.setdefault(roman, record.ref_text)
        r_words, n_words = roman.split(), record.ref_text.split()
        if len(r_words) == len(n_words):
            for r, n in zip(r_words, n_words):
                table.setdefault(r, n)
    return table


@dataclass
class _Work:
    record: UtteranceRecord
    roman_ref: str | None = None
    roman_hyp: str | None = None
    prompt: RenderedPrompt | None = None
    error: str | None = None


def _decode_one(work: _Work, cfg: RunConfig, vocab, romanizer, base_dir: Path) -> _Work:
    record = work.record
    try:
        work.roman_ref = roman_reference(record, romanizer, cfg.strict_romanize)
        if isinstance(cfg.emission_source, NoiseSpec):
            spec = cfg.emission_source.with_seed(derive_seed(cfg.seed, f"synth:{record.id}"))
            em = synthesize_emissions(work.roman_ref, vocab, spec)
        else:
            if not record.emission_path:
                raise ConfigError("record has no emission_path")
            path = Path(record.emission_path)
            em = read_emissions(path if path.is_absolute() else base_dir / path, vocab)
        work.roman_hyp = beam_decode(em, vocab, cfg.beam_size).text
    except (UnitransError, OSError) as exc:
        work.error = f"{type(exc).__name__}: {exc}"
    return work


def _prompt_for(work: _Work, cfg: RunConfig, pools: Mapping[str, list[FewShotExample]]):
    record = work.record
    shots: Sequence[FewShotExample] = ()
    if cfg.strategy.uses_shots:
        shots = sample_shots(
            pools.get(record.lang, []),
            cfg.shots_n,
            derive_seed(cfg.seed, f"shots:{record.id}"),
            exclude_id=record.id,
        )
    return render_prompt(cfg.strategy, REGISTRY[record.lang].name, work.roman_hyp, shots)


def execute(cfg: RunConfig, transport: Transport | None = None) -> RunResult:
    """Run every stage and return the report with a per-record audit trail.

    Config and manifest problems raise; problems with a single record are
    recorded in its audit entry and the record scores as an empty hypothesis.
    """
    records = load_manifest(cfg.manifest_path)
    vocab = cfg.vocabulary()
    romanizer = Romanizer(cfg.rule_table_dir)
    accepted, rejected = prepare_records(records)

    base_dir = cfg.manifest_path.parent
    work = [_Work(r) for r in accepted]
    with ThreadPoolExecutor(max_workers=cfg.decode_workers) as pool:
        work = list(pool.map(lambda w: _decode_one(w, cfg, vocab, romanizer, base_dir), work))

    pools: dict[str, list[FewShotExample]] = {}
    for w in work:
        if w.roman_ref is not None:
            pools.setdefault(w.record.lang, []).append(
                FewShotExample(w.roman_ref, w.record.ref_text, w.record.id)
            )

    items = []
    for w in work:
        if w.error:
            continue
        try:
            w.prompt = _prompt_for(w, cfg, pools)
        except UnitransError as exc:
            w.error = f"{type(exc).__name__}: {exc}"
            continue
        items.append((w.record.id, w.prompt))
    outcomes: dict[str, ConversionOutcome] = convert_batch(items, cfg.converter, transport)

    audit, rows = [], []
    for w in work:
        r = w.record
        if w.error:
            entry = AuditEntry(r.id, r.lang, "error", w.roman_ref, w.roman_hyp, error=w.error)
            rows.append(ScoredRow(r.id, r.lang, r.ref_text, None, None))
        else:
            o = outcomes[r.id]
            entry = AuditEntry(
                r.id, r.lang, o.status.value, w.roman_ref, w.roman_hyp, o.extracted,
                w.prompt.shot_ids, o.turns_used, o.attempts, o.error,
            )
            rows.append(ScoredRow(r.id, r.lang, r.ref_text, o.extracted, o.status))
        audit.append(entry)
    for rej in rejected:
        audit.append(AuditEntry(rej.record.id, rej.record.lang, "rejected", error=rej.reason))

    report = aggregate_report(rows) if rows else None
    result = RunResult(report, tuple(audit))
    _write_outputs(cfg, result)
    return result


def run_pipeline(cfg: RunConfig, transport: Transport | None = None) -> EvalReport:
    """Run and return only the report. Raises ConfigError when nothing was accepted."""
    result = execute(cfg, transport)
    if result.report is None:
        raise ConfigError(f"{cfg.manifest_path}: no records passed filtering")
    return result.report


def _write_outputs(cfg: RunConfig, result: RunResult) -> None:
    if cfg.report_path and result.report is not None:
        _write_text(cfg.report_path, result.report.render(cfg.report_format))
    if cfg.audit_path:
        _write_text(cfg.audit_path, "".join(e.to_json() + "\n" for e in result.audit))


def _write_text(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
