"""Command-line interface.

Exit status is 0 whenever a run completes, even if every record failed to
convert; 1 signals a configuration or I/O problem; 2 is argparse's usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from unitrans import __version__
from unitrans.converter import Backend, ConverterConfig, Status, convert
from unitrans.corpus import REGISTRY, load_manifest, normalize_text, prepare_records
from unitrans.ctc import DEFAULT_BEAM_SIZE, Vocabulary, beam_decode, greedy_decode, read_emissions
from unitrans.errors import UnitransError
from unitrans.metrics import REPORT_FORMATS, ScoredRow, aggregate_report
from unitrans.pipeline import FILES, RunConfig, build_mock_table, execute
from unitrans.prompts import DEFAULT_SHOTS, FewShotExample, PromptStrategy, render_prompt, sample_shots
from unitrans.romanizer import TABLE_DIR, Romanizer
from unitrans.synth import NoiseSpec

STRATEGIES = [s.value for s in PromptStrategy]
BACKENDS = [b.value for b in Backend]


def _read_pairs(path: str) -> list[tuple[str, str]]:
    """Two-column UTF-8 TSV, ``#`` comments and blank lines skipped."""
    pairs = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        left, sep, right = line.partition("\t")
        if not sep:
            raise UnitransError(f"{path}:{lineno}: expected two tab-separated columns")
        pairs.append((left, right))
    return pairs


def _inputs(args_text: list[str]) -> list[str]:
    if args_text:
        return args_text
    return [line.rstrip("\n") for line in sys.stdin if line.strip()]


def _converter_config(args, manifest_records=None, romanizer=None) -> ConverterConfig:
    cfg = ConverterConfig.from_file(args.converter_config) if args.converter_config else None
    changes = {}
    if args.backend:
        changes["backend"] = Backend(args.backend)
    if args.endpoint:
        changes["endpoint"] = args.endpoint
    if args.model:
        changes["model_name"] = args.model
    if args.max_inflight:
        changes["max_inflight"] = args.max_inflight
    if args.table:
        changes["table"] = dict(_read_pairs(args.table))
    backend = changes.get("backend", cfg.backend if cfg else Backend.MOCK_IDENTITY)
    if backend is Backend.MOCK_TABLE and "table" not in changes and not (cfg and cfg.table):
        if manifest_records is None:
            raise UnitransError("the mock_table backend needs --table")
        changes["table"] = build_mock_table(manifest_records, romanizer)
    if cfg is None:
        return ConverterConfig(**changes)
    return cfg.with_(**changes)


def _add_converter_args(p):
    g = p.add_argument_group("converter")
    g.add_argument("--backend", choices=BACKENDS, help="default: mock_identity")
    g.add_argument("--converter-config", metavar="JSON", help="converter settings file")
    g.add_argument("--endpoint", help="chat-completion URL for the http backend")
    g.add_argument("--model", help="model name sent to the http backend")
    g.add_argument("--max-inflight", type=int, help="concurrent requests (default 4)")
    g.add_argument("--table", metavar="TSV", help="roman<TAB>native pairs for mock_table")


def _add_strategy_args(p):
    p.add_argument("--strategy", choices=STRATEGIES, default="zero_shot")
    p.add_argument("--shots", type=int, default=DEFAULT_SHOTS, help="few-shot examples (default 5)")
    p.add_argument("--seed", type=int, default=0)


def cmd_decode(args) -> int:
    vocab = Vocabulary.load(args.vocab) if args.vocab else Vocabulary.default()
    for path in args.emissions:
        em = read_emissions(path, vocab)
        result = greedy_decode(em, vocab) if args.greedy else beam_decode(em, vocab, args.beam_size)
        prefix = f"{path}\t" if len(args.emissions) > 1 else ""
        print(f"{prefix}{result.text}")
    return 0


def cmd_romanize(args) -> int:
    romanizer = Romanizer(args.tables)
    for text in _inputs(args.text):
        print(romanizer.romanize(normalize_text(text), args.lang, args.strict_romanize))
    return 0


def _shots_for(args) -> list[FewShotExample]:
    if not PromptStrategy(args.strategy).uses_shots:
        return []
    if not args.shots_file:
        raise UnitransError(f"--strategy {args.strategy} needs --shots-file")
    pool = [
        FewShotExample(roman, target, f"shot-{i}")
        for i, (roman, target) in enumerate(_read_pairs(args.shots_file))
    ]
    return sample_shots(pool, args.shots, args.seed)


def cmd_prompt(args) -> int:
    prompt = render_prompt(args.strategy, REGISTRY[args.lang].name, args.roman, _shots_for(args))
    print("\n\n".join(prompt.turns))
    return 0


def cmd_convert(args) -> int:
    cfg = _converter_config(args)
    shots = _shots_for(args)
    name = REGISTRY[args.lang].name
    for i, roman in enumerate(_inputs(args.roman)):
        outcome = convert(render_prompt(args.strategy, name, roman, shots), cfg, str(i))
        if outcome.ok:
            print(outcome.extracted)
        else:
            print(f"[{outcome.status.value}] {outcome.error}", file=sys.stderr)
            print()
    return 0


def cmd_run(args) -> int:
    if args.emissions == "synth":
        source = NoiseSpec(
            substitution_rate=args.substitution_rate,
            deletion_rate=args.deletion_rate,
            blank_bleed=args.blank_bleed,
            frames_per_char=args.frames_per_char,
        )
    else:
        source = FILES
    records = None
    if args.backend == Backend.MOCK_TABLE.value and not args.table:
        records, _ = prepare_records(load_manifest(args.manifest))
    cfg = RunConfig(
        manifest_path=Path(args.manifest),
        vocab_path=Path(args.vocab) if args.vocab else None,
        rule_table_dir=Path(args.tables),
        strategy=PromptStrategy(args.strategy),
        shots_n=args.shots,
        beam_size=args.beam_size,
        seed=args.seed,
        converter=_converter_config(args, records, Romanizer(args.tables)),
        emission_source=source,
        strict_romanize=args.strict_romanize,
        report_path=Path(args.report) if args.report else None,
        report_format=args.report_format,
        audit_path=Path(args.audit) if args.audit else None,
        decode_workers=args.workers,
    )
    result = execute(cfg)
    if result.report is None:
        print("no records passed filtering", file=sys.stderr)
    elif not args.report:
        sys.stdout.write(result.report.render(args.report_format))
    print(
        f"{len(result.audit)} records, {result.n_failed} failed",
        file=sys.stderr,
    )
    return 0


def cmd_eval(args) -> int:
    records, _ = prepare_records(load_manifest(args.manifest))
    hyps = {}
    for rid, hyp in _read_pairs(args.hypotheses):
        hyps[rid] = normalize_text(hyp)
    # a missing hypothesis never reached a converter: it scores as empty text
    rows = [
        ScoredRow(r.id, r.lang, r.ref_text, hyps.get(r.id), Status.OK if r.id in hyps else None)
        for r in records
    ]
    if not rows:
        raise UnitransError(f"{args.manifest}: no records passed filtering")
    sys.stdout.write(aggregate_report(rows).render(args.report_format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="unitrans",
        description="Roman-intermediate multilingual ASR decoding, conversion and scoring.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decode", help="emission files to Roman text")
    p.add_argument("emissions", nargs="+", help="LEM1 emission files")
    p.add_argument("--vocab", help="vocabulary file (default: built-in 29 tokens)")
    p.add_argument("--beam-size", type=int, default=DEFAULT_BEAM_SIZE)
    p.add_argument("--greedy", action="store_true", help="best-path decoding instead of beam search")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("romanize", help="native text to Roman text")
    p.add_argument("text", nargs="*", help="text to romanize (default: lines of stdin)")
    p.add_argument("--lang", required=True)
    p.add_argument("--tables", default=str(TABLE_DIR), help="rule table directory")
    p.add_argument("--strict-romanize", action="store_true", help="fail on characters with no rule")
    p.set_defaults(func=cmd_romanize)

    p = sub.add_parser("prompt", help="render a converter prompt")
    p.add_argument("roman")
    p.add_argument("--lang", required=True)
    _add_strategy_args(p)
    p.add_argument("--shots-file", metavar="TSV", help="roman<TAB>target example pool")
    p.set_defaults(func=cmd_prompt)

    p = sub.add_parser("convert", help="Roman text to native text through the converter")
    p.add_argument("roman", nargs="*", help="Roman sentences (default: lines of stdin)")
    p.add_argument("--lang", required=True)
    _add_strategy_args(p)
    p.add_argument("--shots-file", metavar="TSV", help="roman<TAB>target example pool")
    _add_converter_args(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("run", help="full pipeline over a manifest")
    p.add_argument("manifest")
    p.add_argument("--vocab")
    p.add_argument("--tables", default=str(TABLE_DIR), help="rule table directory")
    _add_strategy_args(p)
    p.add_argument("--beam-size", type=int, default=DEFAULT_BEAM_SIZE)
    p.add_argument("--strict-romanize", action="store_true")
    p.add_argument("--emissions", choices=["files", "synth"], default="files")
    p.add_argument("--substitution-rate", type=float, default=0.0)
    p.add_argument("--deletion-rate", type=float, default=0.0)
    p.add_argument("--blank-bleed", type=float, default=0.0)
    p.add_argument("--frames-per-char", type=int, default=2)
    p.add_argument("--workers", type=int, default=1, help="decode threads")
    p.add_argument("--report", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--report-format", choices=REPORT_FORMATS, default="tsv")
    p.add_argument("--audit", metavar="PATH", help="per-record JSON-lines audit log")
    _add_converter_args(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("eval", help="score a hypothesis file against a manifest")
    p.add_argument("manifest")
    p.add_argument("hypotheses", help="id<TAB>hypothesis lines")
    p.add_argument("--report-format", choices=REPORT_FORMATS, default="tsv")
    p.set_defaults(func=cmd_eval)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    try:
        return args.func(args)
    except (UnitransError, OSError) as exc:
        print(f"unitrans: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
