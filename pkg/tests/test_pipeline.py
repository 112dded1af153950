from __future__ import annotations

import json

import pytest

from unitrans.converter import ConverterConfig
from unitrans.corpus import UtteranceRecord, dump_manifest, load_manifest, prepare_records
from unitrans.ctc import Vocabulary, write_emissions
from unitrans.errors import ConfigError, ManifestError
from unitrans.pipeline import (
    RunConfig,
    build_mock_table,
    execute,
    roman_reference,
    run_pipeline,
)
from unitrans.romanizer import default_romanizer
from unitrans.synth import NoiseSpec, synthesize_emissions


@pytest.fixture(scope="module")
def toy(fixtures_dir):
    return fixtures_dir / "toy_manifest.jsonl"


@pytest.fixture(scope="module")
def toy_table(toy):
    records, _ = prepare_records(load_manifest(toy))
    return build_mock_table(records, default_romanizer())


def table_cfg(manifest, table, **kw):
    kw.setdefault("emission_source", NoiseSpec())
    return RunConfig(manifest, converter=ConverterConfig(backend="mock_table", table=table), **kw)


def read_audit(path):
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]


class TestZeroNoise:
    @pytest.mark.parametrize("strategy", ["zero_shot", "few_shot", "few_shot_cot", "prompt_chaining"])
    def test_identity(self, toy, toy_table, strategy):
        report = run_pipeline(table_cfg(toy, toy_table, strategy=strategy))
        assert report.cer == 0.0 and report.wer == 0.0
        assert set(report.per_language) == {"de", "el", "ru"}

    def test_reports_are_reproducible(self, toy, toy_table, tmp_path):
        outputs = []
        for run in range(2):
            cfg = table_cfg(
                toy, toy_table, strategy="few_shot", seed=3,
                report_path=tmp_path / f"r{run}.json", report_format="json",
                audit_path=tmp_path / f"a{run}.jsonl",
            )
            execute(cfg)
            outputs.append(((tmp_path / f"r{run}.json").read_bytes(), (tmp_path / f"a{run}.jsonl").read_bytes()))
        assert outputs[0] == outputs[1]

    def test_threads_do_not_change_results(self, toy, toy_table):
        spec = NoiseSpec(substitution_rate=0.1)
        one = execute(table_cfg(toy, toy_table, emission_source=spec, decode_workers=1))
        four = execute(table_cfg(toy, toy_table, emission_source=spec, decode_workers=4))
        assert one.audit == four.audit

    def test_roman_references_with_identity_backend(self, tmp_path):
        records = [
            UtteranceRecord("a", "ru", "privet mir"),
            UtteranceRecord("b", "el", "kalimera"),
        ]
        manifest = tmp_path / "m.jsonl"
        dump_manifest(records, manifest)
        cfg = RunConfig(manifest, emission_source=NoiseSpec(), converter=ConverterConfig())
        assert run_pipeline(cfg).cer == 0.0


class TestAudit:
    def test_complete_and_isolated(self, toy, toy_table, tmp_path):
        audit_path = tmp_path / "audit.jsonl"
        execute(table_cfg(toy, toy_table, strategy="few_shot", shots_n=5, audit_path=audit_path))
        entries = read_audit(audit_path)
        ids = [r.id for r in load_manifest(toy)]
        assert sorted(e["id"] for e in entries) == sorted(ids)
        for e in entries:
            assert e["status"] == "ok"
            assert e["id"] not in e["shot_ids"]
            assert all(s.split("-")[0] == e["lang"] for s in e["shot_ids"])
            assert len(e["shot_ids"]) == 2

    def test_rejected_records_logged(self, tmp_path):
        manifest = tmp_path / "m.jsonl"
        dump_manifest(
            [UtteranceRecord("a", "de", "eins"), UtteranceRecord("b", "de", "zwei (2)")], manifest
        )
        result = execute(RunConfig(manifest, emission_source=NoiseSpec()))
        statuses = {e.id: (e.status, e.error) for e in result.audit}
        assert statuses["b"] == ("rejected", "parenthesis")
        assert result.report.n_records == 1


class TestFailures:
    def test_per_record_errors_do_not_abort(self, tmp_path):
        vocab = Vocabulary.default()
        (tmp_path / "em").mkdir()
        write_emissions(tmp_path / "em" / "a.lem", synthesize_emissions("hallo", vocab, NoiseSpec()))
        manifest = tmp_path / "m.jsonl"
        dump_manifest(
            [
                UtteranceRecord("a", "de", "hallo", emission_path="em/a.lem"),
                UtteranceRecord("b", "de", "welt", emission_path="em/missing.lem"),
                UtteranceRecord("c", "de", "welt"),
            ],
            manifest,
        )
        result = execute(RunConfig(manifest))
        by_id = {e.id: e for e in result.audit}
        assert by_id["a"].status == "ok" and by_id["a"].hyp == "hallo"
        assert by_id["b"].status == "error" and "missing.lem" in by_id["b"].error
        assert by_id["c"].status == "error" and "emission_path" in by_id["c"].error
        assert result.report.n_failed == 2
        assert result.report.cer == pytest.approx(2 / 3)

    def test_lonely_record_cannot_take_shots(self, tmp_path):
        manifest = tmp_path / "m.jsonl"
        dump_manifest([UtteranceRecord("a", "ru", "да")], manifest)
        result = execute(RunConfig(manifest, strategy="few_shot", emission_source=NoiseSpec()))
        assert result.audit[0].status == "error"
        assert "pool is empty" in result.audit[0].error

    def test_strict_romanization_failure_is_per_record(self, tmp_path):
        manifest = tmp_path / "m.jsonl"
        dump_manifest([UtteranceRecord("a", "ru", "да☃"), UtteranceRecord("b", "ru", "нет")], manifest)
        result = execute(RunConfig(manifest, emission_source=NoiseSpec(), strict_romanize=True))
        assert [e.status for e in result.audit] == ["error", "ok"]

    def test_unreachable_backend(self, toy):
        conv = ConverterConfig(backend="http", endpoint="http://127.0.0.1:9/", retries=1,
                               backoff_base=0.0, timeout=2)
        result = execute(RunConfig(toy, emission_source=NoiseSpec(), converter=conv))
        assert {e.status for e in result.audit} == {"backend_error"}
        assert result.report.n_failed == len(result.audit)
        assert result.report.cer == 1.0

    def test_bad_manifest_aborts(self, tmp_path):
        manifest = tmp_path / "m.jsonl"
        manifest.write_text('{"id": "a", "lang": "qq", "ref_text": "x"}\n', encoding="utf-8")
        with pytest.raises(ManifestError):
            execute(RunConfig(manifest, emission_source=NoiseSpec()))

    def test_nothing_accepted(self, tmp_path):
        manifest = tmp_path / "m.jsonl"
        dump_manifest([UtteranceRecord("a", "de", "1")], manifest)
        with pytest.raises(ConfigError):
            run_pipeline(RunConfig(manifest, emission_source=NoiseSpec()))


class TestConfig:
    @pytest.mark.parametrize(
        "kw",
        [{"beam_size": 0}, {"shots_n": 0}, {"report_format": "xml"}, {"emission_source": "mic"},
         {"strategy": "one_shot"}, {"decode_workers": 0}],
    )
    def test_invalid(self, kw):
        with pytest.raises((ConfigError, ValueError)):
            RunConfig("m.jsonl", **kw)

    def test_defaults(self):
        cfg = RunConfig("m.jsonl")
        assert (cfg.beam_size, cfg.shots_n, cfg.converter.temperature) == (100, 5, 0.0)


def test_mock_table_contents():
    records = [UtteranceRecord("1", "ru", "привет мир"), UtteranceRecord("2", "ru", "мир")]
    table = build_mock_table(records, default_romanizer())
    assert table == {"privet mir": "привет мир", "privet": "привет", "mir": "мир"}


def test_roman_reference_prefers_given():
    rec = UtteranceRecord("1", "ru", "привет", roman_ref="  pri  vet ")
    assert roman_reference(rec, default_romanizer()) == "pri vet"
