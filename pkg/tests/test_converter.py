from __future__ import annotations

import json
import random
import threading
import time

import httpx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from unitrans.converter import (
    ConversionOutcome,
    ConverterConfig,
    HttpTransport,
    RequestContext,
    Status,
    TableTransport,
    convert,
    convert_batch,
    extract_fenced,
    get_path,
    wrap_in_fence,
)
from unitrans.errors import ConfigError, TransportError
from unitrans.prompts import render_prompt

NO_SLEEP = lambda s: None  # noqa: E731


def zero(roman="privet"):
    return render_prompt("zero_shot", "Russian", roman)


def chain(roman="privet"):
    return render_prompt("prompt_chaining", "Russian", roman)


class Scripted:
    """Replies from a fixed script; exceptions in the script are raised."""

    def __init__(self, *replies):
        self.replies = list(replies)
        self.calls = []

    def complete(self, messages, ctx):
        self.calls.append((list(messages), ctx))
        reply = self.replies.pop(0)
        if isinstance(reply, Exception):
            raise reply
        return reply


class TestExtract:
    @pytest.mark.parametrize(
        "response, expected",
        [
            ("```привет```", "привет"),
            ("the answer is privet", None),
            ("x ```a``` y ```b```", "a"),
            ("```\n  привет мир \n```", "привет мир"),
            ("``` unterminated", None),
            ("``````", ""),
            ("``", None),
        ],
    )
    def test_examples(self, response, expected):
        assert extract_fenced(response) == expected

    @given(st.text().filter(lambda s: "`" not in s), st.text(), st.text())
    def test_wrap_round_trip(self, s, before, after):
        s = s.strip()
        assert extract_fenced(wrap_in_fence(s)) == s
        before = before.replace("`", "")
        assert extract_fenced(before + wrap_in_fence(s) + after) == s


class TestConfig:
    def test_temperature_fixed(self):
        assert ConverterConfig().temperature == 0.0
        with pytest.raises(TypeError):
            ConverterConfig(temperature=0.7)

    def test_from_file(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(json.dumps({"backend": "http", "endpoint": "http://x", "temperature": 0.0}))
        cfg = ConverterConfig.from_file(p)
        assert cfg.endpoint == "http://x"
        assert cfg.max_output_tokens == 512

    @pytest.mark.parametrize(
        "data",
        [
            {"temperature": 0.3},
            {"max_inflight": 0},
            {"retries": -1},
            {"backend": "http"},
            {"backend": "carrier_pigeon"},
            {"colour": "blue"},
        ],
    )
    def test_rejects(self, data):
        with pytest.raises(ConfigError):
            ConverterConfig.from_dict(data)

    def test_outcome_invariant(self):
        with pytest.raises(ValueError):
            ConversionOutcome("r", Status.OK, "", None)
        with pytest.raises(ValueError):
            ConversionOutcome("r", Status.FORMAT_ERROR, "", "x")


class TestMocks:
    def test_identity(self):
        out = convert(zero(), ConverterConfig(backend="mock_identity"), "r1")
        assert (out.status, out.extracted, out.turns_used) == (Status.OK, "privet", 1)

    def test_table(self):
        cfg = ConverterConfig(backend="mock_table", table={"privet": "привет"})
        assert convert(zero(), cfg).extracted == "привет"

    def test_table_word_fallback(self):
        t = TableTransport({"privet": "привет", "mir": "мир"})
        assert t.convert("privet mir") == "привет мир"
        assert t.convert("privet zzz") == "привет zzz"

    def test_chaining_with_identity(self):
        out = convert(chain(), ConverterConfig(backend="mock_identity"))
        assert out.ok and out.extracted == "privet" and out.turns_used == 2


class TestConvert:
    cfg = ConverterConfig(retries=3, backoff_base=0.25)

    def test_format_error_not_retried(self):
        t = Scripted("no fence here")
        out = convert(zero(), self.cfg, "r", t, NO_SLEEP)
        assert out.status is Status.FORMAT_ERROR
        assert out.raw_response == "no fence here"
        assert out.extracted is None
        assert len(t.calls) == 1

    def test_transport_errors_retried_with_backoff(self):
        delays = []
        t = Scripted(TransportError("reset"), TransportError("reset"), "```ok```")
        out = convert(zero(), self.cfg, "r", t, delays.append)
        assert out.ok and out.attempts == 3
        assert delays == [0.25, 0.5]

    def test_backend_error_after_retries(self):
        t = Scripted(*[TransportError("down")] * 4)
        out = convert(zero(), self.cfg, "r", t, NO_SLEEP)
        assert out.status is Status.BACKEND_ERROR
        assert out.attempts == 4
        assert "4 attempts" in out.error

    def test_unexpected_exception_becomes_backend_error(self):
        out = convert(zero(), self.cfg, "r", Scripted(KeyError("choices")), NO_SLEEP)
        assert out.status is Status.BACKEND_ERROR
        assert out.attempts == 1

    def test_chaining_feeds_pred_and_history(self):
        t = Scripted("```привет```", "sure: ```Привет```")
        out = convert(chain(), self.cfg, "r", t, NO_SLEEP)
        assert out.ok and out.extracted == "Привет" and out.turns_used == 2
        messages, ctx = t.calls[1]
        assert ctx == RequestContext("r", 2, "privet", "привет")
        assert [m["role"] for m in messages] == ["system", "user", "assistant", "user"]
        assert messages[-1]["content"].endswith("sentence: привет.")

    def test_chaining_short_circuits(self):
        t = Scripted("I cannot")
        out = convert(chain(), self.cfg, "r", t, NO_SLEEP)
        assert out.status is Status.FORMAT_ERROR
        assert out.turns_used == 1
        assert len(t.calls) == 1

    def test_system_message_optional(self):
        t = Scripted("```x```")
        convert(zero(), self.cfg.with_(system_message=None), "r", t, NO_SLEEP)
        assert [m["role"] for m in t.calls[0][0]] == ["user"]


class SlowEcho:
    def __init__(self, seed=0):
        self.rng = random.Random(seed)
        self.lock = threading.Lock()
        self.active = 0
        self.peak = 0

    def complete(self, messages, ctx):
        with self.lock:
            self.active += 1
            self.peak = max(self.peak, self.active)
            delay = self.rng.uniform(0, 0.01)
        time.sleep(delay)
        with self.lock:
            self.active -= 1
        return wrap_in_fence(ctx.roman.upper())


class TestBatch:
    def test_keyed_and_ordered(self):
        items = [(f"r{i}", zero(f"w{i}")) for i in range(40)]
        t = SlowEcho()
        out = convert_batch(items, ConverterConfig(max_inflight=6), t)
        assert list(out) == [rid for rid, _ in items]
        assert all(out[f"r{i}"].extracted == f"W{i}" for i in range(40))
        assert all(out[rid].record_id == rid for rid in out)
        assert 1 <= t.peak <= 6

    def test_inflight_bound_of_one(self):
        t = SlowEcho(1)
        convert_batch([(str(i), zero()) for i in range(10)], ConverterConfig(max_inflight=1), t)
        assert t.peak == 1

    def test_duplicate_ids(self):
        with pytest.raises(ValueError):
            convert_batch([("a", zero()), ("a", zero())], ConverterConfig())


def http_cfg(**kw):
    return ConverterConfig(backend="http", endpoint="http://llm.test/v1/chat", model_name="m", **kw)


class TestHttp:
    def transport(self, handler, cfg):
        client = httpx.Client(transport=httpx.MockTransport(handler))
        return HttpTransport(cfg, client)

    def test_payload_and_parsing(self):
        seen = {}

        def handler(request):
            seen["body"] = json.loads(request.content)
            return httpx.Response(200, json={"choices": [{"message": {"content": "```привет```"}}]})

        cfg = http_cfg()
        out = convert(zero(), cfg, "r", self.transport(handler, cfg), NO_SLEEP)
        assert out.extracted == "привет"
        body = seen["body"]
        assert body["model"] == "m"
        assert body["temperature"] == 0.0
        assert body["max_tokens"] == 512
        assert body["messages"][-1]["content"] == zero().turns[0]

    def test_custom_response_path(self):
        cfg = http_cfg(response_path="output.text")
        t = self.transport(lambda r: httpx.Response(200, json={"output": {"text": "```a```"}}), cfg)
        assert convert(zero(), cfg, "r", t, NO_SLEEP).extracted == "a"

    def test_server_errors_retried(self):
        codes = iter([503, 429, 200])

        def handler(request):
            code = next(codes)
            body = {"choices": [{"message": {"content": "```ok```"}}]} if code == 200 else {}
            return httpx.Response(code, json=body)

        cfg = http_cfg(retries=3)
        out = convert(zero(), cfg, "r", self.transport(handler, cfg), NO_SLEEP)
        assert out.ok and out.attempts == 3

    def test_client_error_not_retried(self):
        calls = []

        def handler(request):
            calls.append(1)
            return httpx.Response(401, text="bad key")

        cfg = http_cfg(retries=3)
        out = convert(zero(), cfg, "r", self.transport(handler, cfg), NO_SLEEP)
        assert out.status is Status.BACKEND_ERROR and len(calls) == 1

    def test_api_key_header(self, monkeypatch):
        monkeypatch.setenv("CONVERTER_API_KEY", "sekrit")
        t = HttpTransport(http_cfg())
        assert t.client.headers["Authorization"] == "Bearer sekrit"

    def test_unreachable(self):
        cfg = ConverterConfig(backend="http", endpoint="http://127.0.0.1:9/", retries=2, timeout=2)
        out = convert(zero(), cfg, "r", sleep=NO_SLEEP)
        assert out.status is Status.BACKEND_ERROR
        assert out.attempts == 3


def test_get_path():
    assert get_path({"a": [{"b": "x"}]}, "a.0.b") == "x"
    with pytest.raises(TypeError):
        get_path({"a": 1}, "a")
