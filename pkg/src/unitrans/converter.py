"""Client for the Roman-to-native converter model.

A request is a chat-completion style exchange. The model is asked to wrap its
answer in a triple-backtick block; the first complete block is the answer and
a response without one counts as a format error. See docs/wire_format.md for
the HTTP request and response shapes.
"""

from __future__ import annotations

import enum
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping, NamedTuple, Protocol, Sequence

from unitrans.errors import ConfigError, TransportError
from unitrans.prompts import RenderedPrompt

logger = logging.getLogger(__name__)

FENCE = "```"
API_KEY_ENV = "CONVERTER_API_KEY"
DEFAULT_MAX_OUTPUT_TOKENS = 512
DEFAULT_RESPONSE_PATH = "choices.0.message.content"
DEFAULT_SYSTEM_MESSAGE = "Reply with the requested sentence wrapped in a ``` fenced block."


class Backend(str, enum.Enum):
    HTTP = "http"
    MOCK_IDENTITY = "mock_identity"
    MOCK_TABLE = "mock_table"


class Status(str, enum.Enum):
    OK = "ok"
    FORMAT_ERROR = "format_error"
    BACKEND_ERROR = "backend_error"


@dataclass(frozen=True)
class ConverterConfig:
    """Converter settings. Sampling temperature is fixed at 0.0."""

    backend: Backend = Backend.MOCK_IDENTITY
    endpoint: str | None = None
    model_name: str = ""
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS
    max_inflight: int = 4
    retries: int = 3
    backoff_base: float = 0.5
    timeout: float = 60.0
    response_path: str = DEFAULT_RESPONSE_PATH
    system_message: str | None = DEFAULT_SYSTEM_MESSAGE
    table: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "backend", Backend(self.backend))
        if self.max_inflight < 1:
            raise ConfigError("max_inflight must be >= 1")
        if self.retries < 0:
            raise ConfigError("retries must be >= 0")
        if self.backoff_base < 0:
            raise ConfigError("backoff_base must be >= 0")
        if self.max_output_tokens < 1:
            raise ConfigError("max_output_tokens must be >= 1")
        if self.backend is Backend.HTTP and not self.endpoint:
            raise ConfigError("the http backend needs an endpoint")

    @property
    def temperature(self) -> float:
        return 0.0

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ConverterConfig:
        data = dict(data)
        if "temperature" in data:
            if float(data.pop("temperature")) != 0.0:
                raise ConfigError("temperature is fixed at 0.0")
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown converter settings: {', '.join(unknown)}")
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_file(cls, path: str | Path) -> ConverterConfig:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"{path}: {exc}") from None
        return cls.from_dict(data)

    def with_(self, **changes) -> ConverterConfig:
        return replace(self, **changes)


@dataclass(frozen=True)
class ConversionOutcome:
    record_id: str
    status: Status
    raw_response: str = ""
    extracted: str | None = None
    turns_used: int = 0
    attempts: int = 0
    error: str | None = None

    def __post_init__(self):
        if (self.extracted is not None) != (self.status is Status.OK):
            raise ValueError("extracted must be set exactly when status is ok")

    @property
    def ok(self) -> bool:
        return self.status is Status.OK


def extract_fenced(response: str) -> str | None:
    """Trimmed content of the first complete ``` block, or None if there is none."""
    start = response.find(FENCE)
    if start < 0:
        return None
    end = response.find(FENCE, start + len(FENCE))
    if end < 0:
        return None
    return response[start + len(FENCE) : end].strip()


def wrap_in_fence(text: str) -> str:
    return f"{FENCE}{text}{FENCE}"


class RequestContext(NamedTuple):
    """What a transport may know about the request beyond the messages."""

    record_id: str
    turn: int
    roman: str
    pred: str | None = None


class Transport(Protocol):
    def complete(self, messages: list[dict[str, str]], ctx: RequestContext) -> str:
        """Return the model's text, or raise TransportError to request a retry."""


class IdentityTransport:
    """Echoes the Roman input (or the chained prediction) inside a fence."""

    def complete(self, messages, ctx):
        return wrap_in_fence(ctx.pred if ctx.turn == 2 else ctx.roman)


class TableTransport:
    """Looks the Roman input up in a fixed mapping.

    The whole string is tried first, then each word; unknown words pass
    through unchanged. The correction turn of prompt chaining echoes its input.
    """

    def __init__(self, table: Mapping[str, str]):
        self.table = dict(table)

    def convert(self, roman: str) -> str:
        if roman in self.table:
            return self.table[roman]
        return " ".join(self.table.get(w, w) for w in roman.split())

    def complete(self, messages, ctx):
        if ctx.turn == 2:
            return wrap_in_fence(ctx.pred)
        return wrap_in_fence(self.convert(ctx.roman))


class HttpTransport:
    """Minimal chat-completion POST over httpx."""

    def __init__(self, cfg: ConverterConfig, client=None):
        import httpx

        self._httpx = httpx
        self.cfg = cfg
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(API_KEY_ENV)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        self.client = client or httpx.Client(timeout=cfg.timeout, headers=headers)

    def payload(self, messages):
        return {
            "model": self.cfg.model_name,
            "messages": messages,
            "temperature": self.cfg.temperature,
            "max_tokens": self.cfg.max_output_tokens,
        }

    def complete(self, messages, ctx):
        httpx = self._httpx
        try:
            resp = self.client.post(self.cfg.endpoint, json=self.payload(messages))
        except httpx.TransportError as exc:
            raise TransportError(f"{type(exc).__name__}: {exc}") from exc
        if resp.status_code == 429 or resp.status_code >= 500:
            raise TransportError(f"HTTP {resp.status_code}")
        if resp.status_code >= 400:
            raise RuntimeError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        return get_path(resp.json(), self.cfg.response_path)


def get_path(obj: Any, path: str) -> str:
    """Follow a dotted path (integers index lists) into a decoded JSON body."""
    for part in path.split("."):
        if isinstance(obj, list):
            obj = obj[int(part)]
        else:
            obj = obj[part]
    if not isinstance(obj, str):
        raise TypeError(f"response field {path!r} is not a string")
    return obj


def make_transport(cfg: ConverterConfig) -> Transport:
    if cfg.backend is Backend.MOCK_IDENTITY:
        return IdentityTransport()
    if cfg.backend is Backend.MOCK_TABLE:
        return TableTransport(cfg.table)
    return HttpTransport(cfg)


class _BackendFailure(Exception):
    def __init__(self, message, attempts):
        super().__init__(message)
        self.attempts = attempts


def _request(transport, messages, ctx, cfg, sleep) -> tuple[str, int]:
    attempts = 0
    while True:
        attempts += 1
        try:
            return transport.complete(messages, ctx), attempts
        except TransportError as exc:
            if attempts > cfg.retries:
                raise _BackendFailure(
                    f"{exc} (gave up after {attempts} attempts)", attempts
                ) from exc
            delay = cfg.backoff_base * 2 ** (attempts - 1)
            logger.debug("record %s turn %d: %s; retrying in %.2fs", ctx.record_id, ctx.turn, exc, delay)
            sleep(delay)
        except Exception as exc:
            raise _BackendFailure(f"{type(exc).__name__}: {exc}", attempts) from exc


def convert(
    prompt: RenderedPrompt,
    cfg: ConverterConfig,
    record_id: str = "",
    transport: Transport | None = None,
    sleep=time.sleep,
) -> ConversionOutcome:
    """Run one prompt through the converter. Never raises for backend problems.

    Transport errors are retried with exponential backoff; a response without
    a fenced block is a format error and is not retried. For prompt chaining
    a format error on the first turn ends the exchange.
    """
    transport = transport or make_transport(cfg)
    messages: list[dict[str, str]] = []
    if cfg.system_message:
        messages.append({"role": "system", "content": cfg.system_message})

    total_attempts = 0
    raw = ""
    pred = None
    for turn in range(1, len(prompt.turns) + 1):
        content = prompt.turns[0] if turn == 1 else prompt.fill_pred(pred)
        messages.append({"role": "user", "content": content})
        ctx = RequestContext(record_id, turn, prompt.roman, pred)
        try:
            raw, attempts = _request(transport, messages, ctx, cfg, sleep)
        except _BackendFailure as exc:
            return ConversionOutcome(
                record_id, Status.BACKEND_ERROR, raw, None, turn,
                total_attempts + exc.attempts, str(exc),
            )
        total_attempts += attempts
        pred = extract_fenced(raw)
        if pred is None:
            return ConversionOutcome(
                record_id, Status.FORMAT_ERROR, raw, None, turn, total_attempts,
                "no complete fenced block in response",
            )
        messages.append({"role": "assistant", "content": raw})
    return ConversionOutcome(record_id, Status.OK, raw, pred, len(prompt.turns), total_attempts)


def convert_batch(
    items: Sequence[tuple[str, RenderedPrompt]],
    cfg: ConverterConfig,
    transport: Transport | None = None,
    sleep=time.sleep,
) -> dict[str, ConversionOutcome]:
    """Convert ``(record_id, prompt)`` pairs with at most ``max_inflight`` in flight.

    The result is keyed by record id in input order, whatever order the
    requests complete in.
    """
    ids = [rid for rid, _ in items]
    if len(set(ids)) != len(ids):
        raise ValueError("record ids in a batch must be unique")
    transport = transport or make_transport(cfg)
    with ThreadPoolExecutor(max_workers=cfg.max_inflight) as pool:
        futures = [
            pool.submit(convert, prompt, cfg, rid, transport, sleep) for rid, prompt in items
        ]
        return {rid: fut.result() for rid, fut in zip(ids, futures)}
