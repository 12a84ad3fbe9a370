"""Uniform client for Chat-Completions-compatible LLM backends.

Two backends share one interface: an HTTP backend speaking the minimal
``POST {base_url}/chat/completions`` wire format, and a file-backed mock
backend for tests and offline desk runs. ``chat_structured`` layers strict
JSON-schema validation on top, with exactly one repair round-trip before
giving up, so no invocation ever costs more than two backend calls.

Mock fixtures are resolved inside ``PRIVY_LLM_MOCK_DIR`` by key:

* ``<key>.txt``   - single response, returned verbatim
* ``<key>.json``  - ``{"responses": [...]}``; the entry is picked by the
  number of repair/regeneration turns already in the request, so a repair
  round reads the second entry. Selection is a pure function of
  (key, request).
* ``<pipeline>/index.json`` - optional ``{"<hash>": "<name>"}`` aliases
* ``<pipeline>/default.txt|.json`` - fallback for unseen content hashes
"""

from __future__ import annotations

import json
import logging
import os
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

import httpx
import jsonschema

from .errors import BackendError, ConfigError, LlmOutputInvalid, ValidationError

log = logging.getLogger("privy.gateway")

ROLES = ("system", "user", "assistant")

# Recognizable openings for the bounded retry turns. The mock backend keys its
# scripted fixtures on how many of these appear in a request, which keeps
# response selection a pure function of (fixture key, request).
REPAIR_PREFIX = "your previous output failed validation"
REGEN_PREFIX = "your previous suggestions were invalid"

REPAIR_INSTRUCTION = REPAIR_PREFIX + ": {errors}; re-emit valid JSON only"


@dataclass
class ChatMessage:
    role: str
    content: str


@dataclass
class ChatRequest:
    model: str
    messages: list[ChatMessage]
    temperature: float = 0.7
    max_tokens: int | None = None

    def validate(self) -> None:
        if not self.messages:
            raise ValidationError("chat request needs at least one message",
                                  code="invalid_request")
        if self.messages[0].role != "system":
            raise ValidationError("first chat message must have role 'system'",
                                  code="invalid_request")
        for m in self.messages:
            if m.role not in ROLES:
                raise ValidationError(f"invalid message role: {m.role!r}",
                                      code="invalid_request")
        if self.temperature < 0:
            raise ValidationError(
                f"temperature must be >= 0, got {self.temperature}",
                code="invalid_request")
        if self.max_tokens is not None and self.max_tokens <= 0:
            raise ValidationError("max_tokens must be positive", code="invalid_request")

    def retry_round(self) -> int:
        """How many repair/regeneration turns this request already carries."""
        return sum(
            1 for m in self.messages
            if m.role == "user" and m.content.startswith((REPAIR_PREFIX, REGEN_PREFIX))
        )


@dataclass
class Usage:
    prompt_tokens: int
    completion_tokens: int


@dataclass
class ChatResponse:
    content: str
    usage: Usage | None = None


@dataclass
class StructuredResult:
    value: dict | list
    raw: str
    repair_attempts: int = 0


@dataclass
class GatewayConfig:
    base_url: str = ""
    api_key: str = ""
    model: str = "gpt-4.1"
    mock_dir: str = ""
    timeout_s: float = 60.0
    max_retries: int = 2          # transport retries on 429/5xx only
    backoff_base_s: float = 0.5

    @classmethod
    def from_env(cls, env: dict[str, str] | None = None) -> "GatewayConfig":
        env = os.environ if env is None else env
        return cls(
            base_url=env.get("PRIVY_LLM_BASE_URL", ""),
            api_key=env.get("PRIVY_LLM_API_KEY", ""),
            model=env.get("PRIVY_LLM_MODEL", "gpt-4.1"),
            mock_dir=env.get("PRIVY_LLM_MOCK_DIR", ""),
        )

    @property
    def mock_mode(self) -> bool:
        return bool(self.mock_dir)


# ---------------------------------------------------------------------------
# Backends
# ---------------------------------------------------------------------------

class HttpBackend:
    """Minimal Chat Completions client with bounded retry on 429/5xx."""

    def __init__(self, config: GatewayConfig, client: httpx.Client | None = None):
        if not config.base_url:
            raise ConfigError("LLM base URL is not configured (PRIVY_LLM_BASE_URL)")
        if not config.api_key:
            raise ConfigError("LLM API key is not configured (PRIVY_LLM_API_KEY)")
        self.config = config
        self.calls = 0
        self._client = client or httpx.Client(timeout=config.timeout_s)

    def complete(self, request: ChatRequest, fixture_key: str | None = None) -> ChatResponse:
        body = {
            "model": request.model,
            "messages": [{"role": m.role, "content": m.content} for m in request.messages],
            "temperature": request.temperature,
        }
        if request.max_tokens is not None:
            body["max_tokens"] = request.max_tokens
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        headers = {"Authorization": f"Bearer {self.config.api_key}"}

        attempt = 0
        while True:
            self.calls += 1
            try:
                response = self._client.post(url, json=body, headers=headers)
            except httpx.HTTPError as exc:
                if attempt < self.config.max_retries:
                    attempt += 1
                    time.sleep(self.config.backoff_base_s * (2 ** (attempt - 1)))
                    continue
                raise BackendError(f"LLM transport failure: {self._scrub(str(exc))}")
            if response.status_code in (401, 403):
                raise BackendError(
                    f"LLM authentication failed (HTTP {response.status_code})",
                    code="auth_error",
                )
            if response.status_code == 429 or response.status_code >= 500:
                if attempt < self.config.max_retries:
                    attempt += 1
                    time.sleep(self.config.backoff_base_s * (2 ** (attempt - 1)))
                    continue
                raise BackendError(
                    f"LLM backend error after retries (HTTP {response.status_code}): "
                    f"{self._provider_message(response)}"
                )
            if response.status_code >= 400:
                raise BackendError(
                    f"LLM backend rejected the request (HTTP {response.status_code}): "
                    f"{self._provider_message(response)}"
                )
            return self._parse(response)

    def _parse(self, response: httpx.Response) -> ChatResponse:
        try:
            payload = response.json()
            content = payload["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError):
            raise BackendError("LLM backend returned an unrecognized payload shape")
        usage = None
        raw_usage = payload.get("usage")
        if isinstance(raw_usage, dict):
            usage = Usage(
                prompt_tokens=int(raw_usage.get("prompt_tokens", 0)),
                completion_tokens=int(raw_usage.get("completion_tokens", 0)),
            )
        return ChatResponse(content=content, usage=usage)

    def _provider_message(self, response: httpx.Response) -> str:
        try:
            payload = response.json()
            message = payload.get("error", {}).get("message") or payload.get("message")
            if message:
                return self._scrub(str(message))
        except ValueError:
            pass
        return self._scrub(response.text[:200])

    def _scrub(self, text: str) -> str:
        if self.config.api_key:
            text = text.replace(self.config.api_key, "[redacted]")
        return text


class MockBackend:
    """Deterministic fixture-backed backend; performs no network I/O."""

    def __init__(self, mock_dir: str | Path):
        self.root = Path(mock_dir)
        if not self.root.is_dir():
            raise ConfigError(f"mock fixture directory does not exist: {self.root}")
        self.calls = 0

    def complete(self, request: ChatRequest, fixture_key: str | None = None) -> ChatResponse:
        self.calls += 1
        key = fixture_key or "adhoc/unkeyed"
        content = self._resolve(key, request.retry_round())
        if content is None:
            raise BackendError(
                f"no mock fixture for key {key!r} under {self.root}",
                code="missing_fixture",
            )
        return ChatResponse(content=content)

    def _resolve(self, key: str, turn: int) -> str | None:
        content = self._read(self.root / key, turn)
        if content is not None:
            return content
        # alias indirection: <pipeline>/index.json maps hash part to a name
        if "/" in key:
            pipeline, name = key.split("/", 1)
            index_path = self.root / pipeline / "index.json"
            if index_path.is_file():
                index = json.loads(index_path.read_text("utf-8"))
                alias = index.get(name)
                if alias:
                    content = self._read(self.root / pipeline / alias, turn)
                    if content is not None:
                        return content
            content = self._read(self.root / pipeline / "default", turn)
            if content is not None:
                return content
        return None

    @staticmethod
    def _read(base: Path, turn: int) -> str | None:
        txt = base.with_suffix(".txt")
        if txt.is_file():
            return txt.read_text("utf-8")
        scripted = base.with_suffix(".json")
        if scripted.is_file():
            responses = json.loads(scripted.read_text("utf-8"))["responses"]
            return responses[min(turn, len(responses) - 1)]
        return None


# ---------------------------------------------------------------------------
# Gateway
# ---------------------------------------------------------------------------

_FENCED_JSON = re.compile(r"```(?:json)?\s*(.+?)```", re.DOTALL)


def extract_json(text: str):
    """Pull the first fenced or bare JSON value out of free-form LLM output."""
    fenced = _FENCED_JSON.search(text)
    if fenced:
        candidate = fenced.group(1).strip()
        try:
            return json.loads(candidate)
        except json.JSONDecodeError:
            pass
    for opener, closer in (("{", "}"), ("[", "]")):
        start = text.find(opener)
        while start != -1:
            depth = 0
            in_string = False
            escaped = False
            for i in range(start, len(text)):
                ch = text[i]
                if in_string:
                    if escaped:
                        escaped = False
                    elif ch == "\\":
                        escaped = True
                    elif ch == '"':
                        in_string = False
                    continue
                if ch == '"':
                    in_string = True
                elif ch == opener:
                    depth += 1
                elif ch == closer:
                    depth -= 1
                    if depth == 0:
                        try:
                            return json.loads(text[start:i + 1])
                        except json.JSONDecodeError:
                            break
            start = text.find(opener, start + 1)
    raise ValueError("no JSON value found in output")


class LlmGateway:
    """Front door for all LLM calls; picks the backend from configuration."""

    def __init__(self, config: GatewayConfig | None = None, backend=None):
        self.config = config or GatewayConfig.from_env()
        if backend is not None:
            self.backend = backend
        elif self.config.mock_mode:
            self.backend = MockBackend(self.config.mock_dir)
        else:
            self.backend = HttpBackend(self.config)

    @property
    def calls(self) -> int:
        return self.backend.calls

    def chat(self, request: ChatRequest, *, fixture_key: str | None = None) -> ChatResponse:
        request.validate()
        log.debug("chat call: model=%s messages=%d temperature=%s",
                  request.model, len(request.messages), request.temperature)
        return self.backend.complete(request, fixture_key=fixture_key)

    def chat_structured(self, request: ChatRequest, schema: dict, *,
                        fixture_key: str | None = None) -> StructuredResult:
        """Chat, then parse and schema-validate; one repair turn on failure."""
        request.validate()
        first = self.chat(request, fixture_key=fixture_key)
        value, errors = self._try_parse(first.content, schema)
        if errors is None:
            return StructuredResult(value=value, raw=first.content, repair_attempts=0)

        repair = ChatRequest(
            model=request.model,
            messages=list(request.messages) + [
                ChatMessage(role="assistant", content=first.content),
                ChatMessage(role="user",
                            content=REPAIR_INSTRUCTION.format(errors=errors)),
            ],
            temperature=request.temperature,
            max_tokens=request.max_tokens,
        )
        second = self.chat(repair, fixture_key=fixture_key)
        value, errors = self._try_parse(second.content, schema)
        if errors is None:
            return StructuredResult(value=value, raw=second.content, repair_attempts=1)
        raise LlmOutputInvalid(
            f"LLM output failed validation after repair: {errors}",
            details={"raw_outputs": [first.content, second.content]},
        )

    @staticmethod
    def _try_parse(content: str, schema: dict):
        try:
            value = extract_json(content)
        except ValueError as exc:
            return None, str(exc)
        validator = jsonschema.Draft202012Validator(schema)
        messages = [e.message for e in validator.iter_errors(value)]
        if messages:
            return None, "; ".join(sorted(messages)[:5])
        return value, None
