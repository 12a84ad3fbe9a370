"""LLM gateway: wire client, retries, mock determinism, structured output."""

import json
import logging

import httpx
import pytest

from privy.config import bundled_mock_dir
from privy.errors import BackendError, ConfigError, LlmOutputInvalid, ValidationError
from privy.gateway import (
    ChatMessage,
    ChatRequest,
    GatewayConfig,
    HttpBackend,
    LlmGateway,
    MockBackend,
    extract_json,
)

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["items"],
    "properties": {"items": {"type": "array"}},
}


def _request(content="hello", temperature=0.7):
    return ChatRequest(model="test-model", temperature=temperature, messages=[
        ChatMessage(role="system", content="you are a test"),
        ChatMessage(role="user", content=content),
    ])


# -- request validation --------------------------------------------------------

def test_negative_temperature_rejected():
    gateway = LlmGateway(GatewayConfig(mock_dir=bundled_mock_dir()))
    with pytest.raises(ValidationError):
        gateway.chat(_request(temperature=-1))


def test_message_shape_validated():
    gateway = LlmGateway(GatewayConfig(mock_dir=bundled_mock_dir()))
    with pytest.raises(ValidationError):
        gateway.chat(ChatRequest(model="m", messages=[]))
    with pytest.raises(ValidationError):
        gateway.chat(ChatRequest(model="m", messages=[
            ChatMessage(role="user", content="no system first")]))


def test_missing_api_key_fails_before_any_network_call():
    with pytest.raises(ConfigError):
        HttpBackend(GatewayConfig(base_url="https://llm.example"))
    with pytest.raises(ConfigError):
        HttpBackend(GatewayConfig(api_key="k"))


# -- mock backend ----------------------------------------------------------------

def test_mock_named_fixture_byte_identical_across_instances():
    from pathlib import Path

    key = "use-cases/ai-meeting-assistant"
    first = MockBackend(bundled_mock_dir()).complete(_request(), fixture_key=key)
    second = MockBackend(bundled_mock_dir()).complete(_request(), fixture_key=key)
    assert first.content == second.content
    # the fixture file itself is the oracle
    recorded = (Path(bundled_mock_dir()) / "use-cases" /
                "ai-meeting-assistant.txt").read_text("utf-8")
    assert first.content == recorded


def test_mock_missing_fixture_errors(tmp_path):
    backend = MockBackend(tmp_path)
    with pytest.raises(BackendError) as exc:
        backend.complete(_request(), fixture_key="nowhere/nothing")
    assert exc.value.code == "missing_fixture"


def test_mock_missing_dir_rejected(tmp_path):
    with pytest.raises(ConfigError):
        MockBackend(tmp_path / "missing")


def test_mock_default_fallback(tmp_path):
    pipeline = tmp_path / "use-cases"
    pipeline.mkdir()
    (pipeline / "default.txt").write_text("fallback", "utf-8")
    backend = MockBackend(tmp_path)
    assert backend.complete(_request(), fixture_key="use-cases/feedbeef").content == "fallback"


def test_mock_index_alias(tmp_path):
    pipeline = tmp_path / "risks"
    pipeline.mkdir()
    (pipeline / "special.txt").write_text("aliased", "utf-8")
    (pipeline / "index.json").write_text(json.dumps({"abc123": "special"}), "utf-8")
    backend = MockBackend(tmp_path)
    assert backend.complete(_request(), fixture_key="risks/abc123").content == "aliased"


# -- JSON extraction ---------------------------------------------------------------

def test_extract_fenced_json():
    assert extract_json('```json {"items": []} ```') == {"items": []}


def test_extract_bare_json_in_prose():
    text = 'Sure! Here it is: {"items": [1, 2]} — hope that helps.'
    assert extract_json(text) == {"items": [1, 2]}


def test_extract_json_array_and_nested_braces():
    assert extract_json("[1, 2, 3]") == [1, 2, 3]
    assert extract_json('{"a": "brace } in string", "b": {"c": 1}}') == {
        "a": "brace } in string", "b": {"c": 1}}


def test_extract_json_none_found():
    with pytest.raises(ValueError):
        extract_json("no json here at all")


# -- structured output and the bounded repair --------------------------------------

def _scripted_gateway(tmp_path, responses):
    pipeline = tmp_path / "test"
    pipeline.mkdir(parents=True, exist_ok=True)
    (pipeline / "script.json").write_text(json.dumps({"responses": responses}), "utf-8")
    return LlmGateway(GatewayConfig(mock_dir=str(tmp_path)))


def test_structured_well_formed_no_repair(tmp_path):
    gateway = _scripted_gateway(tmp_path, ['```json {"items": []} ```'])
    result = gateway.chat_structured(_request(), SCHEMA, fixture_key="test/script")
    assert result.value == {"items": []}
    assert result.repair_attempts == 0
    assert gateway.calls == 1


def test_structured_repair_recovers(tmp_path):
    gateway = _scripted_gateway(tmp_path, [
        "I think the items are probably empty, but let me explain at length...",
        '{"items": []}',
    ])
    result = gateway.chat_structured(_request(), SCHEMA, fixture_key="test/script")
    assert result.value == {"items": []}
    assert result.repair_attempts == 1
    assert gateway.calls == 2


def test_structured_double_failure_carries_both_raws(tmp_path):
    gateway = _scripted_gateway(tmp_path, ["prose only", '{"wrong_key": 1}'])
    with pytest.raises(LlmOutputInvalid) as exc:
        gateway.chat_structured(_request(), SCHEMA, fixture_key="test/script")
    assert exc.value.code == "llm_output_invalid"
    assert exc.value.details["raw_outputs"] == ["prose only", '{"wrong_key": 1}']
    assert gateway.calls == 2  # never more than 2 backend calls


def test_structured_schema_violation_then_repair(tmp_path):
    gateway = _scripted_gateway(tmp_path, ['{"items": "not an array"}', '{"items": []}'])
    result = gateway.chat_structured(_request(), SCHEMA, fixture_key="test/script")
    assert result.repair_attempts == 1


# -- HTTP backend: wire format, retries, error mapping --------------------------------

def _http_backend(handler, **config_kw):
    config = GatewayConfig(base_url="https://llm.example/v1", api_key="sk-secret-key",
                           backoff_base_s=0.0, **config_kw)
    transport = httpx.MockTransport(handler)
    return HttpBackend(config, client=httpx.Client(transport=transport))


def test_http_success_and_wire_shape():
    seen = {}

    def handler(request: httpx.Request) -> httpx.Response:
        seen["url"] = str(request.url)
        seen["auth"] = request.headers.get("authorization")
        seen["body"] = json.loads(request.content)
        return httpx.Response(200, json={
            "choices": [{"message": {"content": "hi"}}],
            "usage": {"prompt_tokens": 5, "completion_tokens": 2},
        })

    backend = _http_backend(handler)
    response = backend.complete(_request("ping"))
    assert response.content == "hi"
    assert response.usage.prompt_tokens == 5
    assert seen["url"] == "https://llm.example/v1/chat/completions"
    assert seen["auth"] == "Bearer sk-secret-key"
    assert seen["body"]["model"] == "test-model"
    assert seen["body"]["messages"][0]["role"] == "system"
    assert seen["body"]["temperature"] == 0.7


def test_http_retries_on_429_and_5xx():
    statuses = iter([429, 500])

    def handler(request):
        status = next(statuses, 200)
        if status != 200:
            return httpx.Response(status, json={"error": {"message": "slow down"}})
        return httpx.Response(200, json={"choices": [{"message": {"content": "ok"}}]})

    backend = _http_backend(handler)
    assert backend.complete(_request()).content == "ok"
    assert backend.calls == 3


def test_http_gives_up_after_retries():
    def handler(request):
        return httpx.Response(503, json={"error": {"message": "overloaded"}})

    backend = _http_backend(handler)
    with pytest.raises(BackendError) as exc:
        backend.complete(_request())
    assert "overloaded" in exc.value.message
    assert backend.calls == 3  # initial + 2 retries


def test_http_no_retry_on_4xx():
    def handler(request):
        return httpx.Response(400, json={"error": {"message": "bad request"}})

    backend = _http_backend(handler)
    with pytest.raises(BackendError):
        backend.complete(_request())
    assert backend.calls == 1


def test_http_auth_failure():
    def handler(request):
        return httpx.Response(401, json={"error": {"message": "bad key"}})

    backend = _http_backend(handler)
    with pytest.raises(BackendError) as exc:
        backend.complete(_request())
    assert exc.value.code == "auth_error"
    assert backend.calls == 1


def test_http_malformed_payload():
    def handler(request):
        return httpx.Response(200, json={"unexpected": True})

    backend = _http_backend(handler)
    with pytest.raises(BackendError):
        backend.complete(_request())


# -- secret redaction -------------------------------------------------------------

def test_api_key_never_logged_and_scrubbed_from_errors(caplog):
    secret = "sk-secret-key"

    def handler(request):
        return httpx.Response(400, json={
            "error": {"message": f"invalid key {secret} provided"}})

    backend = _http_backend(handler)
    with caplog.at_level(logging.DEBUG, logger="privy.gateway"):
        gateway = LlmGateway(GatewayConfig(base_url="x", api_key=secret),
                             backend=backend)
        with pytest.raises(BackendError) as exc:
            gateway.chat(_request())
    assert secret not in exc.value.message
    assert "[redacted]" in exc.value.message
    for record in caplog.records:
        assert secret not in record.getMessage()
