"""Runtime configuration: JSON config file with environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .gateway import GatewayConfig


@dataclass
class AppConfig:
    port: int = 8000
    data_dir: str = "./data"
    cors_origin: str = ""          # empty disables CORS
    ui_dir: str = ""               # static assets to serve at /, if present
    suggest_timeout_s: float = 60.0
    llm: GatewayConfig = field(default_factory=GatewayConfig)


def load_config(path: str | Path | None = None,
                env: dict[str, str] | None = None) -> AppConfig:
    """Build the config from an optional JSON file, then apply env overrides."""
    env = os.environ if env is None else env
    config = AppConfig()
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            raw = json.loads(path.read_text("utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}")
        config.port = int(raw.get("port", config.port))
        config.data_dir = raw.get("data_dir", config.data_dir)
        config.cors_origin = raw.get("cors_origin", config.cors_origin)
        config.ui_dir = raw.get("ui_dir", config.ui_dir)
        config.suggest_timeout_s = float(raw.get("suggest_timeout_s",
                                                 config.suggest_timeout_s))
        llm_raw = raw.get("llm", {})
        config.llm = GatewayConfig(
            base_url=llm_raw.get("base_url", ""),
            api_key=llm_raw.get("api_key", ""),
            model=llm_raw.get("model", config.llm.model),
            mock_dir=llm_raw.get("mock_dir", ""),
        )
    if "PRIVY_PORT" in env:
        config.port = int(env["PRIVY_PORT"])
    config.data_dir = env.get("PRIVY_DATA_DIR", config.data_dir)
    config.cors_origin = env.get("PRIVY_CORS_ORIGIN", config.cors_origin)
    config.ui_dir = env.get("PRIVY_UI_DIR", config.ui_dir)
    config.llm = GatewayConfig(
        base_url=env.get("PRIVY_LLM_BASE_URL", config.llm.base_url),
        api_key=env.get("PRIVY_LLM_API_KEY", config.llm.api_key),
        model=env.get("PRIVY_LLM_MODEL", config.llm.model),
        mock_dir=env.get("PRIVY_LLM_MOCK_DIR", config.llm.mock_dir),
    )
    return config


def bundled_mock_dir() -> str:
    """Path of the mock fixtures shipped with the package (for --mock runs)."""
    from importlib import resources

    return str(resources.files("privy.fixtures").joinpath("mock"))
