"""Service configuration: a flat JSON document with env-var overrides.

Environment variables use the upper-snake name of the config key (e.g.
``DATA_DIR``, ``K_HYPOTHESES``) and take precedence over the file.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .backends import LocalBackend, MockBackend, QABackend
from .errors import ConfigError
from .store import KnowledgeStore


@dataclass
class ServiceConfig:
    data_dir: str = "./data"
    listen: str = "127.0.0.1:8080"
    k1: float = 1.2
    b: float = 0.75
    w_retrieval: float = 0.5
    w_coverage: float = 0.3
    w_proximity: float = 0.2
    tau: float = 0.15
    k_hypotheses: int = 10
    backend: str = "local"
    fixture_path: Optional[str] = None
    suggestion_limit: int = 3
    cloud_limit: int = 50
    max_concepts: int = 8
    console_dir: Optional[str] = None

    def validate(self) -> "ServiceConfig":
        if self.k1 <= 0:
            raise ConfigError("k1 must be > 0")
        if not 0.0 <= self.b <= 1.0:
            raise ConfigError("b must be in [0, 1]")
        weight_sum = self.w_retrieval + self.w_coverage + self.w_proximity
        if abs(weight_sum - 1.0) > 1e-9:
            raise ConfigError(f"feature weights must sum to 1, got {weight_sum}")
        if min(self.w_retrieval, self.w_coverage, self.w_proximity) < 0:
            raise ConfigError("feature weights must be >= 0")
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigError("tau must be in [0, 1]")
        if self.k_hypotheses < 1:
            raise ConfigError("k_hypotheses must be >= 1")
        if self.suggestion_limit < 1 or self.cloud_limit < 1 or self.max_concepts < 1:
            raise ConfigError("suggestion_limit, cloud_limit and max_concepts must be >= 1")
        if self.backend not in ("local", "mock"):
            raise ConfigError(f"backend must be 'local' or 'mock', got {self.backend!r}")
        if self.backend == "mock" and not self.fixture_path:
            raise ConfigError("mock backend requires fixture_path")
        return self

    @property
    def host(self) -> str:
        return self.listen.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        try:
            return int(self.listen.rsplit(":", 1)[1])
        except (IndexError, ValueError):
            raise ConfigError(f"listen must be host:port, got {self.listen!r}") from None


def _coerce(name: str, raw: str, target_type) -> object:
    try:
        if target_type is float:
            return float(raw)
        if target_type is int:
            return int(raw)
    except ValueError:
        raise ConfigError(f"cannot parse {name}={raw!r}") from None
    return raw


def load_config(path: Optional[str | Path] = None,
                overrides: Optional[dict] = None,
                env: Optional[dict[str, str]] = None) -> ServiceConfig:
    """File values, then explicit overrides, then environment overrides."""
    values: dict = {}
    if path is not None:
        try:
            values = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(values, dict):
            raise ConfigError("config file must contain a JSON object")
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})

    known = {f.name: f.type for f in fields(ServiceConfig)}
    unknown = set(values) - set(known)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")

    env = os.environ if env is None else env
    for f in fields(ServiceConfig):
        env_name = f.name.upper()
        if env_name in env:
            target = {"k1": float, "b": float, "w_retrieval": float, "w_coverage": float,
                      "w_proximity": float, "tau": float, "k_hypotheses": int,
                      "suggestion_limit": int, "cloud_limit": int,
                      "max_concepts": int}.get(f.name, str)
            values[f.name] = _coerce(f.name, env[env_name], target)

    return ServiceConfig(**values).validate()


def build_store(config: ServiceConfig) -> KnowledgeStore:
    root = Path(config.data_dir)
    root.mkdir(parents=True, exist_ok=True)
    return KnowledgeStore(root=root)


def build_backend(config: ServiceConfig, store: KnowledgeStore) -> QABackend:
    if config.backend == "mock":
        return MockBackend(config.fixture_path)
    return LocalBackend(
        store, k1=config.k1, b=config.b, tau=config.tau,
        w_retrieval=config.w_retrieval, w_coverage=config.w_coverage,
        w_proximity=config.w_proximity,
    )
