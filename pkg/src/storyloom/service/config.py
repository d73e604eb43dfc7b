"""Service configuration.

Config is a JSON file; credentials never appear in it.  A provider spec
names the environment variable holding its key (``credential_env``), and
the value is read from the process environment at build time.  The
bundled provider kind is ``mock``; ``http`` specs require an adapter
registered by the embedding application, since this package ships no
network client code for third-party generation APIs.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from ..errors import BadConfig
from ..providers.base import ProviderSet
from ..providers.mock import (
    MockAudioProvider,
    MockImageProvider,
    MockSegmentationProvider,
    MockSpeechProvider,
    MockTextProvider,
)

CAPABILITIES = ("text", "image", "audio", "speech", "segmentation")


@dataclass(frozen=True)
class ProviderSpec:
    kind: str = "mock"
    endpoint: str = ""
    credential_env: str = ""
    timeout_s: float = 30.0
    latency_s: float = 0.0
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8470
    store_path: str = "packages"
    workers: int = 2
    backlog: int = 32
    token_env: str | None = None
    rng_seed: int | None = None
    providers: dict[str, ProviderSpec] = field(default_factory=dict)
    extra: dict = field(default_factory=dict)


def load_config(path: Path | str | None) -> ServiceConfig:
    if path is None:
        return ServiceConfig()
    path = Path(path)
    if not path.is_file():
        raise BadConfig(f"no config file at {path}", path=str(path))
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise BadConfig(f"config is not valid JSON: {exc}", path=str(path)) from exc
    if not isinstance(raw, dict):
        raise BadConfig("config must be a JSON object")
    providers: dict[str, ProviderSpec] = {}
    for capability, spec in (raw.get("providers") or {}).items():
        if capability not in CAPABILITIES:
            raise BadConfig(f"unknown provider capability {capability!r}", known=list(CAPABILITIES))
        if not isinstance(spec, dict):
            raise BadConfig(f"provider spec for {capability!r} must be an object")
        known = {k: v for k, v in spec.items() if k in ProviderSpec.__dataclass_fields__}
        rest = {k: v for k, v in spec.items() if k not in ProviderSpec.__dataclass_fields__}
        try:
            providers[capability] = ProviderSpec(**known, extra=rest)
        except TypeError as exc:
            raise BadConfig(f"bad provider spec for {capability!r}: {exc}") from exc
    fields = {}
    for name in ("host", "port", "store_path", "workers", "backlog", "token_env", "rng_seed"):
        if name in raw:
            fields[name] = raw[name]
    rest = {
        k: v for k, v in raw.items() if k not in fields and k != "providers"
    }
    try:
        config = ServiceConfig(providers=providers, extra=rest, **fields)
    except TypeError as exc:
        raise BadConfig(f"bad config: {exc}") from exc
    if not isinstance(config.port, int) or not 0 <= config.port < 65536:
        raise BadConfig(f"port {config.port!r} out of range")
    if not isinstance(config.workers, int) or config.workers < 1:
        raise BadConfig(f"workers {config.workers!r} must be a positive integer")
    if not isinstance(config.backlog, int) or config.backlog < 1:
        raise BadConfig(f"backlog {config.backlog!r} must be a positive integer")
    return config


# capability -> factory(spec, credential) -> provider instance
_HTTP_ADAPTERS: dict[str, Callable] = {}


def register_http_adapter(capability: str, factory: Callable) -> None:
    """Install a client for remote providers of one capability.  The
    factory receives (ProviderSpec, credential string or None)."""
    if capability not in CAPABILITIES:
        raise BadConfig(f"unknown provider capability {capability!r}", known=list(CAPABILITIES))
    _HTTP_ADAPTERS[capability] = factory


def _mock_for(capability: str, spec: ProviderSpec):
    if capability == "text":
        return MockTextProvider()
    if capability == "image":
        return MockImageProvider(latency_s=spec.latency_s)
    if capability == "audio":
        return MockAudioProvider(latency_s=spec.latency_s)
    if capability == "speech":
        return MockSpeechProvider(latency_s=spec.latency_s)
    return MockSegmentationProvider()


def build_providers(config: ServiceConfig) -> ProviderSet:
    built = {}
    for capability in CAPABILITIES:
        spec = config.providers.get(capability, ProviderSpec())
        if spec.kind == "mock":
            built[capability] = _mock_for(capability, spec)
        elif spec.kind == "http":
            factory = _HTTP_ADAPTERS.get(capability)
            if factory is None:
                raise BadConfig(
                    f"no http adapter registered for {capability!r}; "
                    "call register_http_adapter first",
                    capability=capability,
                )
            credential = os.environ.get(spec.credential_env) if spec.credential_env else None
            built[capability] = factory(spec, credential)
        elif spec.kind == "none":
            built[capability] = None
        else:
            raise BadConfig(f"unknown provider kind {spec.kind!r} for {capability!r}")
    return ProviderSet(**built)
