"""Service configuration.

Loaded from a JSON file named on the command line (--config) or through
the ADAPT_CONFIG environment variable. Every threshold has the engine
default, so a minimal config only needs store_dir.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .assessment import LEVEL_LOWER_BOUND, LEVEL_UPPER_BOUND
from .errors import MalformedDocument
from .learner import DEFAULT_RETENTION
from .pedagogy import MASTERY_BOUND, READINESS_BOUND

ENV_VAR = "ADAPT_CONFIG"


@dataclass(frozen=True)
class Thresholds:
    mastery_bound: float = MASTERY_BOUND
    readiness_bound: float = READINESS_BOUND
    overlay_retention: float = DEFAULT_RETENTION
    level_lower: float = LEVEL_LOWER_BOUND
    level_upper: float = LEVEL_UPPER_BOUND


@dataclass(frozen=True)
class ServiceConfig:
    store_dir: Path
    instrument_path: Path | None = None
    host: str = "127.0.0.1"
    port: int = 8000
    token_ttl_seconds: int = 86_400
    thresholds: Thresholds = field(default_factory=Thresholds)


def load_config(path: str | Path | None = None) -> ServiceConfig:
    """Read the config file; falls back to the ADAPT_CONFIG env variable."""
    if path is None:
        path = os.environ.get(ENV_VAR)
    if path is None:
        raise MalformedDocument(
            f"no config file given: pass --config or set {ENV_VAR}"
        )
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise MalformedDocument(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"config file is not valid JSON: {exc}") from exc
    return config_from_document(doc, base_dir=Path(path).parent)


def config_from_document(doc: dict, *, base_dir: Path | None = None) -> ServiceConfig:
    if not isinstance(doc, dict):
        raise MalformedDocument("config must be a JSON object")
    store_dir = doc.get("store_dir")
    if not isinstance(store_dir, str) or not store_dir:
        raise MalformedDocument("config requires a store_dir string")

    def _resolve(raw: str) -> Path:
        p = Path(raw)
        if base_dir is not None and not p.is_absolute():
            p = base_dir / p
        return p

    raw_thresholds = doc.get("thresholds", {})
    if not isinstance(raw_thresholds, dict):
        raise MalformedDocument("thresholds must be an object")
    defaults = Thresholds()
    unknown = set(raw_thresholds) - {
        "mastery_bound", "readiness_bound", "overlay_retention",
        "level_lower", "level_upper",
    }
    if unknown:
        raise MalformedDocument(f"unknown threshold keys: {sorted(unknown)}")
    thresholds = Thresholds(
        mastery_bound=float(raw_thresholds.get("mastery_bound", defaults.mastery_bound)),
        readiness_bound=float(raw_thresholds.get("readiness_bound", defaults.readiness_bound)),
        overlay_retention=float(
            raw_thresholds.get("overlay_retention", defaults.overlay_retention)
        ),
        level_lower=float(raw_thresholds.get("level_lower", defaults.level_lower)),
        level_upper=float(raw_thresholds.get("level_upper", defaults.level_upper)),
    )

    listen = doc.get("listen", {})
    if not isinstance(listen, dict):
        raise MalformedDocument("listen must be an object")

    instrument_path = doc.get("instrument_path")
    return ServiceConfig(
        store_dir=_resolve(store_dir),
        instrument_path=_resolve(instrument_path) if instrument_path else None,
        host=str(listen.get("host", "127.0.0.1")),
        port=int(listen.get("port", 8000)),
        token_ttl_seconds=int(doc.get("token_ttl_seconds", 86_400)),
        thresholds=thresholds,
    )
