#!/usr/bin/env python3
"""Configuration for hilbloc (src package)."""
from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any

from .constants import (
    DEFAULT_CACHE_DIR,
    DEFAULT_MAX_DEGREE,
    DEFAULT_MAX_PAIRS,
    DEFAULT_ORDER,
    DEFAULT_SEED,
    OUTPUT_FORMATS,
)

HOME = str(Path.home())
CONFIG_PATHS = [
    os.path.join(HOME, ".hilblocrc"),
    os.path.join(HOME, ".config", "hilbloc", "config.json"),
]

DEFAULTS: dict[str, Any] = {
    "cache_dir": DEFAULT_CACHE_DIR,
    "use_cache": True,
    "max_pairs": DEFAULT_MAX_PAIRS,
    "max_degree": DEFAULT_MAX_DEGREE,
    "default_order": DEFAULT_ORDER,
    "seed": DEFAULT_SEED,
    "output_format": "human",
}

VALID_KEYS = frozenset(DEFAULTS.keys())


def config_path() -> str:
    """Preferred config file path (create dirs if needed)."""
    return CONFIG_PATHS[0]


def config_exists() -> bool:
    """True if any known config file exists."""
    for p in CONFIG_PATHS:
        if os.path.isfile(p):
            return True
    return False


def _validated(key: str, v: Any) -> Any:
    """Return the cleaned value, or None when it is out of range."""
    if key == "cache_dir" and isinstance(v, str) and v.strip():
        return v
    if key == "use_cache" and isinstance(v, bool):
        return v
    if isinstance(v, bool):
        return None
    if key == "max_pairs" and isinstance(v, (int, float)):
        val = int(v)
        return val if 1 <= val <= 10**7 else None
    if key == "max_degree" and isinstance(v, (int, float)):
        val = int(v)
        return val if 1 <= val <= 1000 else None
    if key == "default_order" and v in ("grevlex", "lex"):
        return v
    if key == "seed" and isinstance(v, int) and v >= 0:
        return v
    if key == "output_format" and v in OUTPUT_FORMATS:
        return v
    return None


def load(paths: list[str] | None = None) -> dict[str, Any]:
    """Load config from first existing file. Returns defaults + overrides."""
    out = dict(DEFAULTS)
    for p in paths or CONFIG_PATHS:
        if not os.path.isfile(p):
            continue
        try:
            with open(p, "r", encoding="utf-8") as f:
                raw = json.load(f)
            if not isinstance(raw, dict):
                continue
            for k, v in raw.items():
                if k not in VALID_KEYS:
                    continue
                val = _validated(k, v)
                if val is not None:
                    out[k] = val
            return out
        except (OSError, json.JSONDecodeError):
            continue
    return out


def save(cfg: dict[str, Any], path: str | None = None) -> None:
    """Write config to path (default: config_path()). Creates parent dirs."""
    p = path or config_path()
    dirname = os.path.dirname(p)
    if dirname:
        os.makedirs(dirname, exist_ok=True)
    to_write = {k: cfg.get(k, DEFAULTS[k]) for k in sorted(VALID_KEYS)}
    with open(p, "w", encoding="utf-8") as f:
        json.dump(to_write, f, indent=2)


def init_config() -> str:
    """Create default config file. Returns path used."""
    p = config_path()
    save(DEFAULTS, p)
    return p
