"""Configuration management for betactl.

Tiered default resolution (most specific wins):
1. Explicit CLI flag (e.g. --tol)
2. Environment variable BETACTL_TOL (series and equality tolerance only)
3. Config file ~/.config/betactl/config.json -> {"defaults": {"tol": 1e-10, "workers": 4}}
4. Built-in constants below

Config lookups check the namespaced "defaults" table first, then fall back to a flat
top-level key, so {"tol": 1e-10} also works.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass, field
from typing import Any

from betactl.errors import ConfigError

CONFIG_DIR = os.path.expanduser("~/.config/betactl")
CONFIG_FILE = os.path.join(CONFIG_DIR, "config.json")

TOL_ENV_VAR = "BETACTL_TOL"

# Quadrature oracle
DEFAULT_ABS_TOL = 1e-30
DEFAULT_REL_TOL = 1e-12
DEFAULT_MAX_SUBDIVISIONS = 4000

# Krull series
DEFAULT_KRULL_TOL = 1e-12
DEFAULT_MAX_TERMS = 10**6
KRULL_STOP_RUN = 3

# Gronau-Matkowski limit product
DEFAULT_GM_SCHEDULE = (10**3, 10**4, 10**5, 10**6)
DEFAULT_GM_REL_TOL = 1e-4
GM_CHUNK = 1 << 16

# Convexity lab
DEFAULT_STEP_SCALE = 1e-3
DEFAULT_CLASSIFY_TOL = 1e-7
DEFAULT_TRANSFORM_SAMPLES = 64

# Beta-type generators
DEFAULT_EQUALITY_TOL = 1e-10
DEFAULT_FIT_TOL = 1e-8

# Limit hypothesis of the Krull theorem
LIMIT_CHECK_THRESHOLD = 1e-3

DEFAULT_WORKERS = 1
MAX_WORKERS = 64

COMMANDS = ("eval", "ray", "certify", "betatype", "scan", "converge")

REQUIRED_PARAMETERS: dict[str, tuple[str, ...]] = {
    "eval": ("fn", "x"),
    "ray": ("k",),
    "certify": ("target",),
    "betatype": ("g1", "g2"),
    "scan": ("fn",),
    "converge": ("method",),
}

_BUILTIN_DEFAULTS: dict[str, Any] = {
    "tol": DEFAULT_KRULL_TOL,
    "rel_tol": DEFAULT_GM_REL_TOL,
    "workers": DEFAULT_WORKERS,
}

_config_warned: bool = False


def _load_json(path: str) -> dict:
    global _config_warned
    if not os.path.isfile(path):
        return {}
    try:
        with open(path) as f:
            content = f.read().strip()
        if not content:
            return {}
        data = json.loads(content)
    except json.JSONDecodeError:
        if not _config_warned:
            print(f"Warning: {path} contains invalid JSON. Using defaults.", file=sys.stderr)
            _config_warned = True
        return {}
    except OSError:
        return {}
    return data if isinstance(data, dict) else {}


def get_config() -> dict:
    return _load_json(CONFIG_FILE)


def _positive_float(name: str, value: Any) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {value!r}.") from None
    if not number > 0:
        raise ConfigError(f"{name} must be positive, got {value!r}.")
    return number


def resolve_default(key: str, explicit: Any = None, fallback: Any = None) -> Any:
    """Resolve a default using the tiered strategy.

    Returns `fallback` when nothing is set, or the built-in for `key` without one.
    """
    if explicit is not None:
        return explicit

    if key == "tol":
        env_value = os.environ.get(TOL_ENV_VAR)
        if env_value:
            return _positive_float(TOL_ENV_VAR, env_value)

    cfg = get_config()
    # Check namespaced key first, fall back to flat key
    value = cfg.get("defaults", {}).get(key, cfg.get(key))
    if value is not None:
        if key == "workers":
            return validate_workers(value)
        return _positive_float(f"config '{key}'", value)

    return fallback if fallback is not None else _BUILTIN_DEFAULTS.get(key)


def get_quadratic_coeffs() -> list[float] | None:
    """Return user quadratic coefficients [a, b, c, d, e, f] from config, if any."""
    coeffs = get_config().get("scan", {}).get("quadratic")
    if coeffs is None:
        return None
    if not isinstance(coeffs, list) or len(coeffs) != 6:
        raise ConfigError("config 'scan.quadratic' must be a list of six numbers a,b,c,d,e,f.")
    return [float(c) for c in coeffs]


def validate_workers(workers: Any) -> int:
    """Clamp worker count to [1, MAX_WORKERS]."""
    try:
        n = int(workers)
    except (TypeError, ValueError):
        raise ConfigError(f"workers must be an integer, got {workers!r}.") from None
    return max(1, min(n, MAX_WORKERS))


def validate_tolerance(name: str, value: Any) -> float:
    """Return value as a positive float or raise ConfigError naming the parameter."""
    return _positive_float(name, value)


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation: the command, its parameters, and where to write the CSV."""

    command: str
    parameters: dict[str, Any] = field(default_factory=dict)
    output_path: str | None = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command '{self.command}'. Expected one of: {', '.join(COMMANDS)}.")
        missing = [key for key in REQUIRED_PARAMETERS[self.command] if self.parameters.get(key) is None]
        if missing:
            raise ConfigError(f"'{self.command}' requires: {', '.join(missing)}.")
        for key in ("tol", "rel_tol", "abs_tol"):
            value = self.parameters.get(key)
            if value is not None:
                validate_tolerance(key, value)
