"""Parsing helpers for grids, directions, schedules and labelled parameters."""

from __future__ import annotations

import itertools
import math

from betactl.errors import ConfigError

GRID_INTEGRAL_TOL = 1e-9


def _number(text: str, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"Invalid {what} '{text}': expected a number.") from None
    if not math.isfinite(value):
        raise ConfigError(f"Invalid {what} '{text}': must be finite.")
    return value


def parse_grid(spec: str) -> list[float]:
    """Parse 'start:stop:step' (inclusive) or a comma list '0.5,1,2'.

    The stop value is included when (stop - start) / step is an integer within 1e-9.
    Points are computed as start + i*step and rounded to 12 significant digits so
    that 0.1:0.5:0.2 yields exactly [0.1, 0.3, 0.5].
    """
    spec = spec.strip()
    if not spec:
        raise ConfigError("Empty grid. Use start:stop:step or a comma-separated list.")
    if ":" not in spec:
        return [_number(part, "grid value") for part in spec.split(",") if part.strip()]

    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"Invalid grid '{spec}'. Use start:stop:step (e.g. 0.5:4.5:0.5).")
    start, stop, step = (_number(p, "grid bound") for p in parts)
    if step <= 0:
        raise ConfigError(f"Invalid grid '{spec}': step must be positive.")
    if stop < start:
        raise ConfigError(f"Invalid grid '{spec}': stop must not be below start.")

    count = (stop - start) / step
    nearest = round(count)
    last = nearest if abs(count - nearest) <= GRID_INTEGRAL_TOL else math.floor(count)
    return [float(f"{start + i * step:.12g}") for i in range(last + 1)]


def parse_grid2(spec: str, yspec: str | None = None) -> list[tuple[float, float]]:
    """Cartesian grid of (x, y) points; y defaults to the x grid."""
    xs = parse_grid(spec)
    ys = parse_grid(yspec) if yspec else xs
    return list(itertools.product(xs, ys))


def parse_direction(spec: str) -> tuple[float, float]:
    """Parse 'u,v' into a direction tuple."""
    parts = [p for p in spec.replace(" ", "").split(",") if p]
    if len(parts) != 2:
        raise ConfigError(f"Invalid direction '{spec}'. Use u,v (e.g. 1,-1).")
    return _number(parts[0], "direction component"), _number(parts[1], "direction component")


def parse_schedule(spec: str) -> list[int]:
    """Parse a strictly increasing comma list of positive integers ('1e3,1e4' allowed)."""
    values = []
    for part in spec.split(","):
        if not part.strip():
            continue
        number = _number(part, "schedule entry")
        if number < 1 or number != int(number):
            raise ConfigError(f"Invalid schedule entry '{part}': must be a positive integer.")
        values.append(int(number))
    if not values:
        raise ConfigError("Empty schedule.")
    if any(b <= a for a, b in itertools.pairwise(values)):
        raise ConfigError(f"Schedule '{spec}' must be strictly increasing.")
    return values


def parse_coeffs(spec: str, count: int) -> list[float]:
    """Parse exactly `count` comma-separated numbers."""
    values = [_number(p, "coefficient") for p in spec.split(",") if p.strip()]
    if len(values) != count:
        raise ConfigError(f"Expected {count} comma-separated coefficients, got {len(values)}.")
    return values


def split_label(label: str) -> tuple[str, float | None]:
    """Split 'name:param' into ('name', param); a bare 'name' gives ('name', None)."""
    name, sep, param = label.partition(":")
    if not sep:
        return name.strip(), None
    return name.strip(), _number(param, f"parameter of '{name}'")
