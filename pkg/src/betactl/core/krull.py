"""Convex/concave solutions of phi(x+1) = phi(x) + F(x) from Krull's series.

For a convex or concave driver F on (a, inf) with F(x+1) - F(x) -> 0, the unique solution
of the opposite shape through (x0, y0) is

    phi(x) = y0 + (x - x0) F(x0) - sum_{n>=0} t_n,
    t_n    = F(x+n) - F(x0+n) - (x - x0) [F(x0+n+1) - F(x0+n)].

Terms are evaluated in growing numpy blocks when F accepts arrays, and fall back to
scalar calls otherwise. The sum stops after three consecutive terms below tol; a
power-law tail fitted to the last terms is then added and reported as the tail estimate.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from betactl.config import DEFAULT_KRULL_TOL, DEFAULT_MAX_TERMS, KRULL_STOP_RUN, LIMIT_CHECK_THRESHOLD
from betactl.errors import DomainError, HypothesisError
from betactl.util.summation import CompensatedSum

logger = logging.getLogger(__name__)

SHAPES = ("convex", "concave")

_FIRST_BLOCK = 64
_MAX_BLOCK = 1 << 16
_SHAPE_STEP = 0.25
_SHAPE_OFFSETS = (0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0)

Driver = Callable[[float], float]


@dataclass(frozen=True)
class SpotCheck:
    """Outcome of a sampled hypothesis check, with the sampled quantities."""

    passed: bool
    samples: tuple[float, ...]


@dataclass(frozen=True)
class KrullProblem:
    """Driver F on (a, inf), anchor (x0, y0), and the declared shape of F.

    With b set, the shape is only required on (b, inf).
    """

    F: Driver
    a: float
    x0: float
    y0: float
    shape: str
    b: float | None = None

    def __post_init__(self) -> None:
        if self.shape not in SHAPES:
            raise DomainError(f"shape must be 'convex' or 'concave', got {self.shape!r}.")
        if not self.x0 > self.a:
            raise DomainError(f"Anchor x0={self.x0!r} must lie above a={self.a!r}.")
        if self.b is not None and not self.b > self.a:
            raise DomainError(f"Shape threshold b={self.b!r} must lie above a={self.a!r}.")
        if not math.isfinite(float(self.F(self.x0))):
            raise DomainError(f"F is not finite at the anchor x0={self.x0!r}.")
        report = check_shape(self)
        if not report.passed:
            worst = min(report.samples) if self.shape == "convex" else max(report.samples)
            raise HypothesisError(
                f"F is declared {self.shape} but a second difference of {worst:.3e} contradicts it."
            )


@dataclass(frozen=True)
class SolverResult:
    value: float
    terms_used: int
    last_term: float
    converged: bool
    tail_estimate: float = 0.0


def check_shape(p: KrullProblem, b: float | None = None) -> SpotCheck:
    """Second differences of F on a grid starting at b (default p.b, then x0).

    Passes when every sample has the sign of the declared shape, up to rounding.
    """
    start = b if b is not None else (p.b if p.b is not None else p.x0)
    if not start > p.a:
        raise DomainError(f"Shape grid start {start!r} must lie above a={p.a!r}.")
    h = _SHAPE_STEP
    samples = []
    passed = True
    for offset in _SHAPE_OFFSETS:
        t = start + offset
        f0, f1, f2 = float(p.F(t)), float(p.F(t + h)), float(p.F(t + 2 * h))
        second = f0 - 2.0 * f1 + f2
        slack = 64 * np.finfo(float).eps * (abs(f0) + 2 * abs(f1) + abs(f2))
        samples.append(second)
        if p.shape == "convex" and second < -slack:
            passed = False
        if p.shape == "concave" and second > slack:
            passed = False
    return SpotCheck(passed, tuple(samples))


def limit_check(F: Driver, probe_points: Sequence[float], threshold: float = LIMIT_CHECK_THRESHOLD) -> SpotCheck:
    """|F(x+1) - F(x)| must not increase along the probes and end below threshold."""
    if not probe_points:
        raise DomainError("limit_check needs at least one probe point.")
    diffs = tuple(abs(float(F(x + 1.0)) - float(F(x))) for x in probe_points)
    decreasing = all(b <= a for a, b in zip(diffs, diffs[1:]))
    return SpotCheck(decreasing and diffs[-1] < threshold, diffs)


def _evaluate(F: Driver, points: np.ndarray) -> np.ndarray:
    try:
        values = np.asarray(F(points), dtype=float)
        if values.shape == points.shape:
            return values
    except (TypeError, ValueError):
        pass
    return np.fromiter((F(float(t)) for t in points), dtype=float, count=len(points))


def _term_block(p: KrullProblem, x: float, start: int, size: int) -> np.ndarray:
    n = np.arange(start, start + size, dtype=float)
    dx = x - p.x0
    fx = _evaluate(p.F, x + n)
    # x0 + n and x0 + n + 1 share all but one point
    f0 = _evaluate(p.F, p.x0 + np.arange(start, start + size + 1, dtype=float))
    return (fx - f0[:-1]) - dx * (f0[1:] - f0[:-1])


def _term(p: KrullProblem, x: float, n: int) -> float:
    return float(_term_block(p, x, n, 1)[0])


def krull_terms(p: KrullProblem, x: float) -> Iterator[float]:
    """Yield t_0, t_1, ... without end."""
    _check_x(p, x)
    start, size = 0, _FIRST_BLOCK
    while True:
        yield from _term_block(p, x, start, size).tolist()
        start += size
        size = min(2 * size, _MAX_BLOCK)


def _stop_index(small: np.ndarray, run: int) -> tuple[int | None, int]:
    """Index in `small` where the run of True reaches KRULL_STOP_RUN, and the carried run."""
    padded = np.concatenate([np.ones(run, dtype=bool), small])
    need = KRULL_STOP_RUN
    if len(padded) >= need:
        window = padded[: len(padded) - need + 1].copy()
        for shift in range(1, need):
            window &= padded[shift : len(padded) - need + 1 + shift]
        hits = np.flatnonzero(window)
        if hits.size:
            return int(hits[0]) + need - 1 - run, 0
    falses = np.flatnonzero(~padded)
    trailing = len(padded) if falses.size == 0 else len(padded) - 1 - int(falses[-1])
    return None, min(trailing, need - 1)


def _tail(p: KrullProblem, x: float, last_index: int, last_term: float) -> float:
    """Sum of t_n for n > last_index, assuming t_n ~ C n**-q locally."""
    if last_index < 2 or last_term == 0.0:
        return 0.0
    probe = 1 << (last_index.bit_length() - 1)
    if probe == last_index:
        probe //= 2
    earlier = _term(p, x, probe)
    if earlier == 0.0 or (earlier > 0) != (last_term > 0) or abs(earlier) <= abs(last_term):
        return 0.0
    q = math.log(earlier / last_term) / math.log(last_index / probe)
    if q <= 1.05:
        return 0.0
    return last_term * last_index / (q - 1.0) - 0.5 * last_term


def _check_x(p: KrullProblem, x: float) -> None:
    if not (math.isfinite(x) and x > p.a):
        raise DomainError(f"x={x!r} must lie above a={p.a!r}.")


def krull_eval(
    p: KrullProblem,
    x: float,
    tol: float = DEFAULT_KRULL_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> SolverResult:
    """Evaluate the series directly at x."""
    _check_x(p, x)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}.")
    if max_terms < 1:
        raise DomainError(f"max_terms must be at least 1, got {max_terms!r}.")

    total = CompensatedSum()
    start, size, run = 0, _FIRST_BLOCK, 0
    stop: int | None = None
    last = 0.0
    while start < max_terms and stop is None:
        size = min(size, max_terms - start)
        block = _term_block(p, x, start, size)
        idx, run = _stop_index(np.abs(block) < tol, run)
        if idx is not None:
            block = block[: idx + 1]
            stop = start + idx
        total.add(math.fsum(block))
        last = float(block[-1])
        start += len(block)
        size = min(2 * size, _MAX_BLOCK)

    converged = stop is not None
    terms_used = start
    tail = _tail(p, x, terms_used - 1, last)
    total.add(tail)
    value = p.y0 + (x - p.x0) * float(p.F(p.x0)) - total.value

    if converged:
        logger.debug("krull_eval x=%g: %d terms, last %.3e, tail %.3e", x, terms_used, last, tail)
    else:
        logger.warning("krull_eval x=%g: not converged after %d terms (last term %.3e)", x, terms_used, last)
    return SolverResult(value, terms_used, abs(last), converged, tail)


def krull_eval_shifted(
    p: KrullProblem,
    x: float,
    tol: float = DEFAULT_KRULL_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> SolverResult:
    """Reduce x into [x0, x0 + 1) with the recurrence, then sum the series there.

    x = x0 + m (m integer) reduces to the anchor itself.
    """
    _check_x(p, x)
    m = math.floor(x - p.x0)
    if m == 0:
        return krull_eval(p, x, tol, max_terms)

    base = x - m
    shift = CompensatedSum()
    if m > 0:
        # phi(x) = phi(base) + sum_{j<m} F(base + j)
        shift.extend(float(v) for v in _evaluate(p.F, base + np.arange(m, dtype=float)))
        sign = 1.0
    else:
        # phi(x) = phi(base) - sum_{j<|m|} F(x + j)
        shift.extend(float(v) for v in _evaluate(p.F, x + np.arange(-m, dtype=float)))
        sign = -1.0

    inner = krull_eval(p, base, tol, max_terms)
    value = inner.value + sign * shift.value
    return SolverResult(value, inner.terms_used, inner.last_term, inner.converged, inner.tail_estimate)
