"""Geometrically convex solutions of phi(x+1) = G(x) phi(x) as a limit of products.

The n-th approximant with phi(1) = c is

    c * G(n)**e_n * (1 / G(x)) * prod_{j=1..n} G(j) / G(j+x),
    e_n = log(1 + x/(n+1)) / log(1 + 1/n),

accumulated in log space. The product sums run in fixed chunks of GM_CHUNK factors,
each chunk summed exactly and the chunks combined with a compensated sum, so a result
is reproducible for a given schedule.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from betactl.config import DEFAULT_GM_REL_TOL, DEFAULT_GM_SCHEDULE, GM_CHUNK
from betactl.core.krull import SolverResult, SpotCheck
from betactl.errors import DomainError, HypothesisError, RangeOverflowError
from betactl.util.summation import CompensatedSum

logger = logging.getLogger(__name__)

_LOG_MAX = math.log(np.finfo(float).max)
_LOG_TINY = math.log(np.finfo(float).tiny)
_POSITIVITY_PROBES = (0.5, 1.0, 2.0, 10.0, 100.0)

Factor = Callable[[float], float]


@dataclass(frozen=True)
class GeoProblem:
    """Factor G > 0 on (0, inf) and the value c = phi(1).

    log_G, when given, is used instead of log(G(x)) so G itself may overflow. Unless
    validate is False, construction spot-checks that log G is concave near infinity and
    that G(x+1)/G(x) tends to 1, and raises HypothesisError otherwise.
    """

    G: Factor
    c: float
    log_G: Factor | None = None
    validate: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.c) and self.c > 0):
            raise DomainError(f"c must be a positive finite number, got {self.c!r}.")
        if self.log_G is None:
            for x in _POSITIVITY_PROBES:
                value = float(self.G(x))
                if not value > 0:
                    raise DomainError(f"G must be positive; G({x!r}) = {value!r}.")
        else:
            logs = self.log_factor(np.asarray(_POSITIVITY_PROBES, dtype=float))
            if not np.all(np.isfinite(logs)):
                raise DomainError(f"log G must be finite on {_POSITIVITY_PROBES}, got {logs.tolist()}.")
        if self.validate:
            failed = [name for name, check in geo_hypotheses(self).items() if not check.passed]
            if failed:
                raise HypothesisError(f"G fails the {' and '.join(failed)} check near infinity.")

    def log_factor(self, x: np.ndarray) -> np.ndarray:
        fn = self.log_G if self.log_G is not None else (lambda t: np.log(self.G(t)))
        try:
            values = np.asarray(fn(x), dtype=float)
            if values.shape == np.shape(x):
                return values
        except (TypeError, ValueError):
            pass
        return np.fromiter((float(fn(float(t))) for t in np.ravel(x)), dtype=float, count=np.size(x))


def geo_hypotheses(p: GeoProblem, probes: Sequence[float] = (10.0, 100.0, 1000.0)) -> dict[str, SpotCheck]:
    """Spot-check log-concavity of G and G(x+1)/G(x) -> 1 on probes near infinity."""
    if len(probes) < 2:
        raise DomainError("geo_hypotheses needs at least two probe points.")
    xs = np.asarray(probes, dtype=float)
    h = 0.25
    second = p.log_factor(xs) - 2 * p.log_factor(xs + h) + p.log_factor(xs + 2 * h)
    slack = 64 * np.finfo(float).eps * np.abs(p.log_factor(xs))
    ratio = np.abs(p.log_factor(xs + 1.0) - p.log_factor(xs))
    # |log G(x+1) - log G(x)| must not grow and must have at least halved by the last probe
    shrinking = bool(np.all(np.diff(ratio) <= slack[1:])) and (ratio[-1] <= 0.5 * ratio[0] or ratio[-1] <= slack[-1])
    return {
        "log-concave": SpotCheck(bool(np.all(second <= slack)), tuple(second.tolist())),
        "ratio-to-one": SpotCheck(shrinking, tuple(ratio.tolist())),
    }


def _exponent(x: float, n: int) -> float:
    return math.log1p(x / (n + 1)) / math.log1p(1.0 / n)


def _product_sum(p: GeoProblem, x: float, lo: int, hi: int) -> CompensatedSum:
    """sum_{j=lo..hi} [log G(j) - log G(j+x)] in chunks of GM_CHUNK."""
    total = CompensatedSum()
    for start in range(lo, hi + 1, GM_CHUNK):
        j = np.arange(start, min(start + GM_CHUNK, hi + 1), dtype=float)
        total.add(math.fsum(p.log_factor(j) - p.log_factor(j + x)))
    return total


def _check(x: float, n: int) -> None:
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"x must be a positive finite number, got {x!r}.")
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n!r}.")


def _assemble(p: GeoProblem, x: float, n: int, products: float) -> float:
    log_value = (
        math.log(p.c)
        + _exponent(x, n) * float(p.log_factor(np.array([float(n)]))[0])
        - float(p.log_factor(np.array([x]))[0])
        + products
    )
    if not _LOG_TINY < log_value < _LOG_MAX:
        raise RangeOverflowError(f"Approximant at x={x!r}, n={n} has log value {log_value:.6g}, outside the double range.")
    return math.exp(log_value)


def gm_eval(p: GeoProblem, x: float, n: int) -> SolverResult:
    """The n-th approximant at x."""
    _check(x, n)
    value = _assemble(p, x, n, _product_sum(p, x, 1, n).value)
    last = abs(float((p.log_factor(np.array([float(n)])) - p.log_factor(np.array([n + x])))[0]))
    return SolverResult(value, n, last, True)


def iter_approximants(p: GeoProblem, x: float, schedule: Sequence[int]) -> Iterator[tuple[int, float]]:
    """Yield (n, approximant) along an increasing schedule, extending one running sum."""
    if not schedule:
        raise DomainError("n_schedule must not be empty.")
    if any(b <= a for a, b in zip(schedule, schedule[1:])) or schedule[0] < 1:
        raise DomainError(f"n_schedule must be increasing positive integers, got {list(schedule)!r}.")
    _check(x, schedule[0])
    running = CompensatedSum()
    done = 0
    for n in schedule:
        running.add(_product_sum(p, x, done + 1, n).value)
        done = n
        yield n, _assemble(p, x, n, running.value)


def gm_converge(
    p: GeoProblem,
    x: float,
    rel_tol: float = DEFAULT_GM_REL_TOL,
    n_schedule: Sequence[int] = DEFAULT_GM_SCHEDULE,
) -> SolverResult:
    """Walk the schedule until successive approximants agree to rel_tol.

    The first entry is compared with a warm-up approximant at a tenth of its size.
    last_term carries the final relative difference.
    """
    if not rel_tol > 0:
        raise DomainError(f"rel_tol must be positive, got {rel_tol!r}.")
    schedule = list(n_schedule)
    warmup = max(1, schedule[0] // 10) if schedule else 1
    points = [warmup, *schedule] if schedule and warmup < schedule[0] else schedule

    previous: float | None = None
    diff = math.inf
    n, value = 0, math.nan
    for n, value in iter_approximants(p, x, points):
        if previous is not None:
            diff = abs(value - previous) / abs(value)
            logger.debug("gm_converge x=%g n=%d value %.17g rel diff %.3e", x, n, value, diff)
            if diff < rel_tol:
                return SolverResult(value, n, diff, True)
        previous = value
    logger.warning("gm_converge x=%g: schedule exhausted at n=%d (rel diff %.3e)", x, n, diff)
    return SolverResult(value, n, diff, False)
