"""Beta-type functions B_g(x, y) = g(x) g(y) / g(x+y) and their generators.

Two continuous generators give the same beta-type function exactly when their ratio is
an exponential e^{cx}. Equality is decided on finite grids with an explicit tolerance,
so a True answer is only as complete as the grid.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from betactl.config import DEFAULT_EQUALITY_TOL, DEFAULT_FIT_TOL
from betactl.core.oracle import gamma_eval, log_gamma_eval
from betactl.errors import ConfigError, DomainError, RangeOverflowError
from betactl.util.grids import split_label

logger = logging.getLogger(__name__)

_LOG_MAX = math.log(np.finfo(float).max)
_LOG_TINY = math.log(np.finfo(float).tiny)


@dataclass(frozen=True)
class Generator:
    """A positive function on (domain_low, inf).

    log_g, when given, lets beta_type_eval work past the double range of g.
    """

    domain_low: float
    g: Callable[[float], float]
    label: str
    log_g: Callable[[float], float] | None = None

    def __post_init__(self) -> None:
        if math.isnan(self.domain_low) or self.domain_low == math.inf:
            raise DomainError(f"domain_low must be a real number or -inf, got {self.domain_low!r}.")
        if not self.label:
            raise DomainError("Generator label must not be empty.")

    def check(self, x: float) -> None:
        if not (math.isfinite(x) and x > self.domain_low):
            raise DomainError(f"{self.label}: x={x!r} is outside ({self.domain_low!r}, inf).")

    def log_value(self, x: float) -> float:
        self.check(x)
        if self.log_g is not None:
            return float(self.log_g(x))
        value = float(self.g(x))
        if not value > 0:
            raise DomainError(f"{self.label}: generator value {value!r} at x={x!r} is not positive.")
        return math.log(value)


@dataclass(frozen=True)
class GeneratorPair:
    g1: Generator
    g2: Generator
    c_fit: float = 0.0
    residual: float = 0.0

    def __post_init__(self) -> None:
        if self.g1.domain_low != self.g2.domain_low:
            raise DomainError(
                f"Generators '{self.g1.label}' and '{self.g2.label}' have different domains "
                f"({self.g1.domain_low!r} vs {self.g2.domain_low!r})."
            )
        if not math.isfinite(self.c_fit):
            raise DomainError(f"c_fit must be finite, got {self.c_fit!r}.")
        if not self.residual >= 0:
            raise DomainError(f"residual must be nonnegative, got {self.residual!r}.")

    def log_ratio(self, x: float) -> float:
        """log(g2(x) / g1(x))."""
        return self.g2.log_value(x) - self.g1.log_value(x)


@dataclass(frozen=True)
class EqualityReport:
    equal: bool
    max_residual: float
    max_cocycle_residual: float
    worst_point: tuple[float, float] | None


@dataclass(frozen=True)
class ExponentialFit:
    c: float
    residual: float
    equal: bool


def beta_type_eval(g: Generator, x: float, y: float) -> float:
    """g(x) g(y) / g(x+y); switches to logs when the direct ratio is not representable."""
    for t in (x, y, x + y):
        g.check(t)
    try:
        gx, gy, gxy = float(g.g(x)), float(g.g(y)), float(g.g(x + y))
    except (OverflowError, RangeOverflowError):
        gx = gy = gxy = math.inf
    for t, value in ((x, gx), (y, gy), (x + y, gxy)):
        if not value > 0:
            raise DomainError(f"{g.label}: generator value {value!r} at x={t!r} is not positive.")
    if math.isfinite(gx * gy) and math.isfinite(gxy):
        direct = gx * gy / gxy
        if direct > 0 and math.isfinite(direct):
            return direct
    log_value = g.log_value(x) + g.log_value(y) - g.log_value(x + y)
    if not _LOG_TINY < log_value < _LOG_MAX:
        raise RangeOverflowError(f"B_{g.label}({x!r}, {y!r}) has log value {log_value:.6g}, outside the double range.")
    return math.exp(log_value)


def ratio_cocycle_residual(pair: GeneratorPair, x: float, y: float) -> float:
    """|r(x+y) - r(x) r(y)| / r(x+y) with r = g2 / g1."""
    defect = pair.log_ratio(x) + pair.log_ratio(y) - pair.log_ratio(x + y)
    return abs(math.expm1(defect))


def equality_test(
    pair: GeneratorPair,
    grid: Sequence[tuple[float, float]],
    tol: float = DEFAULT_EQUALITY_TOL,
) -> EqualityReport:
    """B_g1 == B_g2 on the grid to relative tol; the cocycle residual is reported alongside."""
    if not grid:
        raise DomainError("equality_test needs a nonempty grid.")
    worst, worst_cocycle, worst_point = 0.0, 0.0, None
    for x, y in grid:
        b1 = beta_type_eval(pair.g1, x, y)
        b2 = beta_type_eval(pair.g2, x, y)
        residual = abs(b1 - b2) / b1
        if residual >= worst:
            worst, worst_point = residual, (x, y)
        worst_cocycle = max(worst_cocycle, ratio_cocycle_residual(pair, x, y))
    logger.debug("equality_test %s/%s: max residual %.3e, cocycle %.3e", pair.g1.label, pair.g2.label, worst, worst_cocycle)
    return EqualityReport(worst < tol, worst, worst_cocycle, worst_point)


def fit_exponential(pair: GeneratorPair, xs: Sequence[float], tol: float = DEFAULT_FIT_TOL) -> ExponentialFit:
    """Least-squares c in log(g2/g1)(x) = c x (no intercept: exponentials are 1 at 0).

    residual is the root-mean-square deviation of the log ratio from c x.
    """
    points = np.asarray(sorted(set(float(x) for x in xs)), dtype=float)
    if len(points) < 2:
        raise DomainError("fit_exponential needs at least two distinct points.")
    log_r = np.array([pair.log_ratio(x) for x in points])
    solution, *_ = np.linalg.lstsq(points[:, None], log_r, rcond=None)
    c = float(solution[0])
    residual = float(np.sqrt(np.mean((log_r - c * points) ** 2)))
    return ExponentialFit(c, residual, residual < tol)


def is_gamma_generator(g: Generator, xs: Sequence[float], tol: float = DEFAULT_FIT_TOL) -> ExponentialFit:
    """B_g equals the Beta function iff g = e^{cx} Gamma for continuous g; reports c."""
    return fit_exponential(GeneratorPair(gamma_generator(), g), xs, tol)


def gamma_generator(scale: float = 1.0, c: float = 0.0, label: str = "gamma") -> Generator:
    """scale * e^{cx} * Gamma(x) from the quadrature oracle."""
    log_scale = math.log(scale)

    def g(x: float) -> float:
        return scale * math.exp(c * x) * gamma_eval(x).value

    def log_g(x: float) -> float:
        return log_scale + c * x + log_gamma_eval(x).log_value

    return Generator(0.0, g, label, log_g)


def builtin_generator(label: str) -> Generator:
    """gamma, identity, exp:<c>, expgamma:<c>, power:<p>, scaled-gamma:<s>."""
    name, param = split_label(label)

    def need() -> float:
        if param is None:
            raise ConfigError(f"Generator '{name}' needs a parameter, e.g. '{name}:2'.")
        return param

    if name == "gamma":
        return gamma_generator()
    if name == "identity":
        return Generator(0.0, lambda x: x, label, math.log)
    if name == "exp":
        c = need()
        return Generator(-math.inf, lambda x: math.exp(c * x), label, lambda x: c * x)
    if name == "expgamma":
        return gamma_generator(c=need(), label=label)
    if name == "power":
        p = need()
        return Generator(0.0, lambda x: x**p, label, lambda x: p * math.log(x))
    if name == "scaled-gamma":
        s = need()
        if not s > 0:
            raise ConfigError(f"scaled-gamma needs a positive scale, got {s!r}.")
        return gamma_generator(scale=s, label=label)
    raise ConfigError(
        f"Unknown generator '{label}'. Use gamma, identity, exp:<c>, expgamma:<c>, power:<p> or scaled-gamma:<s>."
    )
