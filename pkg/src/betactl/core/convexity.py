"""Numerical checks for directional, geometric and logarithmic convexity.

Second derivatives come from centered differences. Classification uses a tolerance
band: above tol is convex, below -tol concave, anything in between indeterminate.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from betactl.config import DEFAULT_CLASSIFY_TOL, DEFAULT_STEP_SCALE, DEFAULT_TRANSFORM_SAMPLES
from betactl.core.oracle import log_beta_eval, log_gamma_eval
from betactl.errors import BetactlError, ConfigError, DomainError, NumericalConsistencyError

logger = logging.getLogger(__name__)

Point = tuple[float, float]
Surface2 = Callable[[float, float], float]
Domain2 = Callable[[float, float], bool]

CLASSIFICATIONS = ("convex", "concave", "indeterminate")


@dataclass(frozen=True)
class Direction2:
    u: float
    v: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise DomainError(f"Direction components must be finite, got ({self.u!r}, {self.v!r}).")
        if self.u * self.u + self.v * self.v == 0:
            raise DomainError("Direction must be nonzero (u**2 + v**2 != 0).")

    def scaled(self, r: float) -> Direction2:
        return Direction2(r * self.u, r * self.v)


@dataclass(frozen=True)
class DirectionalReport:
    point: Point
    direction: Direction2
    second_deriv: float
    step: float
    classification: str


@dataclass(frozen=True)
class DirectionalScan:
    reports: tuple[DirectionalReport, ...]
    failures: tuple[tuple[Point, str], ...] = ()

    @property
    def counts(self) -> dict[str, int]:
        tally = Counter(r.classification for r in self.reports)
        counts = {name: tally.get(name, 0) for name in CLASSIFICATIONS}
        counts["failed"] = len(self.failures)
        return counts


@dataclass(frozen=True)
class ConvexityCheck:
    """holds, the worst margin seen, and every sampled margin."""

    holds: bool
    worst: float
    samples: tuple[float, ...]


@dataclass(frozen=True)
class AffineFit:
    a: float
    p: float
    residual: float
    holds: bool


@dataclass(frozen=True)
class HypothesisResult:
    passed: bool
    worst: float
    failures: tuple[str, ...] = ()


@dataclass(frozen=True)
class CorollaryReport:
    hypotheses: dict[str, HypothesisResult] = field(default_factory=dict)

    @property
    def passed(self) -> int:
        return sum(1 for h in self.hypotheses.values() if h.passed)

    @property
    def total(self) -> int:
        return len(self.hypotheses)

    @property
    def all_passed(self) -> bool:
        return self.passed == self.total


@dataclass(frozen=True)
class Surface:
    """A labelled bivariate function with its domain predicate."""

    label: str
    f: Surface2
    domain: Domain2


def classify(value: float, tol: float = DEFAULT_CLASSIFY_TOL) -> str:
    if value > tol:
        return "convex"
    if value < -tol:
        return "concave"
    return "indeterminate"


def default_step(p: Point) -> float:
    return DEFAULT_STEP_SCALE * max(1.0, math.hypot(*p))


def _in_domain(domain: Domain2 | None, x: float, y: float) -> None:
    if domain is not None and not domain(x, y):
        raise DomainError(f"Stencil point ({x:.6g}, {y:.6g}) leaves the domain.")


def _value(f: Surface2, domain: Domain2 | None, x: float, y: float) -> float:
    _in_domain(domain, x, y)
    return float(f(x, y))


def directional_second_derivative(
    f: Surface2,
    p: Point,
    h: Direction2,
    step: float | None = None,
    domain: Domain2 | None = None,
) -> float:
    """[f(p + s h) - 2 f(p) + f(p - s h)] / s**2."""
    s = default_step(p) if step is None else step
    if not s > 0:
        raise DomainError(f"step must be positive, got {s!r}.")
    x, y = p
    plus = _value(f, domain, x + s * h.u, y + s * h.v)
    mid = _value(f, domain, x, y)
    minus = _value(f, domain, x - s * h.u, y - s * h.v)
    return (plus - 2.0 * mid + minus) / (s * s)


def hessian_form(
    f: Surface2,
    p: Point,
    h: Direction2,
    step: float | None = None,
    domain: Domain2 | None = None,
) -> float:
    """f_xx u**2 + 2 f_xy u v + f_yy v**2 from axis differences.

    Raises NumericalConsistencyError when it disagrees with the slice derivative by more
    than max(1e-6, 1e-4 |value|).
    """
    s = default_step(p) if step is None else step
    if not s > 0:
        raise DomainError(f"step must be positive, got {s!r}.")
    x, y = p
    c = _value(f, domain, x, y)
    fxx = (_value(f, domain, x + s, y) - 2 * c + _value(f, domain, x - s, y)) / (s * s)
    fyy = (_value(f, domain, x, y + s) - 2 * c + _value(f, domain, x, y - s)) / (s * s)
    fxy = (
        _value(f, domain, x + s, y + s)
        - _value(f, domain, x + s, y - s)
        - _value(f, domain, x - s, y + s)
        + _value(f, domain, x - s, y - s)
    ) / (4 * s * s)
    form = fxx * h.u**2 + 2 * fxy * h.u * h.v + fyy * h.v**2

    # the slice stencil spans s * |h|; rescale so both stencils cover the same distance
    norm = math.hypot(h.u, h.v)
    unit = Direction2(h.u / norm, h.v / norm)
    slice_value = directional_second_derivative(f, p, unit, s, domain) * norm * norm
    if abs(form - slice_value) > max(1e-6, 1e-4 * abs(form)):
        raise NumericalConsistencyError(
            f"Hessian form {form:.10g} and slice derivative {slice_value:.10g} disagree at {p}."
        )
    return form


def directional_scan(
    f: Surface2,
    grid: Sequence[Point],
    h: Direction2,
    step: float | None = None,
    tol: float = DEFAULT_CLASSIFY_TOL,
    domain: Domain2 | None = None,
) -> DirectionalScan:
    """One report per grid point; points whose evaluation fails are collected, not raised."""
    reports = []
    failures = []
    for p in grid:
        s = default_step(p) if step is None else step
        try:
            value = directional_second_derivative(f, p, h, s, domain)
        except (BetactlError, ArithmeticError) as exc:
            failures.append((p, str(exc)))
            continue
        reports.append(DirectionalReport(p, h, value, s, classify(value, tol)))
    scan = DirectionalScan(tuple(reports), tuple(failures))
    logger.info("directional_scan along (%g, %g): %s", h.u, h.v, scan.counts)
    return scan


def scale_invariance_check(
    f: Surface2,
    p: Point,
    h: Direction2,
    r: float,
    step: float | None = None,
    tol: float = DEFAULT_CLASSIFY_TOL,
    domain: Domain2 | None = None,
) -> bool:
    """Classification along h equals classification along r h.

    r h is differenced with step / |r| so both stencils hit the same points; its second
    derivative is then r**2 times the one along h, and is classified against tol r**2.
    """
    if r == 0 or not math.isfinite(r):
        raise DomainError(f"r must be a finite nonzero number, got {r!r}.")
    s = default_step(p) if step is None else step
    base = classify(directional_second_derivative(f, p, h, s, domain), tol)
    scaled = classify(directional_second_derivative(f, p, h.scaled(r), s / abs(r), domain), tol * r * r)
    return base == scaled


def _positive_interval(interval: tuple[float, float]) -> tuple[float, float]:
    lo, hi = interval
    if not (0 < lo < hi and math.isfinite(hi)):
        raise DomainError(f"Interval must satisfy 0 < lo < hi, got {interval!r}.")
    return lo, hi


def jensen_geometric_check(
    phi: Callable[[float], float],
    pairs: Sequence[Point],
    tol: float = 1e-12,
    interval: tuple[float, float] | None = None,
) -> ConvexityCheck:
    """phi(sqrt(xy)) <= sqrt(phi(x) phi(y)) at every pair.

    A pair passes when its margin phi(sqrt(xy)) - sqrt(phi(x) phi(y)) is at most
    tol * max(1, sqrt(phi(x) phi(y))).
    """
    if not pairs:
        raise DomainError("jensen_geometric_check needs at least one pair.")
    margins = []
    holds = True
    for x, y in pairs:
        if not (x > 0 and y > 0):
            raise DomainError(f"Pair ({x!r}, {y!r}) must be positive.")
        if interval is not None and not (interval[0] <= min(x, y) and max(x, y) <= interval[1]):
            raise DomainError(f"Pair ({x!r}, {y!r}) leaves the interval {interval!r}.")
        rhs = math.sqrt(float(phi(x)) * float(phi(y)))
        margin = float(phi(math.sqrt(x * y))) - rhs
        margins.append(margin)
        if margin > tol * max(1.0, rhs):
            holds = False
    return ConvexityCheck(holds, max(margins), tuple(margins))


def _transform_grid(interval: tuple[float, float], samples: int) -> np.ndarray:
    lo, hi = _positive_interval(interval)
    return np.linspace(math.log(lo), math.log(hi), samples)


def geometric_convexity_via_transform(
    phi: Callable[[float], float],
    interval: tuple[float, float],
    step: float | None = None,
    tol: float = DEFAULT_CLASSIFY_TOL,
    samples: int = DEFAULT_TRANSFORM_SAMPLES,
    log_phi: Callable[[float], float] | None = None,
) -> ConvexityCheck:
    """Convexity of u -> log phi(e^u) on log(interval), by centered differences.

    The stencil stays inside the interval; the worst margin is the smallest second
    difference found.
    """
    lo, hi = _positive_interval(interval)
    log_of = log_phi if log_phi is not None else (lambda t: math.log(float(phi(t))))
    us = _transform_grid(interval, samples)
    seconds = []
    for u in us:
        s = DEFAULT_STEP_SCALE * max(1.0, abs(u)) if step is None else step
        u = min(max(u, math.log(lo) + s), math.log(hi) - s)
        seconds.append((log_of(math.exp(u + s)) - 2 * log_of(math.exp(u)) + log_of(math.exp(u - s))) / (s * s))
    worst = min(seconds)
    return ConvexityCheck(worst >= -tol, worst, tuple(seconds))


def is_geometrically_affine(
    phi: Callable[[float], float],
    interval: tuple[float, float],
    samples: int = DEFAULT_TRANSFORM_SAMPLES,
    tol: float = 1e-10,
) -> AffineFit:
    """Fit log phi(e^u) = log a + p u; phi = a x**p exactly when the residual vanishes."""
    us = _transform_grid(interval, samples)
    values = np.array([math.log(float(phi(math.exp(u)))) for u in us])
    design = np.column_stack([np.ones_like(us), us])
    (log_a, p), *_ = np.linalg.lstsq(design, values, rcond=None)
    residual = float(np.sqrt(np.mean((values - log_a - p * us) ** 2)))
    return AffineFit(math.exp(log_a), float(p), residual, residual < tol * max(1.0, float(np.max(np.abs(values)))))


def _ray_factor(x: float, y: float) -> float:
    return x * (x + y) / ((2 * x + y + 1) * (2 * x + y))


def corollary_certificate(
    B: Surface2,
    grid: Sequence[Point],
    tol: float = 1e-9,
    classify_tol: float = DEFAULT_CLASSIFY_TOL,
) -> CorollaryReport:
    """Check the three characterizing hypotheses of the Beta function on a grid.

    symmetry:        B(x, y) = B(y, x)
    log-convexity:   log B is convex along (1, 1)
    functional-eq:   B(x+1, x+y+1) = x(x+y)/((2x+y+1)(2x+y)) B(x, x+y) and B(1, 1+y) = 1/(1+y)

    Relative comparisons use tol; evaluation errors count as failures of the hypothesis
    being checked.
    """
    if not grid:
        raise DomainError("corollary_certificate needs a nonempty grid.")

    def run(name: str, check: Callable[[float, float], float], bound: float) -> HypothesisResult:
        worst = 0.0
        failures = []
        for x, y in grid:
            try:
                margin = check(x, y)
            except (BetactlError, ArithmeticError) as exc:
                failures.append(f"({x:g}, {y:g}): {exc}")
                continue
            worst = max(worst, margin)
            if margin > bound:
                failures.append(f"({x:g}, {y:g}): {name} off by {margin:.3e}")
        logger.info("corollary %s: worst %.3e, %d failures", name, worst, len(failures))
        return HypothesisResult(not failures, worst, tuple(failures))

    def symmetry(x: float, y: float) -> float:
        a, b = float(B(x, y)), float(B(y, x))
        return abs(a - b) / max(abs(a), abs(b))

    def log_convexity(x: float, y: float) -> float:
        def log_b(s: float, t: float) -> float:
            value = float(B(s, t))
            if not value > 0:
                raise DomainError(f"B({s:g}, {t:g}) = {value!r} has no logarithm.")
            return math.log(value)

        second = directional_second_derivative(log_b, (x, y), Direction2(1.0, 1.0), domain=_positive_quadrant)
        return -second

    def functional_equation(x: float, y: float) -> float:
        upper = float(B(x + 1, x + y + 1))
        recurrence = abs(upper - _ray_factor(x, y) * float(B(x, x + y))) / abs(upper)
        boundary = abs(float(B(1.0, 1.0 + y)) * (1.0 + y) - 1.0)
        return max(recurrence, boundary)

    return CorollaryReport(
        {
            "symmetry": run("symmetry", symmetry, tol),
            "diagonal-log-convexity": run("diagonal-log-convexity", log_convexity, classify_tol),
            "functional-equation": run("functional-equation", functional_equation, tol),
        }
    )


# ---------------------------------------------------------------------------
# Built-in surfaces
# ---------------------------------------------------------------------------


def _everywhere(x: float, y: float) -> bool:
    return True


def _positive_quadrant(x: float, y: float) -> bool:
    return x > 0 and y > 0


def quadratic_surface(coeffs: Sequence[float], label: str = "quadratic") -> Surface:
    """a x**2 + b x y + c y**2 + d x + e y + f."""
    if len(coeffs) != 6:
        raise ConfigError(f"A quadratic needs six coefficients a,b,c,d,e,f, got {len(coeffs)}.")
    a, b, c, d, e, f0 = (float(v) for v in coeffs)

    def f(x: float, y: float) -> float:
        return a * x * x + b * x * y + c * y * y + d * x + e * y + f0

    return Surface(label, f, _everywhere)


EXAMPLE_QUADRATIC = (1.0, 2.5, 1.0, 0.0, 0.0, 0.0)

SURFACES = ("example-quadratic", "quadratic", "log-beta", "log-gamma")


def builtin_surface(label: str, coeffs: Sequence[float] | None = None) -> Surface:
    """Look up a scan surface by label; 'quadratic' needs coeffs."""
    if label == "example-quadratic":
        return quadratic_surface(EXAMPLE_QUADRATIC, label)
    if label == "quadratic":
        if coeffs is None:
            raise ConfigError("Surface 'quadratic' needs --coeffs a,b,c,d,e,f (or scan.quadratic in the config file).")
        return quadratic_surface(coeffs, label)
    if label == "log-beta":
        return Surface(label, lambda x, y: log_beta_eval(x, y).log_value, _positive_quadrant)
    if label == "log-gamma":
        return Surface(label, lambda x, y: log_gamma_eval(x).log_value + log_gamma_eval(y).log_value, _positive_quadrant)
    raise ConfigError(f"Unknown surface '{label}'. Use one of: {', '.join(SURFACES)}.")


def sample_directions(count: int = 8) -> list[Direction2]:
    """Unit directions spread over a half circle (h and -h classify alike)."""
    return [Direction2(math.cos(math.pi * i / count), math.sin(math.pi * i / count)) for i in range(count)]
