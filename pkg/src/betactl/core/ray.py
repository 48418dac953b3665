"""The diagonal ray x -> B(x, x+k) and its two reconstructions.

Along the ray, phi(x) = B(x, x+k) satisfies phi(x+1) = G(x) phi(x) with

    G(x) = x (x+k) / ((2x+k+1) (2x+k)),    phi(1) = 1 / (k+1),

and F = log G is concave with F(x+1) - F(x) -> 0. That makes log phi the Krull solution
for F, and phi the geometrically convex solution for G.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import partial

import numpy as np

from betactl.config import DEFAULT_GM_REL_TOL, DEFAULT_GM_SCHEDULE, DEFAULT_KRULL_TOL, DEFAULT_MAX_TERMS
from betactl.core.geo import GeoProblem, gm_converge
from betactl.core.krull import KrullProblem, krull_eval_shifted
from betactl.core.oracle import DEFAULT_QUADRATURE, QuadratureConfig, beta_eval, scaled_beta_moments
from betactl.errors import ConvergenceError, DomainError, NumericalConsistencyError, RangeOverflowError

logger = logging.getLogger(__name__)

METHODS = ("krull", "gronau-matkowski", "oracle")
_LOG_TINY = math.log(np.finfo(float).tiny)

# relative agreement required between the four-term and polynomial forms of F''
F2_AGREEMENT = 1e-10


@dataclass(frozen=True)
class RaySpec:
    k: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.k) and self.k >= 0):
            raise DomainError(f"k must be a finite nonnegative number, got {self.k!r}.")


@dataclass(frozen=True)
class RaySample:
    x: float
    value: float
    est_error: float


@dataclass(frozen=True)
class RayReconstruction:
    spec: RaySpec
    method: str
    samples: tuple[RaySample, ...]

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise DomainError(f"method must be one of {', '.join(METHODS)}, got {self.method!r}.")
        for sample in self.samples:
            if not sample.value > 0:
                raise ConvergenceError(f"Non-positive reconstructed value {sample.value!r} at x={sample.x!r}.")
        xs = [s.x for s in self.samples]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError("Reconstruction sample points must be strictly increasing.")


def _positive(x):
    if np.any(np.asarray(x) <= 0):
        raise DomainError(f"x must be positive, got {x!r}.")


def G_ray(spec: RaySpec, x):
    """x (x+k) / ((2x+k+1) (2x+k)); accepts scalars or arrays."""
    _positive(x)
    k = spec.k
    return x * (x + k) / ((2 * x + k + 1) * (2 * x + k))


def F_ray(spec: RaySpec, x):
    """log G_ray, as a sum of logs so no product overflows."""
    _positive(x)
    k = spec.k
    return np.log(x) + np.log(x + k) - np.log(2 * x + k + 1) - np.log(2 * x + k)


def F1_ray(spec: RaySpec, x):
    _positive(x)
    k = spec.k
    return 1 / x + 1 / (x + k) - 2 / (2 * x + k) - 2 / (2 * x + k + 1)


def P_poly(spec: RaySpec, x):
    """Numerator polynomial of -F''; every coefficient group is nonnegative for k >= 0."""
    _positive(x)
    k = spec.k
    return (
        16 * x**5
        + 4 * x**4 * (6 * k**2 + 10 * k + 1)
        + 8 * k * x**3 * (k + 1) * (6 * k + 1)
        + 2 * k**2 * x**2 * (k + 1) * (17 * k + 5)
        + 2 * k**3 * x * (k + 1) * (5 * k + 3)
        + k**4 * (k + 1) ** 2
    )


def F2_denominator(spec: RaySpec, x):
    k = spec.k
    return (x * (x + k) * (2 * x + k) * (2 * x + k + 1)) ** 2


def F2_ray(spec: RaySpec, x):
    """F'' from the four-term sum, checked against -P(x) / denominator.

    The sum -1/x**2 - 1/(x+k)**2 + 4/(2x+k)**2 + 4/(2x+k+1)**2 is regrouped into two
    nonpositive parts, so it keeps full relative precision at large x where the raw terms
    cancel.
    """
    _positive(x)
    k = spec.k
    v = x + k
    a = 2 * x + k
    four_term = -(k**2) * (a**2 + 2 * x * v) / (a * x * v) ** 2 - 4 * (2 * a + 1) / (a * (a + 1)) ** 2
    poly_form = -P_poly(spec, x) / F2_denominator(spec, x)
    gap = np.abs(four_term - poly_form) / np.abs(poly_form)
    if np.any(gap > F2_AGREEMENT):
        worst = float(np.max(gap))
        raise NumericalConsistencyError(
            f"F'' four-term and polynomial forms disagree at k={k!r}: relative gap {worst:.3e}."
        )
    return four_term


def initial_condition(spec: RaySpec) -> float:
    """phi(1) = B(1, 1+k) = 1 / (k+1)."""
    return 1.0 / (spec.k + 1.0)


def krull_problem(spec: RaySpec) -> KrullProblem:
    return KrullProblem(
        F=partial(F_ray, spec),
        a=0.0,
        x0=1.0,
        y0=-math.log1p(spec.k),
        shape="concave",
    )


def geo_problem(spec: RaySpec) -> GeoProblem:
    return GeoProblem(G=partial(G_ray, spec), c=initial_condition(spec), log_G=partial(F_ray, spec))


def _check_xs(xs: Sequence[float]) -> list[float]:
    points = [float(x) for x in xs]
    if not points:
        raise DomainError("At least one sample point is required.")
    _positive(np.asarray(points))
    return points


def ray_via_krull(
    spec: RaySpec,
    xs: Sequence[float],
    tol: float = DEFAULT_KRULL_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> RayReconstruction:
    """log phi from the Krull series for F_ray anchored at (1, -log(1+k))."""
    problem = krull_problem(spec)
    samples = []
    for x in _check_xs(xs):
        result = krull_eval_shifted(problem, x, tol, max_terms)
        if not result.converged:
            raise ConvergenceError(
                f"Krull series for k={spec.k!r} at x={x!r} did not converge in {max_terms} terms "
                f"(last term {result.last_term:.3e})."
            )
        if result.value < _LOG_TINY:
            raise RangeOverflowError(
                f"B({x!r}, {x + spec.k!r}) = exp({result.value:.6g}) underflows the double range; "
                "use the log-space value from krull_eval_shifted."
            )
        value = math.exp(result.value)
        samples.append(RaySample(x, value, value * abs(math.expm1(abs(result.tail_estimate) + result.last_term))))
    return RayReconstruction(spec, "krull", tuple(samples))


def ray_via_gm(
    spec: RaySpec,
    xs: Sequence[float],
    rel_tol: float = DEFAULT_GM_REL_TOL,
    n_schedule: Sequence[int] = DEFAULT_GM_SCHEDULE,
) -> RayReconstruction:
    """phi from the limit product for G_ray with phi(1) = 1/(k+1).

    A schedule that runs out before rel_tol is met is logged; the last approximant is kept
    and its final relative step becomes the error estimate.
    """
    problem = geo_problem(spec)
    samples = []
    for x in _check_xs(xs):
        result = gm_converge(problem, x, rel_tol, n_schedule)
        samples.append(RaySample(x, result.value, result.value * result.last_term))
    return RayReconstruction(spec, "gronau-matkowski", tuple(samples))


def ray_oracle(
    spec: RaySpec,
    xs: Sequence[float],
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    swapped: bool = False,
) -> RayReconstruction:
    """B(x, x+k) from quadrature, or B(x+k, x) when swapped."""
    samples = []
    for x in _check_xs(xs):
        ov = beta_eval(x + spec.k, x, cfg) if swapped else beta_eval(x, x + spec.k, cfg)
        samples.append(RaySample(x, ov.value, ov.est_error))
    return RayReconstruction(spec, "oracle", tuple(samples))


def ray_recurrence_residual(spec: RaySpec, x: float, phi: Callable[[float], float]) -> float:
    """|phi(x+1) - G(x) phi(x)| / phi(x+1)."""
    _positive(x)
    upper = float(phi(x + 1.0))
    return abs(upper - float(G_ray(spec, x)) * float(phi(x))) / abs(upper)


def ray_log_second_derivative(spec: RaySpec, x: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """(log B(x, x+k))'' as (I2 I0 - I1**2) / I0**2, with Im the log(t(1-t)) moments.

    Nonnegative by Cauchy-Schwarz. The moments share their peak scale, so the ratio is
    formed from the scaled integrals and stays finite where B itself underflows.
    """
    _positive(x)
    y = x + spec.k
    _, (m0, m1, m2) = scaled_beta_moments(x, y, cfg)
    i0, i1, i2 = m0.value, m1.value, m2.value
    return (i2 * i0 - i1 * i1) / (i0 * i0)
