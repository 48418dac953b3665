"""Reference evaluators for Gamma and Beta straight from their integrals.

Nothing here uses a functional equation, so every solver in the package can be checked
against these values. All integrals are computed with the peak of the integrand factored
out (value = exp(M) * I), which keeps large arguments from overflowing and lets the
log-space variants reach any argument size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from betactl.config import DEFAULT_ABS_TOL, DEFAULT_MAX_SUBDIVISIONS, DEFAULT_REL_TOL
from betactl.errors import ConvergenceError, DomainError, RangeOverflowError
from betactl.util.quadrature import integrate

_EPS = np.finfo(float).eps
_TAIL_START = 8.0


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = DEFAULT_ABS_TOL
    rel_tol: float = DEFAULT_REL_TOL
    max_subdivisions: int = DEFAULT_MAX_SUBDIVISIONS

    def __post_init__(self) -> None:
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol!r}.")
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol!r}.")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 1:
            raise DomainError(f"max_subdivisions must be a positive integer, got {self.max_subdivisions!r}.")

    def target(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_QUADRATURE = QuadratureConfig()


@dataclass(frozen=True)
class OracleValue:
    value: float
    est_error: float

    def __post_init__(self) -> None:
        if not self.value > 0:
            raise RangeOverflowError(f"Oracle value {self.value!r} is not a positive double.")
        if not self.est_error >= 0:
            raise ConvergenceError(f"Negative error estimate {self.est_error!r}.")
        if not self.est_error < self.value:
            raise ConvergenceError(f"Estimated error {self.est_error:.3e} is not below the value {self.value:.3e}; evaluation rejected.")


@dataclass(frozen=True)
class LogOracleValue:
    """Natural log of an oracle value; est_error is absolute in the log (relative in the value)."""

    log_value: float
    est_error: float

    def exp(self) -> OracleValue:
        if self.log_value > math.log(np.finfo(float).max) or self.log_value < math.log(np.finfo(float).tiny):
            raise RangeOverflowError(f"exp({self.log_value:.6g}) leaves the double range; use the log-space value.")
        value = math.exp(self.log_value)
        return OracleValue(value, value * math.expm1(self.est_error) if self.est_error < 1 else value)


@dataclass(frozen=True)
class SignedValue:
    value: float
    est_error: float


def _check_positive(name: str, x: float) -> None:
    if not (math.isfinite(x) and x > 0):
        raise DomainError(f"{name} must be a positive finite number, got {x!r}.")


def _scaled_abs_tol(cfg: QuadratureConfig, peak: float) -> float:
    """abs_tol in units of exp(peak), never looser than abs_tol itself."""
    if peak <= 0:
        return cfg.abs_tol
    return cfg.abs_tol * math.exp(-peak) if peak < 700 else 0.0


def _check_tolerance(what: str, value: float, error: float, cfg: QuadratureConfig, peak: float) -> None:
    target = max(_scaled_abs_tol(cfg, peak), cfg.rel_tol * abs(value))
    if error > target * (1 + 1e-9):
        raise ConvergenceError(
            f"{what}: estimated error {error:.3e} exceeds tolerance {target:.3e} (max_subdivisions={cfg.max_subdivisions})."
        )


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _gamma_scaled(x: float, cfg: QuadratureConfig) -> tuple[float, float, float]:
    """Return (M, I, err) with Gamma(x) = exp(M) * I.

    The domain is split at t = 1 and t = max(x, 1). On (0, 1) with x < 1 the endpoint
    singularity is removed by t = u**(1/x), which turns t**(x-1) dt into du/x. The tail
    beyond max(x, 1) is cut at T where exp(-T) T**(x-1) / (1 - (x-1)/T) is below a tenth
    of the target; that bound is added to the error estimate.
    """
    a = x - 1.0
    peak = a * (math.log(a) - 1.0) if x > 2.0 else 0.0
    split = max(x, 1.0)
    # pieces are positive, so per-piece relative targets add up to the global one
    piece_rel = 0.9 * cfg.rel_tol
    piece_abs = _scaled_abs_tol(cfg, peak) / 3.0

    def log_integrand(t: np.ndarray) -> np.ndarray:
        return -t + a * np.log(t) - peak

    def head(t: np.ndarray) -> np.ndarray:
        return np.exp(log_integrand(t))

    pieces = []
    if x < 1.0:
        inv = 1.0 / x
        pieces.append(integrate(lambda u: inv * np.exp(-np.power(u, inv)), 0.0, 1.0, abs_tol=piece_abs, rel_tol=piece_rel, max_subdivisions=cfg.max_subdivisions))
    else:
        pieces.append(integrate(head, 0.0, 1.0, abs_tol=piece_abs, rel_tol=piece_rel, max_subdivisions=cfg.max_subdivisions))
    pieces.append(integrate(head, 1.0, split, abs_tol=piece_abs, rel_tol=piece_rel, max_subdivisions=cfg.max_subdivisions))

    head_value = math.fsum(p.value for p in pieces)
    target = max(_scaled_abs_tol(cfg, peak), cfg.rel_tol * head_value) / 10.0
    log_target = math.log(target) if target > 0 else -745.0

    width = _TAIL_START
    while True:
        cut = split + width
        log_bound = -cut + a * math.log(cut) - peak
        if a > 0:
            log_bound -= math.log1p(-a / cut)
        if log_bound < log_target:
            break
        width *= 2.0
    pieces.append(integrate(head, split, cut, abs_tol=piece_abs, rel_tol=piece_rel, max_subdivisions=cfg.max_subdivisions))

    value = math.fsum(p.value for p in pieces)
    error = math.fsum(p.error for p in pieces) + math.exp(log_bound)
    return peak, value, error


def log_gamma_eval(x: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> LogOracleValue:
    """log Gamma(x) from the Euler integral, valid for any positive x."""
    _check_positive("x", x)
    peak, value, error = _gamma_scaled(float(x), cfg)
    if not value > 0:
        raise ConvergenceError(f"Gamma integral at x={x!r} evaluated to {value!r}.")
    _check_tolerance(f"gamma_eval({x!r})", value, error, cfg, peak)
    log_value = peak + math.log(value)
    return LogOracleValue(log_value, error / value + 2 * _EPS * abs(log_value))


def gamma_eval(x: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> OracleValue:
    """Gamma(x) = integral of exp(-t) t**(x-1) over (0, inf)."""
    _check_positive("x", x)
    peak, value, error = _gamma_scaled(float(x), cfg)
    _check_tolerance(f"gamma_eval({x!r})", value, error, cfg, peak)
    if peak > 0:
        return log_gamma_eval(x, cfg).exp()
    return OracleValue(value, error)


def gamma_recurrence_residual(x: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """|Gamma(x+1) - x Gamma(x)| / Gamma(x+1); an oracle self-test."""
    _check_positive("x", x)
    g1 = gamma_eval(x + 1.0, cfg).value
    g0 = gamma_eval(x, cfg).value
    return abs(g1 - x * g0) / g1


# ---------------------------------------------------------------------------
# Beta
# ---------------------------------------------------------------------------


def _beta_peak(x: float, y: float) -> float:
    if x > 1.0 and y > 1.0:
        t = (x - 1.0) / (x + y - 2.0)
        return (x - 1.0) * math.log(t) + (y - 1.0) * math.log1p(-t)
    return 0.0


def _half_integrand(p: float, q: float, m: int, peak: float):
    """Integrand over the half (0, 1/2] of t**(p-1) (1-t)**(q-1) [log(t(1-t))]**m.

    Returns (f, upper) where f is integrated over (0, upper). For p < 1 the substitution
    t = u**(1/p) is applied, so upper = 2**-p and the weight becomes (1-t)**(q-1) / p.
    """
    if p < 1.0:
        inv = 1.0 / p

        def f(u: np.ndarray) -> np.ndarray:
            t = np.power(u, inv)
            out = inv * np.exp((q - 1.0) * np.log1p(-t) - peak)
            if m:
                out = out * (inv * np.log(u) + np.log1p(-t)) ** m
            return out

        return f, 0.5**p

    def g(t: np.ndarray) -> np.ndarray:
        out = np.exp((p - 1.0) * np.log(t) + (q - 1.0) * np.log1p(-t) - peak)
        if m:
            out = out * (np.log(t) + np.log1p(-t)) ** m
        return out

    return g, 0.5


@lru_cache(maxsize=4096)
def _beta_scaled(x: float, y: float, m: int, cfg: QuadratureConfig) -> tuple[float, float, float]:
    """Return (M, I, err) with the m-th log moment equal to exp(M) * I.

    Split at t = 1/2; each half gets a power substitution when its endpoint exponent is
    below 1. The right half is mirrored (s = 1 - t), which swaps the roles of x and y.
    """
    peak = _beta_peak(x, y)
    piece_abs = _scaled_abs_tol(cfg, peak) / 2.0
    pieces = []
    for p, q in ((x, y), (y, x)):
        f, upper = _half_integrand(p, q, m, peak)
        pieces.append(integrate(f, 0.0, upper, abs_tol=piece_abs, rel_tol=0.5 * cfg.rel_tol, max_subdivisions=cfg.max_subdivisions))
    return peak, math.fsum(p.value for p in pieces), math.fsum(p.error for p in pieces)


def log_beta_eval(x: float, y: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> LogOracleValue:
    """log B(x, y) from the Beta integral."""
    _check_positive("x", x)
    _check_positive("y", y)
    peak, value, error = _beta_scaled(float(x), float(y), 0, cfg)
    if not value > 0:
        raise ConvergenceError(f"Beta integral at ({x!r}, {y!r}) evaluated to {value!r}.")
    _check_tolerance(f"beta_eval({x!r}, {y!r})", value, error, cfg, peak)
    log_value = peak + math.log(value)
    return LogOracleValue(log_value, error / value + 2 * _EPS * abs(log_value))


def beta_eval(x: float, y: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> OracleValue:
    """B(x, y) = integral of t**(x-1) (1-t)**(y-1) over (0, 1)."""
    _check_positive("x", x)
    _check_positive("y", y)
    peak, value, error = _beta_scaled(float(x), float(y), 0, cfg)
    _check_tolerance(f"beta_eval({x!r}, {y!r})", value, error, cfg, peak)
    if peak < 0:
        return log_beta_eval(x, y, cfg).exp()
    return OracleValue(value, error)


def scaled_beta_moments(x: float, y: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> tuple[float, tuple[SignedValue, ...]]:
    """(M, (I0, I1, I2)) with the m-th log moment equal to exp(M) * Im.

    All three share the same M, so ratios of moments never leave the double range.
    """
    _check_positive("x", x)
    _check_positive("y", y)
    moments = []
    peak = 0.0
    for m in (0, 1, 2):
        peak, value, error = _beta_scaled(float(x), float(y), m, cfg)
        _check_tolerance(f"beta_moment_eval({x!r}, {y!r}, {m})", value, error, cfg, peak)
        moments.append(SignedValue(value, error))
    return peak, tuple(moments)


def beta_moment_eval(x: float, y: float, m: int, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> SignedValue:
    """Integral of t**(x-1) (1-t)**(y-1) [log(t(1-t))]**m over (0, 1), m in {0, 1, 2}.

    These are the moments behind the Cauchy-Schwarz form of the second derivative of
    x -> log B(x, x+k).
    """
    _check_positive("x", x)
    _check_positive("y", y)
    if m not in (0, 1, 2):
        raise DomainError(f"moment order must be 0, 1 or 2, got {m!r}.")
    peak, value, error = _beta_scaled(float(x), float(y), m, cfg)
    _check_tolerance(f"beta_moment_eval({x!r}, {y!r}, {m})", value, error, cfg, peak)
    if peak < math.log(np.finfo(float).tiny):
        raise RangeOverflowError(
            f"Moment {m} at ({x!r}, {y!r}) underflows the double range (scale exp({peak:.6g})); use scaled_beta_moments."
        )
    scale = math.exp(peak)
    return SignedValue(scale * value, scale * error)


def beta_via_gamma(x: float, y: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> OracleValue:
    """B(x, y) = Gamma(x) Gamma(y) / Gamma(x+y), combined in log space."""
    _check_positive("x", x)
    _check_positive("y", y)
    lx = log_gamma_eval(x, cfg)
    ly = log_gamma_eval(y, cfg)
    lxy = log_gamma_eval(x + y, cfg)
    log_value = lx.log_value + ly.log_value - lxy.log_value
    # cancellation in the log sum costs a few ulps of the largest term
    rounding = 4 * _EPS * (abs(lx.log_value) + abs(ly.log_value) + abs(lxy.log_value))
    return LogOracleValue(log_value, lx.est_error + ly.est_error + lxy.est_error + rounding).exp()


def beta_recurrence_residual(x: float, y: float, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """|B(x+1, y+1) - xy / ((x+y+1)(x+y)) B(x, y)| / B(x+1, y+1)."""
    _check_positive("x", x)
    _check_positive("y", y)
    shifted = beta_eval(x + 1.0, y + 1.0, cfg).value
    base = beta_eval(x, y, cfg).value
    return abs(shifted - x * y / ((x + y + 1.0) * (x + y)) * base) / shifted
