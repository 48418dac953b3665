"""Adaptive Gauss-Legendre quadrature.

Each panel is integrated with a 10-point and a 21-point Gauss-Legendre rule; the
difference is the panel's error estimate and the 21-point value is kept. The panel
with the largest estimate is bisected until the total estimate meets
max(abs_tol, rel_tol * |integral|).

Integrands receive a numpy array of nodes and must return an array of the same shape.
"""

from __future__ import annotations

import heapq
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from betactl.errors import ConvergenceError

logger = logging.getLogger(__name__)

LOW_ORDER = 10
HIGH_ORDER = 21

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    subdivisions: int


@lru_cache(maxsize=8)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _panel(f: Integrand, a: float, b: float) -> tuple[float, float]:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    lo_nodes, lo_weights = gauss_legendre(LOW_ORDER)
    hi_nodes, hi_weights = gauss_legendre(HIGH_ORDER)
    lo = half * float(np.dot(lo_weights, f(mid + half * lo_nodes)))
    hi = half * float(np.dot(hi_weights, f(mid + half * hi_nodes)))
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ConvergenceError(f"Integrand is not finite on [{a!r}, {b!r}].")
    return hi, abs(hi - lo)


def integrate(
    f: Integrand,
    a: float,
    b: float,
    *,
    abs_tol: float,
    rel_tol: float,
    max_subdivisions: int,
) -> QuadratureResult:
    """Integrate f over [a, b] (a < b finite) to max(abs_tol, rel_tol * |I|)."""
    if b <= a:
        return QuadratureResult(0.0, 0.0, 0)

    value, error = _panel(f, a, b)
    # Max-heap on error: (-error, a, b, value)
    heap: list[tuple[float, float, float, float]] = [(-error, a, b, value)]
    settled: list[tuple[float, float]] = []
    total_value = value
    total_error = error
    panels = 1

    while total_error > max(abs_tol, rel_tol * abs(total_value)):
        if not heap:
            break
        if panels >= max_subdivisions:
            raise ConvergenceError(
                f"Quadrature on [{a!r}, {b!r}] used {panels} panels without reaching tolerance "
                f"(estimated error {total_error:.3e}, value {total_value:.17g})."
            )
        neg_err, left, right, panel_value = heapq.heappop(heap)
        mid = 0.5 * (left + right)
        if mid <= left or mid >= right:
            # Panel is at floating-point resolution; keep it as is.
            settled.append((panel_value, -neg_err))
            continue
        v1, e1 = _panel(f, left, mid)
        v2, e2 = _panel(f, mid, right)
        heapq.heappush(heap, (-e1, left, mid, v1))
        heapq.heappush(heap, (-e2, mid, right, v2))
        total_value += v1 + v2 - panel_value
        total_error += e1 + e2 + neg_err
        panels += 1

    values = [entry[3] for entry in heap] + [v for v, _ in settled]
    errors = [-entry[0] for entry in heap] + [e for _, e in settled]
    result = QuadratureResult(math.fsum(values), math.fsum(errors), panels)
    logger.debug("integrate [%g, %g]: %d panels, value %.17g, error %.3e", a, b, panels, result.value, result.error)
    return result
