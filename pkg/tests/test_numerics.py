"""Tests for the quadrature, summation and worker-pool helpers."""

import math

import numpy as np
import pytest

from betactl.errors import ConvergenceError
from betactl.util.parallel import ordered_map
from betactl.util.quadrature import gauss_legendre, integrate
from betactl.util.summation import CompensatedSum

TOLS = {"abs_tol": 1e-30, "rel_tol": 1e-12, "max_subdivisions": 4000}


class TestGaussLegendre:
    def test_weights_sum_to_interval_length(self):
        _, weights = gauss_legendre(10)
        assert weights.sum() == pytest.approx(2.0, rel=1e-14)

    def test_read_only(self):
        nodes, _ = gauss_legendre(21)
        with pytest.raises(ValueError):
            nodes[0] = 0.0


class TestIntegrate:
    def test_smooth(self):
        result = integrate(np.cos, 0.0, math.pi / 2, **TOLS)
        assert result.value == pytest.approx(1.0, rel=1e-13)
        assert result.subdivisions == 1

    def test_endpoint_singularity(self):
        result = integrate(lambda t: 1.0 / np.sqrt(t), 0.0, 1.0, abs_tol=1e-30, rel_tol=1e-8, max_subdivisions=4000)
        assert result.value == pytest.approx(2.0, rel=1e-7)
        assert result.subdivisions > 1

    def test_empty_interval(self):
        assert integrate(np.cos, 1.0, 1.0, **TOLS).value == 0.0

    def test_subdivision_cap(self):
        with pytest.raises(ConvergenceError, match="panels"):
            integrate(lambda t: 1.0 / np.sqrt(t), 0.0, 1.0, abs_tol=1e-30, rel_tol=1e-12, max_subdivisions=1)

    def test_nonfinite_integrand(self):
        with pytest.raises(ConvergenceError, match="not finite"):
            integrate(lambda t: np.full_like(t, np.nan), 0.0, 1.0, **TOLS)


class TestCompensatedSum:
    def test_cancellation(self):
        total = CompensatedSum()
        total.extend([1.0, 1e100, 1.0, -1e100])
        assert total.value == 2.0

    def test_start_and_float(self):
        total = CompensatedSum(1e16)
        total.add(1.0)
        total.add(-1e16)
        assert float(total) == 1.0


class TestOrderedMap:
    def test_keeps_order_with_workers(self):
        assert ordered_map(lambda v: v * v, range(20), workers=8) == [v * v for v in range(20)]

    def test_empty(self):
        assert ordered_map(lambda v: v, [], workers=4) == []
