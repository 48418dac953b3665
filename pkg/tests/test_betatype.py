"""Tests for beta-type functions and generator comparison."""

import math

import pytest

from betactl.core.betatype import (
    Generator,
    GeneratorPair,
    beta_type_eval,
    builtin_generator,
    equality_test,
    fit_exponential,
    gamma_generator,
    is_gamma_generator,
    ratio_cocycle_residual,
)
from betactl.errors import ConfigError, DomainError, RangeOverflowError
from betactl.util.grids import parse_grid2

GRID_10 = parse_grid2("0.5:5:0.5")


class TestGenerator:
    def test_empty_label(self):
        with pytest.raises(DomainError):
            Generator(0.0, lambda x: x, "")

    def test_nan_domain(self):
        with pytest.raises(DomainError):
            Generator(math.nan, lambda x: x, "bad")

    def test_check_outside_domain(self):
        with pytest.raises(DomainError):
            Generator(0.0, lambda x: x, "identity").check(0.0)

    def test_nonpositive_value(self):
        g = Generator(0.0, lambda x: -x, "negative")
        with pytest.raises(DomainError):
            g.log_value(1.0)


class TestBetaTypeEval:
    """B_g(x, y) = g(x) g(y) / g(x+y)."""

    def test_gamma_gives_beta(self):
        assert beta_type_eval(gamma_generator(), 1.0, 2.0) == pytest.approx(0.5, rel=1e-12)

    def test_identity(self):
        g = builtin_generator("identity")
        assert beta_type_eval(g, 2.0, 3.0) == pytest.approx(6.0 / 5.0)

    def test_symmetry(self):
        g = builtin_generator("power:2.5")
        assert beta_type_eval(g, 0.7, 3.1) == beta_type_eval(g, 3.1, 0.7)

    def test_log_fallback_past_overflow(self):
        g = builtin_generator("exp:400")
        # exp(400 x) overflows at x = 2 but the beta-type function is identically 1
        assert beta_type_eval(g, 1.0, 1.0) == pytest.approx(1.0, rel=1e-12)

    def test_log_fallback_for_large_gamma(self):
        expected = math.exp(math.lgamma(200.0) + math.lgamma(3.0) - math.lgamma(203.0))
        assert beta_type_eval(gamma_generator(), 200.0, 3.0) == pytest.approx(expected, rel=1e-10)

    def test_out_of_range(self):
        g = Generator(0.0, lambda x: math.exp(x * x), "gauss", lambda x: x * x)
        with pytest.raises(RangeOverflowError):
            beta_type_eval(g, 30.0, 30.0)

    def test_outside_domain(self):
        with pytest.raises(DomainError):
            beta_type_eval(gamma_generator(), -1.0, 2.0)


class TestEqualityTest:
    """Equal beta-type functions exactly when the generator ratio is exponential."""

    @pytest.mark.parametrize("c", [-2.0, 0.0, 3.0])
    def test_exponential_multiple_of_gamma(self, c):
        pair = GeneratorPair(gamma_generator(), builtin_generator(f"expgamma:{c}"))
        report = equality_test(pair, GRID_10, tol=1e-10)
        assert report.equal
        assert report.max_cocycle_residual < 1e-10

    def test_scaled_gamma_differs(self):
        pair = GeneratorPair(gamma_generator(), builtin_generator("scaled-gamma:2"))
        report = equality_test(pair, GRID_10, tol=1e-10)
        assert not report.equal
        # B_{2 Gamma} = 2 B everywhere
        assert report.max_residual == pytest.approx(1.0, rel=1e-10)
        assert report.worst_point is not None

    def test_identity_differs_from_gamma(self):
        pair = GeneratorPair(gamma_generator(), builtin_generator("identity"))
        assert not equality_test(pair, GRID_10).equal

    def test_empty_grid(self):
        pair = GeneratorPair(gamma_generator(), gamma_generator())
        with pytest.raises(DomainError):
            equality_test(pair, [])

    def test_different_domains(self):
        with pytest.raises(DomainError, match="different domains"):
            GeneratorPair(gamma_generator(), builtin_generator("exp:1"))


class TestFitExponential:
    @pytest.mark.parametrize("c", [-2.0, 0.0, 3.0])
    def test_recovers_c(self, c):
        pair = GeneratorPair(gamma_generator(), builtin_generator(f"expgamma:{c}"))
        fit = fit_exponential(pair, [0.5 * i for i in range(1, 11)])
        assert fit.c == pytest.approx(c, abs=1e-9)
        assert fit.residual < 1e-10
        assert fit.equal

    def test_constant_ratio_is_not_exponential(self):
        pair = GeneratorPair(gamma_generator(), builtin_generator("scaled-gamma:2"))
        fit = fit_exponential(pair, [0.5 * i for i in range(1, 11)])
        assert not fit.equal
        assert fit.residual > 0.1

    def test_needs_two_points(self):
        pair = GeneratorPair(gamma_generator(), gamma_generator())
        with pytest.raises(DomainError):
            fit_exponential(pair, [1.0, 1.0])

    def test_is_gamma_generator(self):
        fit = is_gamma_generator(builtin_generator("expgamma:1.5"), [1.0, 2.0, 3.0, 4.0])
        assert fit.equal
        assert fit.c == pytest.approx(1.5, abs=1e-9)

    def test_power_is_not_gamma_generator(self):
        assert not is_gamma_generator(builtin_generator("power:2"), [1.0, 2.0, 3.0, 4.0]).equal


class TestRatioCocycle:
    def test_exponential_ratio_is_a_cocycle(self):
        pair = GeneratorPair(builtin_generator("identity"), builtin_generator("power:1"))
        assert ratio_cocycle_residual(pair, 1.5, 2.5) < 1e-15

    def test_power_ratio_is_not(self):
        pair = GeneratorPair(builtin_generator("identity"), builtin_generator("power:2"))
        # r(x) = x: r(3)/(r(1) r(2)) = 3/2
        assert ratio_cocycle_residual(pair, 1.0, 2.0) == pytest.approx(1 / 3, rel=1e-12)


class TestBuiltinGenerator:
    @pytest.mark.parametrize("label", ["gamma", "identity", "exp:2", "expgamma:-1", "power:0.5", "scaled-gamma:3"])
    def test_known_labels(self, label):
        assert builtin_generator(label).label == label

    @pytest.mark.parametrize("label", ["bogus", "exp", "power", "scaled-gamma:-1", "exp:abc"])
    def test_bad_labels(self, label):
        with pytest.raises(ConfigError):
            builtin_generator(label)
