"""Tests for the command modules: data functions and cmd_* handlers."""

import json
import math

import pytest

from betactl.commands.betatype import cmd_betatype, compare_generators, pointwise_rows
from betactl.commands.certify import (
    certify,
    certify_concavity,
    certify_final_corollary,
    certify_geometric,
    certify_limit,
    certify_log_convexity,
    cmd_certify,
)
from betactl.commands.converge import cmd_converge, convergence_report, emit_convergence_report
from betactl.commands.evaluate import cmd_eval, evaluate, evaluate_grid
from betactl.commands.ray import cmd_ray, reconstruct
from betactl.commands.scan import cmd_scan, scan_surface
from betactl.errors import ConfigError, NumericalConsistencyError
from betactl.util.grids import parse_grid2


def read_csv(path):
    """Column names and float rows of a betactl CSV, header block skipped."""
    lines = [line for line in path.read_text().splitlines() if not line.startswith("#")]
    columns = lines[0].split(",")
    return columns, [line.split(",") for line in lines[1:]]


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


class TestEvaluate:
    def test_beta(self):
        assert evaluate("beta", 1.0, 2.0)["value"] == pytest.approx(0.5, rel=1e-12)

    def test_log_gamma(self):
        assert evaluate("log-gamma", 10.0)["value"] == pytest.approx(math.lgamma(10.0), rel=1e-12)

    def test_residual_has_no_error_estimate(self):
        row = evaluate("gamma-residual", 2.5)
        assert row["value"] < 1e-10
        assert math.isnan(row["est_error"])

    def test_ray_function(self):
        assert evaluate("ray-G", 1.0, k=1.0)["value"] == pytest.approx(1 / 6)

    def test_two_arg_needs_y(self):
        with pytest.raises(ConfigError, match="--y"):
            evaluate("beta", 1.0)

    def test_ray_needs_k(self):
        with pytest.raises(ConfigError, match="--k"):
            evaluate("ray-F", 1.0)

    def test_grid_order_with_workers(self):
        xs = [0.5, 1.0, 1.5, 2.0]
        rows = evaluate_grid("gamma", xs, workers=4)
        assert [r["x"] for r in rows] == xs


class TestCmdEval:
    def test_single_point_json(self, mock_args, capsys):
        cmd_eval(mock_args(fn="beta", x="1", y=2.0, json=True))
        data = json.loads(capsys.readouterr().out)
        assert data["value"] == pytest.approx(0.5, rel=1e-12)

    def test_grid_table(self, mock_args, capsys):
        cmd_eval(mock_args(fn="gamma", x="1:3:1"))
        out = capsys.readouterr().out
        assert "┌" in out
        assert "est_error" in out

    def test_csv_to_stdout_only(self, mock_args, capsys):
        cmd_eval(mock_args(fn="gamma", x="1,2", output="-"))
        out = capsys.readouterr().out
        assert out.startswith("# betactl")
        assert "x,y,k,value,est_error" in out
        assert "┌" not in out


# ---------------------------------------------------------------------------
# ray
# ---------------------------------------------------------------------------


class TestReconstruct:
    def test_krull_rows(self):
        rows = reconstruct(1.0, "krull", [2.0, 1.0, 1.0], tol=1e-10)
        assert [r["x"] for r in rows] == [1.0, 2.0]
        assert all(r["rel_err"] < 1e-8 for r in rows)

    def test_oracle_swapped(self):
        rows = reconstruct(2.0, "oracle", [1.5], swapped=True)
        assert rows[0]["rel_err"] < 1e-12

    def test_unknown_method(self):
        with pytest.raises(ConfigError, match="Unknown method"):
            reconstruct(1.0, "newton", [1.0])


class TestCmdRay:
    def test_csv_accuracy(self, mock_args, tmp_path, capsys):
        path = tmp_path / "ray.csv"
        cmd_ray(mock_args(k=1.0, method="krull", xs="0.5:3:0.5", tol=1e-10, output=str(path)))
        columns, rows = read_csv(path)
        assert columns == ["x", "value", "oracle", "rel_err", "est_error"]
        assert len(rows) == 6
        assert all(float(r[3]) < 1e-8 for r in rows)
        assert "max rel_err" in capsys.readouterr().out

    def test_header_echoes_parameters(self, mock_args, tmp_path):
        path = tmp_path / "ray.csv"
        cmd_ray(mock_args(k=2.0, method="krull", xs="1", tol=1e-10, output=str(path)))
        text = path.read_text()
        assert "# k = 2.0" in text
        assert "# method = krull" in text
        assert "# tol = 1e-10" in text

    def test_deterministic(self, mock_args, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        cmd_ray(mock_args(k=0.5, method="krull", xs="0.5:2:0.5", tol=1e-10, output=str(first), workers=1))
        cmd_ray(mock_args(k=0.5, method="krull", xs="0.5:2:0.5", tol=1e-10, output=str(second), workers=4))
        assert first.read_bytes() == second.read_bytes()

    def test_plot(self, mock_args, tmp_path, capsys):
        plot = tmp_path / "ray.svg"
        cmd_ray(mock_args(k=1.0, method="oracle", xs="1,2", plot=str(plot)))
        assert plot.read_text().startswith("<svg")

    def test_env_tolerance_used(self, mock_args, tmp_path, monkeypatch):
        monkeypatch.setenv("BETACTL_TOL", "1e-9")
        path = tmp_path / "ray.csv"
        cmd_ray(mock_args(k=1.0, method="krull", xs="1", output=str(path)))
        assert "# tol = 1e-09" in path.read_text()


# ---------------------------------------------------------------------------
# certify
# ---------------------------------------------------------------------------


class TestCertify:
    def test_final_corollary_passes(self):
        result = certify_final_corollary(parse_grid2("0.5:4:0.5"))
        assert (result["passed"], result["total"]) == (3, 3)

    def test_final_corollary_perturbed(self):
        result = certify_final_corollary(parse_grid2("1:3:1"), perturb=0.1)
        assert not result["hypotheses"]["functional-equation"]["passed"]
        assert result["hypotheses"]["functional-equation"]["failures"]

    def test_concavity(self):
        result = certify_concavity(samples=10_000, seed=0)
        assert result["passed"] == result["total"] == 3
        assert result["hypotheses"]["F2-nonpositive"]["worst"] <= 0

    def test_concavity_seeded(self):
        assert certify_concavity(samples=200, seed=7) == certify_concavity(samples=200, seed=7)

    def test_limit(self):
        result = certify_limit([0.0, 1.0, 5.0])
        assert result["passed"] == 3
        assert result["hypotheses"]["k=1"]["worst"] < 1e-3

    def test_log_convexity(self):
        result = certify_log_convexity([0.0, 2.0], [0.5, 1.5, 3.0])
        assert result["passed"] == 2

    def test_geometric(self):
        result = certify_geometric((0.5, 4.0))
        assert result["passed"] == result["total"] == 2

    def test_unknown_target(self):
        with pytest.raises(ConfigError, match="Unknown target"):
            certify("everything")


class TestCmdCertify:
    def test_pass_summary(self, mock_args, capsys):
        cmd_certify(mock_args(target="final-corollary", grid="0.5:4:0.5"))
        assert "3/3 hypotheses pass" in capsys.readouterr().out

    def test_failure_reports_then_raises(self, mock_args, capsys):
        with pytest.raises(NumericalConsistencyError, match="functional-equation"):
            cmd_certify(mock_args(target="final-corollary", grid="1:3:1", perturb=0.1))
        out = capsys.readouterr().out
        assert "FAIL" in out
        assert "2/3 hypotheses pass" in out

    def test_csv_header_echoes_every_option(self, mock_args, tmp_path, capsys):
        path = tmp_path / "concavity.csv"
        cmd_certify(mock_args(target="concavity", samples=500, seed=7, output=str(path)))
        header = [line for line in path.read_text().splitlines() if line.startswith("#")]
        for line in ("# samples = 500", "# seed = 7", "# tol = 1e-09", "# perturb = 0.0", "# target = concavity"):
            assert line in header

    def test_perturbed_runs_write_distinguishable_csv(self, mock_args, tmp_path, capsys):
        clean, perturbed = tmp_path / "clean.csv", tmp_path / "perturbed.csv"
        cmd_certify(mock_args(target="final-corollary", grid="1:3:1", output=str(clean)))
        with pytest.raises(NumericalConsistencyError):
            cmd_certify(mock_args(target="final-corollary", grid="1:3:1", perturb=0.1, output=str(perturbed)))
        assert "# perturb = 0.0" in clean.read_text()
        assert "# perturb = 0.1" in perturbed.read_text()

    def test_csv(self, mock_args, tmp_path, capsys):
        path = tmp_path / "limit.csv"
        cmd_certify(mock_args(target="limit", ks="0,1", output=str(path)))
        columns, rows = read_csv(path)
        assert columns == ["hypothesis", "passed", "worst"]
        assert [r[:2] for r in rows] == [["k=0", "1"], ["k=1", "1"]]


# ---------------------------------------------------------------------------
# betatype
# ---------------------------------------------------------------------------


class TestCompareGenerators:
    def test_exponential_multiple_is_equal(self):
        result = compare_generators("gamma", "expgamma:2", "0.5:3:0.5")
        assert result["equal"]
        assert result["exponential_ratio"]
        assert result["c_fit"] == pytest.approx(2.0, abs=1e-9)
        assert result["grid_points"] == 36

    def test_scaled_gamma_differs(self):
        result = compare_generators("gamma", "scaled-gamma:3", "1:2:0.5")
        assert not result["equal"]
        assert result["max_residual"] == pytest.approx(2.0, rel=1e-10)

    def test_pointwise_rows(self):
        rows = pointwise_rows("gamma", "identity", "1,2")
        assert len(rows) == 4
        x, y, b1, b2, _ = rows[0]
        assert (x, y) == (1.0, 1.0)
        assert b1 == pytest.approx(1.0, rel=1e-12)
        assert b2 == pytest.approx(0.5)


class TestCmdBetatype:
    def test_text(self, mock_args, capsys):
        cmd_betatype(mock_args(g1="gamma", g2="expgamma:-1", grid="0.5:2:0.5"))
        out = capsys.readouterr().out
        assert "equal on 16 grid points" in out
        assert "(exponential)" in out

    def test_csv(self, mock_args, tmp_path):
        path = tmp_path / "bt.csv"
        cmd_betatype(mock_args(g1="identity", g2="power:1", grid="1,2", output=str(path)))
        columns, rows = read_csv(path)
        assert columns == ["x", "y", "b1", "b2", "rel_diff"]
        assert len(rows) == 4


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------


class TestScanSurface:
    def test_example_quadratic_saddle(self):
        along = scan_surface("example-quadratic", "1:5:1", direction="1,-1")
        across = scan_surface("example-quadratic", "1:5:1", direction="1,1")
        assert along["counts"]["concave"] == 25
        assert across["counts"]["convex"] == 25

    def test_literal_quadratic_from_config(self, isolated_config):
        (isolated_config / "config.json").write_text(json.dumps({"scan": {"quadratic": [1, 5, 1, 0, 0, 0]}}))
        result = scan_surface("quadratic", "1:3:1", direction="1,-1")
        assert result["counts"]["concave"] == 9
        assert all(r["second_deriv"] == pytest.approx(-6.0, abs=1e-6) for r in result["rows"])

    def test_scale_and_hessian(self):
        result = scan_surface("example-quadratic", "1:2:1", direction="1,-1", scale=-2.0, hessian=True)
        assert result["scale_mismatches"] == []
        assert result["hessian"] == pytest.approx([-1.0] * 4, abs=1e-6)

    def test_failures_counted(self):
        result = scan_surface("log-beta", "0.01,1", ygrid_spec="1", direction="1,0", step=0.05)
        assert result["counts"]["failed"] == 1
        assert result["failures"][0]["point"] == [0.01, 1.0]


class TestCmdScan:
    def test_summary(self, mock_args, capsys):
        cmd_scan(mock_args(fn="example-quadratic", grid="1:5:1", direction="1,-1"))
        out = capsys.readouterr().out
        assert "25 points" in out
        assert "concave: 25" in out

    def test_csv(self, mock_args, tmp_path, capsys):
        path = tmp_path / "scan.csv"
        cmd_scan(mock_args(fn="quadratic", coeffs="1,5,1,0,0,0", grid="1,2", direction="1,1", output=str(path)))
        columns, rows = read_csv(path)
        assert columns == ["x", "y", "u", "v", "second_deriv", "step", "classification"]
        assert {r[-1] for r in rows} == {"convex"}
        assert float(rows[0][4]) == pytest.approx(14.0, abs=1e-6)


# ---------------------------------------------------------------------------
# converge
# ---------------------------------------------------------------------------


class TestEmitConvergenceReport:
    def test_ratios(self):
        rows, text = emit_convergence_report([(10, 1.1, 1.0), (100, 1.01, 1.0), (1000, 1.0, 1.0), (10_000, 1.0, 1.0)])
        assert math.isnan(rows[0][4])
        assert rows[1][4] == pytest.approx(0.1)
        assert rows[2][4] == 0.0
        assert math.isnan(rows[3][4])
        assert text.splitlines()[1] == "n,value,abs_err,rel_err,err_ratio"

    def test_empty(self):
        with pytest.raises(ConfigError):
            emit_convergence_report([])


class TestConvergenceReport:
    def test_constant_is_exact(self):
        result = convergence_report("gm", "constant", 2.5, schedule=[10, 100])
        assert [r["rel_err"] for r in result["rows"]] == [0.0, 0.0]
        assert all(math.isnan(r["err_ratio"]) for r in result["rows"])

    def test_gm_ray_error_decreases(self):
        result = convergence_report("gm", "ray", 1.5, k=1.0, schedule=[1000, 10_000, 100_000])
        errors = [r["rel_err"] for r in result["rows"]]
        assert errors[0] > errors[1] > errors[2]
        assert result["rows"][2]["err_ratio"] < 0.5

    def test_krull_gamma(self):
        result = convergence_report("krull", "gamma", 2.5, tols=[1e-6, 1e-12])
        assert [r["n"] for r in result["rows"]] == sorted(r["n"] for r in result["rows"])
        assert result["rows"][-1]["rel_err"] < 1e-8

    def test_krull_rejects_constant(self):
        with pytest.raises(ConfigError, match="krull"):
            convergence_report("krull", "constant", 1.5)

    def test_unknown_method(self):
        with pytest.raises(ConfigError):
            convergence_report("newton", "ray", 1.5)


class TestCmdConverge:
    def test_csv_and_plot(self, mock_args, tmp_path, capsys):
        path, plot = tmp_path / "conv.csv", tmp_path / "conv.svg"
        cmd_converge(mock_args(method="gm", fn="gamma", x=1.5, k=None, schedule="1e2,1e3", output=str(path), plot=str(plot)))
        text = path.read_text()
        assert "# convergence of gm for gamma at x=1.5" in text
        assert "# schedule = [100, 1000]" in text
        columns, rows = read_csv(path)
        assert columns == ["n", "value", "abs_err", "rel_err", "err_ratio"]
        assert [r[0] for r in rows] == ["100", "1000"]
        assert rows[0][4] == "nan"
        assert plot.read_text().startswith("<svg")

    def test_table(self, mock_args, capsys):
        cmd_converge(mock_args(method="krull", fn="ray", x=None, k=1.0, tols="1e-6,1e-10"))
        out = capsys.readouterr().out
        assert "err_ratio" in out
        assert "┌" in out
