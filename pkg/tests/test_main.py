"""Tests for the CLI router: parsing, dispatch and exit codes."""

import pytest

from betactl import __version__
from betactl import main as main_module
from betactl.config import RunConfig
from betactl.main import build_parser, main, run


def run_main(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    return exc.value.code


class TestParser:
    def test_version(self, capsys):
        assert run_main(["--version"]) == 0
        assert capsys.readouterr().out.strip() == f"betactl {__version__}"

    def test_no_command_prints_help(self, capsys):
        assert run_main([]) == 0
        out = capsys.readouterr().out
        assert "Commands by category" in out
        assert "converge" in out

    def test_all_commands_registered(self):
        parser = build_parser()
        for argv in (
            ["eval", "--fn", "gamma", "--x", "1"],
            ["ray", "--k", "1"],
            ["converge", "--method", "gm"],
            ["certify", "--target", "limit"],
            ["scan", "--fn", "log-beta"],
            ["betatype", "--g1", "gamma", "--g2", "identity"],
        ):
            assert parser.parse_args(argv).command == argv[0]

    def test_bad_choice_is_usage_error(self, capsys):
        assert run_main(["ray", "--k", "1", "--method", "newton"]) == 2


class TestExitCodes:
    """0 on success, 1 for domain and config errors, 2 for convergence and consistency failures."""

    def test_success(self, capsys):
        assert run_main(["eval", "--fn", "beta", "--x", "1", "--y", "2"]) == 0
        assert float(capsys.readouterr().out.split()[0]) == pytest.approx(0.5, rel=1e-12)

    def test_ray_log_second_derivative_at_large_x(self, capsys):
        assert run_main(["eval", "--fn", "ray-log-d2", "--k", "0", "--x", "300"]) == 0
        assert float(capsys.readouterr().out.split()[0]) == pytest.approx(5.5648e-6, rel=1e-3)

    def test_domain_error(self, capsys):
        assert run_main(["eval", "--fn", "gamma", "--x", "-1"]) == 1
        assert capsys.readouterr().err.startswith("Error:")

    def test_config_error_from_handler(self, capsys):
        assert run_main(["eval", "--fn", "beta", "--x", "1"]) == 1
        assert "--y" in capsys.readouterr().err

    def test_invalid_tolerance_rejected_before_dispatch(self, capsys):
        assert run_main(["eval", "--fn", "gamma", "--x", "1", "--rel-tol", "0"]) == 1
        assert "rel_tol" in capsys.readouterr().err

    def test_convergence_error(self, capsys):
        assert run_main(["ray", "--k", "1", "--xs", "1.5", "--tol", "1e-15", "--max-terms", "5"]) == 2
        assert "did not converge" in capsys.readouterr().err

    def test_failed_certificate(self, capsys):
        assert run_main(["certify", "--target", "final-corollary", "--grid", "1:2:1", "--perturb", "0.1"]) == 2
        captured = capsys.readouterr()
        assert "FAIL" in captured.out
        assert "hypotheses failed" in captured.err


class TestRun:
    def test_returns_zero(self, capsys):
        assert run(RunConfig("eval", {"fn": "gamma", "x": "3"})) == 0
        assert float(capsys.readouterr().out.split()[0]) == pytest.approx(2.0, rel=1e-12)

    def test_output_path_reaches_handler(self, tmp_path, capsys):
        path = tmp_path / "gamma.csv"
        assert run(RunConfig("eval", {"fn": "gamma", "x": "1,2"}, str(path))) == 0
        assert path.read_text().startswith("# betactl")

    def test_keyboard_interrupt(self, monkeypatch, capsys):
        def interrupted(args):
            raise KeyboardInterrupt

        monkeypatch.setitem(main_module._HANDLERS, "eval", interrupted)
        assert run(RunConfig("eval", {"fn": "gamma", "x": "1"})) == 130
        assert "Cancelled." in capsys.readouterr().err
