"""Pytest configuration and shared fixtures."""

from argparse import Namespace

import pytest

from betactl.core.oracle import QuadratureConfig


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Point the config file at an empty temp dir and clear the tolerance env var."""
    config_dir = tmp_path / "config"
    config_dir.mkdir()
    monkeypatch.setattr("betactl.config.CONFIG_DIR", str(config_dir))
    monkeypatch.setattr("betactl.config.CONFIG_FILE", str(config_dir / "config.json"))
    monkeypatch.delenv("BETACTL_TOL", raising=False)
    return config_dir


@pytest.fixture
def tight_quadrature():
    """Quadrature settings tighter than the defaults, for oracle self-tests."""
    return QuadratureConfig(abs_tol=1e-40, rel_tol=1e-13, max_subdivisions=8000)


@pytest.fixture
def mock_args():
    """Factory fixture for creating argparse Namespace objects with defaults."""

    def _create(**overrides):
        defaults = {
            "json": False,
            "output": None,
            "workers": None,
        }
        defaults.update(overrides)
        return Namespace(**defaults)

    return _create
