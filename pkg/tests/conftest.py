"""Pytest configuration and shared fixtures."""

import numpy as np
import pytest
import yaml
from typer.testing import CliRunner

from cprsim.model.config import ExperimentConfig


@pytest.fixture
def cli_runner():
    """CLI runner for typer testing."""
    return CliRunner()


@pytest.fixture
def rng():
    """Seeded generator, fresh per test."""
    return np.random.default_rng(20140101)


@pytest.fixture
def random_vector(rng):
    """Factory for circular complex Gaussian vectors."""

    def _draw(size: int) -> np.ndarray:
        return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)

    return _draw


@pytest.fixture
def small_config():
    """Factory for quick experiment configs (N=32, few trials)."""

    def _create(**overrides) -> ExperimentConfig:
        data = {
            "n": 32,
            "k_values": [2],
            "measurements": [48, 96],
            "trials": 3,
            "seed": 7,
            "workers": 1,
        }
        data.update(overrides)
        if "l_values" in overrides:
            data.pop("measurements", None)
        return ExperimentConfig.model_validate(data)

    return _create


@pytest.fixture
def write_config(tmp_path):
    """Factory fixture to write YAML config files."""

    def _write(data: dict, name: str = "experiment.yaml"):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data))
        return path

    return _write
