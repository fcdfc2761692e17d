"""
Shared fixtures for scalefuture tests.
"""
from pathlib import Path

import numpy as np
import pytest

from scalefuture.core.config import GridConfig, RunConfig
from scalefuture.core.grid import build_grid
from scalefuture.events.event_types import StimulusVocabulary
from scalefuture.events.scenario import create_scenario


REPO_ROOT = Path(__file__).resolve().parents[1]
SCENARIO_DIR = REPO_ROOT / "config" / "scenarios"


@pytest.fixture
def grid():
    """Default figure grid: k = 4, 64 nodes over [0.5, 100]"""
    return build_grid(0.5, 100.0, 64, 4)


@pytest.fixture
def wide_grid():
    """Grid wide enough that bumps at lags 2..50 lose no mass to the edges"""
    return build_grid(0.1, 1000.0, 128, 4)


@pytest.fixture
def vocab():
    return StimulusVocabulary(("alpha", "beta", "reward"))


@pytest.fixture
def fig4_scenario():
    return create_scenario(
        states=["alpha", "beta", "reward"],
        rewards={"reward": 1.0},
        choices={
            "alpha": [{"p": 1.0, "outcomes": [{"state": "reward", "delay": 5.0}]}],
            "beta": [{"p": 1.0, "outcomes": [{"state": "reward", "delay": 10.0, "magnitude": 2.0}]}],
        },
    )


@pytest.fixture
def branching_scenario():
    return create_scenario(
        states=["alpha", "food", "water"],
        rewards={"food": 1.0, "water": 1.0},
        choices={
            "alpha": [
                {"p": 0.7, "outcomes": [{"state": "food", "delay": 5.0}]},
                {"p": 0.3, "outcomes": [{"state": "water", "delay": 15.0}]},
            ],
        },
    )


@pytest.fixture
def scenario_dir():
    return SCENARIO_DIR


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def run_config(tmp_path):
    return RunConfig(grid=GridConfig(), output_dir=str(tmp_path / "results"))
