import json

import pytest
from pydantic import ValidationError

from scalefuture.adapters.tables import Table, write_table
from scalefuture.core.config import (
    CONFIG_HEADER_PREFIX,
    GridConfig,
    NormalizationAxis,
    RunConfig,
    load_config,
)
from scalefuture.core.errors import ScenarioError


def test_defaults():
    config = RunConfig()
    assert config.grid == GridConfig(tau_min=0.5, tau_max=100.0, n_units=64, k=4)
    assert config.axis is NormalizationAxis.PAST
    assert config.episodes_per_choice == 1
    assert config.epsilon is None


def test_header_line_is_sorted_json(run_config):
    line = run_config.header_line()
    assert line.startswith(CONFIG_HEADER_PREFIX)
    body = line[len(CONFIG_HEADER_PREFIX):]
    assert body == json.dumps(run_config.to_dict(), sort_keys=True)
    assert RunConfig.from_dict(json.loads(body)) == run_config


@pytest.mark.parametrize(
    "overrides",
    [{"seed": -1}, {"episodes_per_choice": 0}, {"epsilon": 0.0}, {"axis": "sideways"}, {"colour": "red"}],
)
def test_invalid_values(overrides):
    with pytest.raises(ValidationError):
        RunConfig(**overrides)


def test_grid_too_small():
    with pytest.raises(ValidationError):
        GridConfig(n_units=3, k=4)


def test_load_from_json(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"grid": {"n_units": 48}, "seed": 5, "axis": "exposure"}))
    config = load_config(path)
    assert config.grid.n_units == 48
    assert config.seed == 5
    assert config.axis is NormalizationAxis.EXPOSURE


def test_load_from_written_table(tmp_path, run_config, grid):
    table = Table(["x"])
    table.add_row(1.0)
    path = write_table(tmp_path / "out.csv", table, run_config, grid)
    assert load_config(path) == run_config


def test_load_errors(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"seed": 1,\n "grid": }')
    with pytest.raises(ScenarioError) as excinfo:
        load_config(broken)
    assert excinfo.value.line == 2

    headerless = tmp_path / "headerless.csv"
    headerless.write_text("# grid: something\nx\n1.0\n")
    with pytest.raises(ScenarioError):
        load_config(headerless)

    invalid = tmp_path / "invalid.json"
    invalid.write_text(json.dumps({"seed": "many"}))
    with pytest.raises(ScenarioError):
        load_config(invalid)
