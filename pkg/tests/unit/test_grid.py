import math

import numpy as np
import pytest
from pydantic import ValidationError

from scalefuture.core.config import GridConfig
from scalefuture.core.errors import GridError
from scalefuture.core.grid import TaustarGrid, build_grid, node_measure, number_density


def test_default_spacing_constant(grid):
    assert grid.c == pytest.approx((100 / 0.5) ** (1 / 63) - 1, rel=1e-12)
    assert grid.c == pytest.approx(0.0877, abs=5e-4)


def test_endpoints_and_lengths(grid):
    assert grid.taus[0] == 0.5
    assert grid.taus[-1] == 100.0
    assert len(grid.taus) == 64
    assert len(grid.s_values) == 64 + 2 * 4
    assert len(grid.extended_taus) == 64 + 2 * 4


def test_geometric_spacing(grid):
    ratios = grid.extended_taus[1:] / grid.extended_taus[:-1]
    assert np.max(np.abs(ratios - grid.ratio)) / grid.ratio < 1e-12


def test_padding_continues_progression(grid):
    assert grid.extended_taus[0] == pytest.approx(0.5 * grid.ratio ** -4, rel=1e-12)
    assert grid.extended_taus[-1] == pytest.approx(100.0 * grid.ratio ** 4, rel=1e-12)


def test_rate_constants_pair_with_taus(grid):
    product = grid.s_values * grid.extended_taus
    np.testing.assert_allclose(product, grid.k, rtol=1e-14)
    np.testing.assert_allclose(grid.exposed_s * grid.taus, grid.k, rtol=1e-14)


def test_rebuild_reproduces_taus(grid):
    again = build_grid(grid.taus[0], grid.taus[-1], grid.n_units, grid.k)
    assert np.array_equal(again.taus, grid.taus)
    assert again == grid
    assert hash(again) == hash(grid)


def test_arrays_are_read_only(grid):
    with pytest.raises(ValueError):
        grid.taus[0] = 1.0


@pytest.mark.parametrize(
    "params",
    [
        (1.0, 1.0, 64, 4),
        (0.0, 100.0, 64, 4),
        (-1.0, 100.0, 64, 4),
        (0.5, 100.0, 8, 4),
        (0.5, 100.0, 64, 0),
    ],
)
def test_invalid_grids_rejected(params):
    with pytest.raises(GridError):
        build_grid(*params)


def test_grid_config_validates():
    with pytest.raises(ValidationError):
        GridConfig(tau_min=2.0, tau_max=1.0)
    grid = TaustarGrid.from_config(GridConfig())
    assert grid.key() == (0.5, 100.0, 64, 4)


def test_number_density_is_reciprocal():
    grid = build_grid(2.0, 10.0, 9, 4)
    assert number_density(grid, 0) == 0.5
    assert number_density(grid, grid.n_units - 1) == pytest.approx(0.1)
    with pytest.raises(GridError):
        number_density(grid, grid.n_units)


def test_density_times_measure_counts_nodes(grid):
    densities = np.array([number_density(grid, j) for j in range(grid.n_units)])
    total = float(np.sum(densities * node_measure(grid)))
    assert total == pytest.approx(grid.n_units * math.log(1 + grid.c), rel=1e-12)


def test_interior_and_nearest_node(grid):
    lo, hi = grid.interior_bounds()
    assert lo == pytest.approx(0.5 * grid.ratio ** 4)
    assert hi == pytest.approx(100.0 / grid.ratio ** 4)
    assert grid.in_interior(5.0)
    assert not grid.in_interior(0.6)
    assert grid.nearest_node(0.5) == 0
    assert grid.nearest_node(100.0) == grid.n_units - 1
    j = grid.nearest_node(5.0)
    assert abs(math.log(grid.taus[j] / 5.0)) <= grid.log_step / 2 + 1e-12
    with pytest.raises(GridError):
        grid.nearest_node(0.0)


def test_describe_and_dict(grid):
    assert grid.to_dict() == {"tau_min": 0.5, "tau_max": 100.0, "n_units": 64, "k": 4}
    assert "n_units=64" in grid.describe()
