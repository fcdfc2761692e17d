"""
Log-spaced timeline grid: the tau-star nodes and their rate constants.

Node j represents the lag taus[j] = tau_min * (1 + c)**j and pairs with a
leaky integrator of rate s = k / taus[j]. The s-axis carries k extra nodes on
each side so the k-th derivative has a full stencil at every exposed node.
"""
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Tuple

import numpy as np

from .config import GridConfig
from .errors import GridError


def _readonly(values: np.ndarray) -> np.ndarray:
    values.flags.writeable = False
    return values


@dataclass(frozen=True)
class TaustarGrid:
    """Geometric grid of |tau*| values; equality and hashing use the parameters"""
    tau_min: float
    tau_max: float
    n_units: int
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise GridError(f"k must be >= 1, got {self.k}")
        if not self.tau_min > 0:
            raise GridError(f"tau_min must be positive, got {self.tau_min}")
        if not self.tau_max > self.tau_min:
            raise GridError(
                f"tau_max must exceed tau_min ({self.tau_max} <= {self.tau_min})"
            )
        if self.n_units < 2 * self.k + 1:
            raise GridError(
                f"n_units must be >= 2k+1 = {2 * self.k + 1}, got {self.n_units}"
            )

    @cached_property
    def ratio(self) -> float:
        """Constant ratio 1 + c between neighbouring nodes"""
        return (self.tau_max / self.tau_min) ** (1.0 / (self.n_units - 1))

    @property
    def c(self) -> float:
        return self.ratio - 1.0

    @cached_property
    def extended_taus(self) -> np.ndarray:
        """|tau*| for exposed and padding nodes, padding continuing the progression"""
        exponents = np.arange(-self.k, self.n_units + self.k, dtype=float)
        values = self.tau_min * self.ratio ** exponents
        values[self.k] = self.tau_min
        values[self.k + self.n_units - 1] = self.tau_max
        return _readonly(values)

    @cached_property
    def taus(self) -> np.ndarray:
        return _readonly(self.extended_taus[self.k:self.k + self.n_units].copy())

    @cached_property
    def s_values(self) -> np.ndarray:
        """Rate constants aligned with extended_taus; exposed node j is at j + k"""
        return _readonly(self.k / self.extended_taus)

    @property
    def exposed_s(self) -> np.ndarray:
        return self.s_values[self.k:self.k + self.n_units]

    @cached_property
    def log_step(self) -> float:
        return math.log(self.ratio)

    def interior_bounds(self) -> Tuple[float, float]:
        """Lags whose impulse response is fully resolved by the grid"""
        return (
            self.tau_min * self.ratio ** self.k,
            self.tau_max * self.ratio ** (-self.k),
        )

    def in_interior(self, tau: float) -> bool:
        lo, hi = self.interior_bounds()
        return lo <= tau <= hi

    def nearest_node(self, tau: float) -> int:
        """Index of the exposed node closest to tau in log distance"""
        if not tau > 0:
            raise GridError(f"tau must be positive, got {tau}")
        index = int(np.argmin(np.abs(np.log(self.taus) - math.log(tau))))
        return index

    def key(self) -> Tuple[float, float, int, int]:
        return (self.tau_min, self.tau_max, self.n_units, self.k)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tau_min": self.tau_min,
            "tau_max": self.tau_max,
            "n_units": self.n_units,
            "k": self.k,
        }

    def describe(self) -> str:
        """One-line provenance string for CSV headers"""
        return (
            f"tau_min={self.tau_min!r} tau_max={self.tau_max!r} "
            f"n_units={self.n_units} k={self.k} c={self.c!r}"
        )

    @classmethod
    def from_config(cls, grid_config: GridConfig) -> "TaustarGrid":
        return build_grid(
            grid_config.tau_min, grid_config.tau_max, grid_config.n_units, grid_config.k
        )


def build_grid(tau_min: float, tau_max: float, n_units: int, k: int) -> TaustarGrid:
    """Construct and validate a log-spaced grid"""
    return TaustarGrid(float(tau_min), float(tau_max), int(n_units), int(k))


def number_density(grid: TaustarGrid, j: int) -> float:
    """
    Number density g = 1/tau* at exposed node j. Diagnostic only: the value
    sums realise g through node placement, never as an explicit weight.
    """
    if not 0 <= j < grid.n_units:
        raise GridError(f"Node index {j} out of range [0, {grid.n_units})")
    return 1.0 / float(grid.taus[j])


def node_measure(grid: TaustarGrid) -> np.ndarray:
    """Width in tau* covered by each exposed node: taus[j] * log(1 + c)"""
    return grid.taus * grid.log_step
