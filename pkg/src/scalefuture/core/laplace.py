"""
Leaky-integrator bank F (the running Laplace transform of the input) and its
Post-approximation inverse, the compressed past timeline f-tilde.

F is updated with exact exponential integration between events, so splitting
an interval into sub-steps only changes round-off. The inverse is the banded
operator L_k^-1 = C_k s^(k+1) d^k/ds^k, with the k-th derivative taken as k
centred divided differences over the padded s-axis.
"""
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
import structlog
from cachetools import LRUCache, cached

from ..events.event_types import StimulusVocabulary
from .errors import GridError, InputError, ShapeMismatchError
from .grid import TaustarGrid


logger = structlog.get_logger(__name__)

ArrayLike = Union[float, np.ndarray]


def post_constant(k: int) -> float:
    """C_k = (-1)^k / k!"""
    return (-1.0) ** k / math.factorial(k)


@cached(cache=LRUCache(maxsize=32), key=lambda grid: grid.key())
def inverse_operator(grid: TaustarGrid) -> np.ndarray:
    """
    Feedforward weights mapping the padded F column (n_units + 2k) onto the
    n_units exposed timeline nodes. Row j touches only nodes j .. j + 2k.
    """
    s = np.asarray(grid.s_values, dtype=float)
    operator = np.eye(len(s))
    for _ in range(grid.k):
        width = s[2:] - s[:-2]
        rows = len(s) - 2
        difference = np.zeros((rows, len(s)))
        index = np.arange(rows)
        difference[index, index] = -1.0 / width
        difference[index, index + 2] = 1.0 / width
        operator = difference @ operator
        s = s[1:-1]
    operator = post_constant(grid.k) * (s ** (grid.k + 1))[:, None] * operator
    operator.flags.writeable = False
    logger.debug("inverse_operator_built", **grid.to_dict(), shape=operator.shape)
    return operator


def _check_finite(values: np.ndarray) -> None:
    if not np.all(np.isfinite(values)):
        raise InputError("Input vector must be finite")


@dataclass(frozen=True)
class PastTimeline:
    """Compressed estimate of what happened how long ago"""
    grid: TaustarGrid
    vocab: StimulusVocabulary
    f_tilde: np.ndarray

    def column(self, stimulus: str) -> np.ndarray:
        return self.f_tilde[:, self.vocab.index(stimulus)]

    def peak_node(self, stimulus: str) -> int:
        return int(np.argmax(self.column(stimulus)))


class LaplaceState:
    """Single-writer bank of leaky integrators, one column per stimulus"""

    def __init__(self, grid: TaustarGrid, vocab: StimulusVocabulary):
        self.grid = grid
        self.vocab = vocab
        self.F = np.zeros((len(grid.s_values), len(vocab)))
        self.now = 0.0

    def _check_dt(self, dt: float) -> None:
        if not dt >= 0:
            raise GridError(f"Time step must be non-negative, got {dt}")

    def decay(self, dt: float) -> "LaplaceState":
        """Exact free decay: F <- F * exp(-s dt)"""
        self._check_dt(dt)
        if dt > 0:
            self.F *= np.exp(-self.grid.s_values * dt)[:, None]
            self.now += dt
        return self

    def inject(self, stimulus: str, magnitude: float = 1.0) -> "LaplaceState":
        """Delta input of the given area; every s-node of the column jumps"""
        if not math.isfinite(magnitude):
            raise InputError(f"Input magnitude must be finite, got {magnitude}")
        self.F[:, self.vocab.index(stimulus)] += magnitude
        return self

    def inject_vector(self, f_now: np.ndarray) -> "LaplaceState":
        """Simultaneous delta inputs for several stimuli"""
        f_now = self.vocab.check_vector(f_now, "present input")
        _check_finite(f_now)
        self.F += f_now[None, :]
        return self

    def step_constant(self, inputs: np.ndarray, dt: float) -> "LaplaceState":
        """Exact update for an input held constant over dt"""
        self._check_dt(dt)
        inputs = self.vocab.check_vector(inputs, "constant input")
        _check_finite(inputs)
        s = self.grid.s_values
        decay = np.exp(-s * dt)
        gain = -np.expm1(-s * dt) / s
        self.F = self.F * decay[:, None] + gain[:, None] * inputs[None, :]
        self.now += dt
        return self

    def invert(self) -> PastTimeline:
        """Post-approximation inverse of the current F"""
        operator = inverse_operator(self.grid)
        if self.F.shape[0] != operator.shape[1]:
            raise ShapeMismatchError(
                f"F has {self.F.shape[0]} s-nodes, operator expects {operator.shape[1]}"
            )
        return PastTimeline(self.grid, self.vocab, operator @ self.F)

    def laplace_rows(self) -> np.ndarray:
        """F at the exposed nodes only"""
        k = self.grid.k
        return self.F[k:k + self.grid.n_units]


def new_state(grid: TaustarGrid, vocab: StimulusVocabulary) -> LaplaceState:
    """All-zero integrator bank at time 0"""
    return LaplaceState(grid, vocab)


def impulse_response_analytic(grid: TaustarGrid, tau_star: float, t: ArrayLike) -> ArrayLike:
    """
    Exact Post response to a unit delta observed t after onset:
    (k^(k+1)/k!) (1/tau*) (t/tau*)^k exp(-k t/tau*).
    """
    if not tau_star > 0:
        raise GridError(f"tau_star must be positive, got {tau_star}")
    k = grid.k
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise GridError("Elapsed time must be non-negative")
    ratio = t / tau_star
    value = (k ** (k + 1) / math.factorial(k)) / tau_star * ratio ** k * np.exp(-k * ratio)
    return float(value) if value.ndim == 0 else value
