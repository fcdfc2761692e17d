"""
Hebbian associative tensor M over (tau*, present stimulus, past stimulus) and
its normalized form M-bar.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import structlog

from ..events.event_types import StimulusVocabulary
from .config import RELATIVE_EPSILON, NormalizationAxis
from .errors import NormalizationError, ShapeMismatchError
from .grid import TaustarGrid
from .laplace import PastTimeline


logger = structlog.get_logger(__name__)


@dataclass
class AssociativeTensor:
    """Raw accumulated outer products; never clamped or decayed"""
    grid: TaustarGrid
    vocab: StimulusVocabulary
    M: np.ndarray
    presentations: np.ndarray
    episodes_seen: int = 0

    @property
    def shape(self):
        return (self.grid.n_units, len(self.vocab), len(self.vocab))

    def _check_compatible(self, other: "AssociativeTensor") -> None:
        if other.grid != self.grid or other.vocab != self.vocab:
            raise ShapeMismatchError("Cannot combine tensors over different grids or vocabularies")

    def hebbian_update(self, f_now: np.ndarray, f_tilde: PastTimeline,
                       rate: float = 1.0) -> "AssociativeTensor":
        """M[j, b, a] += rate * f_now[b] * f_tilde[j, a]"""
        f_now = self.vocab.check_vector(f_now, "present input")
        if f_tilde.f_tilde.shape != (self.grid.n_units, len(self.vocab)):
            raise ShapeMismatchError(
                f"Past timeline has shape {f_tilde.f_tilde.shape}, "
                f"expected {(self.grid.n_units, len(self.vocab))}"
            )
        if np.any(f_now):
            self.M += rate * f_now[None, :, None] * f_tilde.f_tilde[:, None, :]
        return self

    def record_presentation(self, f_now: np.ndarray) -> None:
        """Count stimuli present in an event group (exposure normalization)"""
        self.presentations += np.asarray(f_now) != 0

    def merge(self, other: "AssociativeTensor") -> "AssociativeTensor":
        """Add another tensor's accumulations into this one"""
        self._check_compatible(other)
        self.M += other.M
        self.presentations += other.presentations
        self.episodes_seen += other.episodes_seen
        return self

    def slice(self, present: str, past: str) -> np.ndarray:
        """M[:, present, past], the lag profile of one association"""
        return self.M[:, self.vocab.index(present), self.vocab.index(past)]

    def equals(self, other: "AssociativeTensor") -> bool:
        """Bit-for-bit equality of contents and bookkeeping"""
        return (
            self.grid == other.grid
            and self.vocab == other.vocab
            and self.episodes_seen == other.episodes_seen
            and np.array_equal(self.presentations, other.presentations)
            and self.M.tobytes() == other.M.tobytes()
        )


@dataclass(frozen=True, eq=False)
class NormalizedTensor:
    """M-bar; rows at or below the floor are identically zero"""
    grid: TaustarGrid
    vocab: StimulusVocabulary
    M_bar: np.ndarray
    epsilon: float
    axis: NormalizationAxis = NormalizationAxis.PAST
    row_mask: Optional[np.ndarray] = None


def new_memory(grid: TaustarGrid, vocab: StimulusVocabulary) -> AssociativeTensor:
    """Zero tensor with no presentations recorded"""
    size = len(vocab)
    return AssociativeTensor(
        grid=grid,
        vocab=vocab,
        M=np.zeros((grid.n_units, size, size)),
        presentations=np.zeros(size, dtype=np.int64),
    )


def _denominators(values: np.ndarray, axis: NormalizationAxis,
                  presentations: Optional[np.ndarray]) -> np.ndarray:
    if axis is NormalizationAxis.PAST:
        return values.sum(axis=2, keepdims=True)
    if axis is NormalizationAxis.PRESENT:
        return values.sum(axis=1, keepdims=True)
    if presentations is None:
        raise ShapeMismatchError("Exposure normalization needs presentation counts")
    return np.broadcast_to(
        np.asarray(presentations, dtype=float)[None, None, :], values.shape
    )


def normalize_array(values: np.ndarray, axis: NormalizationAxis = NormalizationAxis.PAST,
                    epsilon: Optional[float] = None,
                    presentations: Optional[np.ndarray] = None):
    """
    Clamp negatives to zero and divide by the chosen denominator wherever it
    exceeds epsilon. Returns (normalized values, epsilon used, mask of
    denominators above the floor).
    """
    clamped = np.clip(values, 0.0, None)
    denominators = _denominators(clamped, axis, presentations)

    if epsilon is None:
        largest = float(denominators.max()) if denominators.size else 0.0
        epsilon = RELATIVE_EPSILON * largest if largest > 0 else np.finfo(float).tiny
    elif not epsilon > 0:
        raise NormalizationError(f"epsilon must be positive, got {epsilon}")

    above = denominators > epsilon
    safe = np.where(above, denominators, 1.0)
    normalized = np.where(np.broadcast_to(above, clamped.shape), clamped / safe, 0.0)
    return normalized, float(epsilon), above


def normalize(memory: AssociativeTensor, epsilon: Optional[float] = None,
              axis: NormalizationAxis = NormalizationAxis.PAST) -> NormalizedTensor:
    """
    M-bar from M. PAST divides by the sum over past stimuli for each
    (tau*, present); PRESENT by the sum over present stimuli for each
    (tau*, past); EXPOSURE by how often the past stimulus was presented.
    """
    axis = NormalizationAxis(axis)
    M_bar, used_epsilon, above = normalize_array(
        memory.M, axis, epsilon, memory.presentations
    )
    dropped = int(np.size(above) - np.count_nonzero(above))
    logger.debug("tensor_normalized", axis=axis.value, epsilon=used_epsilon,
                 rows_below_floor=dropped)
    return NormalizedTensor(memory.grid, memory.vocab, M_bar, used_epsilon, axis, above)
