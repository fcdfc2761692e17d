"""
Future timeline, values and scanning queries.

A prediction p is the contraction of M-bar with the present input. Values sum
reward-weighted predictions over nodes: with log-spaced nodes the plain node
sum realises the integral against the number density 1/tau*, which is what
makes the cached value a power law of delay with exponent -1.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy.signal import find_peaks

from ..events.event_types import StimulusVocabulary
from .association import NormalizedTensor
from .errors import ShapeMismatchError, WindowError
from .grid import TaustarGrid, node_measure


logger = structlog.get_logger(__name__)

PEAK_PROMINENCE = 0.05
UNRESOLVED_VALLEY = 0.5


@dataclass(frozen=True, eq=False)
class FuturePrediction:
    """p[j, i]: expected presence of stimulus i at future lag taus[j]"""
    grid: TaustarGrid
    vocab: StimulusVocabulary
    p: np.ndarray

    def row(self, stimulus: str) -> np.ndarray:
        return self.p[:, self.vocab.index(stimulus)]

    def mass(self, stimulus: str) -> np.ndarray:
        """Per-node probability mass p * dtau*"""
        return self.row(stimulus) * node_measure(self.grid)

    def total_mass(self, stimulus: str) -> float:
        return float(self.mass(stimulus).sum())

    def peak_node(self, stimulus: str) -> int:
        """Node of largest per-node mass; sits at the predicted lag"""
        return int(np.argmax(self.mass(stimulus)))

    def bumps(self, stimulus: str) -> List["Bump"]:
        return bump_masses(self, stimulus)


@dataclass(frozen=True)
class Bump:
    """Contiguous node range around one peak of a prediction row"""
    start: int
    stop: int
    peak: int
    peak_tau: float
    mass: float
    resolved: bool = True


@dataclass(frozen=True)
class RewardVector:
    """Signed value of each state"""
    r: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.r)):
            raise ShapeMismatchError("Reward values must be finite")

    @classmethod
    def from_mapping(cls, vocab: StimulusVocabulary, values: Mapping[str, float]) -> "RewardVector":
        return cls(vocab.vector(values))

    def scaled(self, factor: float) -> "RewardVector":
        return RewardVector(self.r * factor)


class WindowKind(str, Enum):
    RECTANGULAR = "rectangular"
    TABULATED = "tabulated"


@dataclass(frozen=True, eq=False)
class TemporalWindow:
    """Weighting over future lags; rectangular edges snap to nodes inclusively"""
    kind: WindowKind
    lo: float = 0.0
    hi: float = math.inf
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind is WindowKind.RECTANGULAR:
            if not (0 <= self.lo < self.hi):
                raise WindowError(f"Rectangular window needs 0 <= lo < hi, got [{self.lo}, {self.hi}]")
        else:
            if self.weights is None:
                raise WindowError("Tabulated window needs weights")
            weights = np.asarray(self.weights, dtype=float)
            if not np.all(np.isfinite(weights)) or np.any(weights < 0) or np.any(weights > 1):
                raise WindowError("Tabulated weights must be finite and within [0, 1]")

    @classmethod
    def rectangular(cls, lo: float, hi: float = math.inf) -> "TemporalWindow":
        return cls(WindowKind.RECTANGULAR, float(lo), float(hi))

    @classmethod
    def tabulated(cls, weights: Sequence[float]) -> "TemporalWindow":
        return cls(WindowKind.TABULATED, weights=np.asarray(weights, dtype=float))

    def weights_for(self, grid: TaustarGrid) -> np.ndarray:
        if self.kind is WindowKind.RECTANGULAR:
            taus = grid.taus
            return ((taus >= self.lo) & (taus <= self.hi)).astype(float)
        weights = np.asarray(self.weights, dtype=float)
        if weights.shape != (grid.n_units,):
            raise WindowError(
                f"Tabulated window has {weights.shape} weights, grid has {grid.n_units} nodes"
            )
        return weights


class ScanMeasure(str, Enum):
    """Quantity compared against the scan threshold"""
    DENSITY = "density"
    MASS = "mass"


def _check_shapes(M_bar: NormalizedTensor, f_now: np.ndarray) -> np.ndarray:
    return M_bar.vocab.check_vector(f_now, "present input")


def predict(M_bar: NormalizedTensor, f_now: np.ndarray) -> FuturePrediction:
    """p[j, b] = sum_i M_bar[j, b, i] f_now[i]"""
    f_now = _check_shapes(M_bar, f_now)
    p = np.einsum("jbi,i->jb", M_bar.M_bar, f_now)
    return FuturePrediction(M_bar.grid, M_bar.vocab, p)


def predict_state(M_bar: NormalizedTensor, alpha: str) -> FuturePrediction:
    """Prediction cued by a single stimulus: the slice M_bar[:, :, alpha]"""
    index = M_bar.vocab.index(alpha)
    return FuturePrediction(M_bar.grid, M_bar.vocab, M_bar.M_bar[:, :, index].copy())


def _check_rewards(p: FuturePrediction, rewards: RewardVector) -> np.ndarray:
    r = np.asarray(rewards.r, dtype=float)
    if r.shape != (len(p.vocab),):
        raise ShapeMismatchError(f"Reward vector has shape {r.shape}, expected ({len(p.vocab)},)")
    return r


def value_profile(p: FuturePrediction, rewards: RewardVector) -> np.ndarray:
    """Signed value contributed by each future node"""
    return p.p @ _check_rewards(p, rewards)


def cached_value(p: FuturePrediction, rewards: RewardVector) -> float:
    """V = sum_j sum_i r_i p[j, i]"""
    return float(value_profile(p, rewards).sum())


def windowed_value(p: FuturePrediction, rewards: RewardVector, window: TemporalWindow) -> float:
    """V = sum_j sum_i r_i p[j, i] w[j]"""
    return float(value_profile(p, rewards) @ window.weights_for(p.grid))


def horizon_values(p: FuturePrediction, rewards: RewardVector,
                   horizons: Iterable[float]) -> Dict[float, float]:
    """Windowed values for windows [0, h], one per horizon h"""
    return {
        h: windowed_value(p, rewards, TemporalWindow.rectangular(0.0, h))
        for h in horizons
    }


def choose(values: Mapping[str, float], tolerance: float = 0.0) -> Optional[str]:
    """
    Label with the largest value, or None when the best two are within the
    relative tolerance of each other.
    """
    if not values:
        return None
    ranked = sorted(values.items(), key=lambda item: item[1], reverse=True)
    if len(ranked) > 1 and tolerance > 0:
        best, runner_up = ranked[0][1], ranked[1][1]
        scale = max(abs(best), abs(runner_up))
        if scale == 0 or abs(best - runner_up) <= tolerance * scale:
            return None
    return ranked[0][0]


def _scan_values(p: FuturePrediction, target: str, measure: ScanMeasure) -> np.ndarray:
    if ScanMeasure(measure) is ScanMeasure.MASS:
        return p.mass(target)
    return p.row(target)


def scan_future(p: FuturePrediction, target: str, threshold: float,
                measure: ScanMeasure = ScanMeasure.DENSITY) -> Optional[Tuple[int, float]]:
    """
    Visit nodes from the nearest future outwards and stop at the first one
    where the target reaches threshold. Returns (node index, tau*); the index
    doubles as the scan cost.
    """
    if not threshold > 0:
        raise WindowError(f"Scan threshold must be positive, got {threshold}")
    values = _scan_values(p, target, measure)
    hits = np.flatnonzero(values >= threshold)
    if hits.size == 0:
        return None
    j = int(hits[0])
    return j, float(p.grid.taus[j])


@dataclass(frozen=True)
class ProbeComparison:
    """Outcome of scanning for two probes"""
    first: Optional[str]
    cost: Optional[int]
    costs: Dict[str, Optional[int]]


def compare_probes(p: FuturePrediction, probe_a: str, probe_b: str, threshold: float,
                   measure: ScanMeasure = ScanMeasure.DENSITY) -> ProbeComparison:
    """
    Which of two probes is expected sooner. The scan stops at the more
    imminent probe, so the cost depends on that probe's lag only.
    """
    costs: Dict[str, Optional[int]] = {}
    for probe in (probe_a, probe_b):
        hit = scan_future(p, probe, threshold, measure)
        costs[probe] = None if hit is None else hit[0]

    found = [(cost, probe) for probe, cost in costs.items() if cost is not None]
    if not found:
        return ProbeComparison(first=None, cost=None, costs=costs)
    cost, first = min(found)
    if costs[probe_a] == costs[probe_b]:
        first = None
    return ProbeComparison(first=first, cost=cost, costs=costs)


def bump_masses(p: FuturePrediction, stimulus: str) -> List[Bump]:
    """
    Split a prediction row into bumps and integrate each over its node range.
    Ranges are separated at the minimum between neighbouring peaks; a shallow
    valley marks both neighbours unresolved.
    """
    mass = p.mass(stimulus)
    top = float(mass.max()) if mass.size else 0.0
    if top <= 0:
        return []

    peaks, _ = find_peaks(np.concatenate(([0.0], mass, [0.0])), prominence=PEAK_PROMINENCE * top)
    peaks = peaks - 1
    if peaks.size == 0:
        peaks = np.array([int(np.argmax(mass))])

    edges = [0]
    resolved = [True] * len(peaks)
    for i in range(len(peaks) - 1):
        left, right = peaks[i], peaks[i + 1]
        valley = left + int(np.argmin(mass[left:right + 1]))
        edges.append(valley)
        if mass[valley] > UNRESOLVED_VALLEY * min(mass[left], mass[right]):
            resolved[i] = resolved[i + 1] = False
    edges.append(len(mass))

    bumps = []
    for i, peak in enumerate(peaks):
        start, stop = edges[i], edges[i + 1]
        bumps.append(Bump(
            start=int(start),
            stop=int(stop),
            peak=int(peak),
            peak_tau=float(p.grid.taus[peak]),
            mass=float(mass[start:stop].sum()),
            resolved=resolved[i],
        ))
    if not all(resolved):
        logger.warning("bumps_unresolved", stimulus=stimulus, peaks=[int(x) for x in peaks])
    return bumps
