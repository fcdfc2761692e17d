"""
Continuous-time episode simulation and Hebbian training.

Each episode starts from a fresh integrator bank. At every event instant the
bank is decayed exactly to the event time, the past timeline is read out
before the new input lands, and the present input is associated with it.
Between events the learning integrand is zero, so event-time updates are
exact.
"""
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Sequence

import numpy as np
import structlog
from cachetools import LRUCache, cached

from ..core.association import AssociativeTensor, new_memory
from ..core.errors import ScenarioError
from ..core.grid import TaustarGrid
from ..core.laplace import LaplaceState, new_state
from .event_types import Episode, EventStream, StimulusVocabulary, create_episode
from .scenario import Scenario


logger = structlog.get_logger(__name__)


def sample_episode(scenario: Scenario, choice: str, rng: np.random.Generator) -> Episode:
    """Draw one branch of a choice and lay its outcomes out in time"""
    option = scenario.choice(choice)
    cumulative = np.cumsum(option.probabilities)
    u = rng.random()
    branch = min(int(np.searchsorted(cumulative, u, side="right")), len(option.branches) - 1)
    outcomes = [
        (outcome.delay * scenario.time_scale, outcome.state, outcome.magnitude)
        for outcome in option.branches[branch].outcomes
    ]
    return create_episode(choice, outcomes, branch)


def sample_episodes(scenario: Scenario, episodes_per_choice: int,
                    rng: np.random.Generator) -> List[Episode]:
    """All episodes for a training run, choice by choice, in a fixed order"""
    if episodes_per_choice < 1:
        raise ScenarioError(f"episodes_per_choice must be >= 1, got {episodes_per_choice}")
    return [
        sample_episode(scenario, label, rng)
        for label in scenario.labels
        for _ in range(episodes_per_choice)
    ]


def run_stream(stream: EventStream, grid: TaustarGrid, vocab: StimulusVocabulary,
               until: Optional[float] = None) -> LaplaceState:
    """Integrator bank after feeding every event up to time until"""
    state = new_state(grid, vocab)
    for onset, events in stream.grouped():
        if until is not None and onset > until:
            break
        state.decay(onset - state.now)
        for event in events:
            state.inject(event.stimulus, event.magnitude)
    if until is not None:
        if until < state.now:
            raise ScenarioError(f"Cannot stop at {until}, stream already reached {state.now}")
        state.decay(until - state.now)
    return state


def _group_vector(vocab: StimulusVocabulary, events) -> np.ndarray:
    f_now = np.zeros(len(vocab))
    for event in events:
        f_now[vocab.index(event.stimulus)] += event.magnitude
    return f_now


def _replay_key(stream: EventStream, grid: TaustarGrid, vocab: StimulusVocabulary,
                rate: float):
    return (grid.key(), vocab.names, float(rate), stream.key())


@cached(cache=LRUCache(maxsize=4096), key=_replay_key, lock=threading.Lock())
def _replay(stream: EventStream, grid: TaustarGrid, vocab: StimulusVocabulary,
            rate: float) -> AssociativeTensor:
    memory = new_memory(grid, vocab)
    state = new_state(grid, vocab)
    for onset, events in stream.grouped():
        state.decay(onset - state.now)
        past = state.invert()
        f_now = _group_vector(vocab, events)
        state.inject_vector(f_now)
        memory.hebbian_update(f_now, past, rate)
        memory.record_presentation(f_now)
    memory.episodes_seen = 1
    memory.M.flags.writeable = False
    memory.presentations.flags.writeable = False
    return memory


def _copy(memory: AssociativeTensor) -> AssociativeTensor:
    return AssociativeTensor(
        grid=memory.grid,
        vocab=memory.vocab,
        M=memory.M.copy(),
        presentations=memory.presentations.copy(),
        episodes_seen=memory.episodes_seen,
    )


def replay_stream(stream: EventStream, grid: TaustarGrid, vocab: StimulusVocabulary,
                  rate: float = 1.0) -> AssociativeTensor:
    """Partial tensor learned from one isolated event stream"""
    return _copy(_replay(stream, grid, vocab, rate))


def replay_episode(episode: Episode, grid: TaustarGrid, vocab: StimulusVocabulary,
                   rate: float = 1.0) -> AssociativeTensor:
    return replay_stream(episode.stream, grid, vocab, rate)


def train_episodes(episodes: Sequence[Episode], grid: TaustarGrid, vocab: StimulusVocabulary,
                   rate: float = 1.0, workers: int = 1) -> AssociativeTensor:
    """
    Replay episodes (in a thread pool when workers > 1) and sum the partial
    tensors in episode order, so the result does not depend on workers.
    """
    streams = [episode.stream for episode in episodes]

    def replay(stream: EventStream) -> AssociativeTensor:
        return _replay(stream, grid, vocab, rate)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials: Iterable[AssociativeTensor] = list(pool.map(replay, streams))
    else:
        partials = map(replay, streams)

    memory = new_memory(grid, vocab)
    for partial in partials:
        memory.merge(partial)
    return memory


def train(scenario: Scenario, episodes_per_choice: int, grid: TaustarGrid,
          rng: np.random.Generator, *, rate: float = 1.0, workers: int = 1) -> AssociativeTensor:
    """Sample every episode first, then replay and accumulate them"""
    started = time.perf_counter()
    episodes = sample_episodes(scenario, episodes_per_choice, rng)
    memory = train_episodes(episodes, grid, scenario.vocab, rate, workers)
    for warning in exposure_warnings(memory, scenario.labels):
        logger.warning("unequal_exposure", detail=warning)
    logger.info(
        "training_complete",
        episodes=len(episodes),
        distinct_streams=len({episode.stream.key() for episode in episodes}),
        workers=workers,
        wall_time=round(time.perf_counter() - started, 6),
    )
    return memory


def train_sequences(streams: Sequence[EventStream], grid: TaustarGrid,
                    vocab: StimulusVocabulary, rate: float = 1.0) -> AssociativeTensor:
    """Train on free-standing event sequences rather than scenario choices"""
    memory = new_memory(grid, vocab)
    for stream in streams:
        memory.merge(_replay(stream, grid, vocab, rate))
    return memory


def exposure_warnings(memory: AssociativeTensor, labels: Sequence[str]) -> List[str]:
    """Flag choices presented a different number of times from the others"""
    counts = {label: int(memory.presentations[memory.vocab.index(label)]) for label in labels}
    if len(set(counts.values())) <= 1:
        return []
    detail = ", ".join(f"{label}={count}" for label, count in counts.items())
    return [f"unequal exposure counts: {detail}"]
