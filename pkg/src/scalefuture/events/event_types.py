"""
Stimulus vocabulary and timed event structures.
Events are Dirac deltas: a stimulus, an onset time and an area (magnitude).
"""
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Tuple

import numpy as np

from ..core.errors import ScenarioError, ShapeMismatchError, StimulusError


@dataclass(frozen=True)
class StimulusVocabulary:
    """Ordered set of distinct stimulus names (states, reward states included)"""
    names: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        seen = set()
        for name in self.names:
            if name in seen:
                raise ScenarioError(f"Duplicate stimulus name: {name!r}")
            seen.add(name)

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise StimulusError(name) from None

    def one_hot(self, name: str, magnitude: float = 1.0) -> np.ndarray:
        vector = np.zeros(len(self))
        vector[self.index(name)] = magnitude
        return vector

    def vector(self, values: Mapping[str, float]) -> np.ndarray:
        """Dense vector from a name -> value mapping; absent names are zero"""
        vector = np.zeros(len(self))
        for name, value in values.items():
            vector[self.index(name)] = value
        return vector

    def check_vector(self, vector: np.ndarray, what: str = "input") -> np.ndarray:
        vector = np.asarray(vector, dtype=float)
        if vector.shape != (len(self),):
            raise ShapeMismatchError(
                f"{what} has shape {vector.shape}, expected ({len(self)},)"
            )
        return vector


@dataclass(frozen=True)
class Event:
    """A delta-function input of a stimulus at a time"""
    time: float
    stimulus: str
    magnitude: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.magnitude):
            raise ScenarioError(f"Event magnitude must be finite, got {self.magnitude}")
        if not math.isfinite(self.time):
            raise ScenarioError(f"Event time must be finite, got {self.time}")

    def to_dict(self) -> Dict[str, Any]:
        return {"time": self.time, "stimulus": self.stimulus, "magnitude": self.magnitude}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Event":
        return cls(
            time=float(data["time"]),
            stimulus=data["stimulus"],
            magnitude=float(data.get("magnitude", 1.0)),
        )


@dataclass(frozen=True)
class EventStream:
    """Time-ordered sequence of events"""
    events: Tuple[Event, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        for earlier, later in zip(self.events, self.events[1:]):
            if later.time < earlier.time:
                raise ScenarioError(
                    f"Event times must be non-decreasing ({later.time} after {earlier.time})"
                )

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def grouped(self) -> List[Tuple[float, List[Event]]]:
        """Events bundled by identical onset time, in time order"""
        groups: List[Tuple[float, List[Event]]] = []
        for event in self.events:
            if groups and groups[-1][0] == event.time:
                groups[-1][1].append(event)
            else:
                groups.append((event.time, [event]))
        return groups

    def key(self) -> Tuple[Tuple[float, str, float], ...]:
        return tuple((e.time, e.stimulus, e.magnitude) for e in self.events)

    def to_dict(self) -> Dict[str, Any]:
        return {"events": [e.to_dict() for e in self.events]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EventStream":
        return cls(tuple(Event.from_dict(e) for e in data.get("events", [])))


@dataclass(frozen=True)
class Episode:
    """One presentation: the choice at t = 0 followed by its sampled outcomes"""
    choice: str
    stream: EventStream
    branch: int = 0

    def __post_init__(self):
        events = self.stream.events
        if not events or events[0] != Event(0.0, self.choice, 1.0):
            raise ScenarioError(
                f"Episode for {self.choice!r} must start with the choice at t = 0"
            )

    def to_dict(self) -> Dict[str, Any]:
        return {"choice": self.choice, "branch": self.branch, **self.stream.to_dict()}


def create_episode(choice: str, outcomes: Iterable[Tuple[float, str, float]],
                   branch: int = 0) -> Episode:
    """Create an episode from (delay, stimulus, magnitude) outcome triples"""
    events = [Event(0.0, choice, 1.0)]
    events.extend(
        Event(float(delay), stimulus, float(magnitude))
        for delay, stimulus, magnitude in sorted(outcomes, key=lambda o: o[0])
    )
    return Episode(choice=choice, stream=EventStream(tuple(events)), branch=branch)


def create_sequence(items: Iterable[Tuple[float, str]]) -> EventStream:
    """Create a unit-magnitude event stream from (time, stimulus) pairs"""
    return EventStream(tuple(Event(float(t), name, 1.0) for t, name in items))
