"""
Scenario documents: timed stimulus/reward decision trees.

A scenario lists its states, the value of each state, and for every choice a
set of probabilistic branches. Each branch is a list of outcomes delivered at
fixed delays after the choice. Documents are JSON and parsed strictly.
"""
import json
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..core.errors import GridInteriorError, ScenarioError
from ..core.grid import TaustarGrid
from .event_types import StimulusVocabulary


logger = structlog.get_logger(__name__)

PROBABILITY_TOLERANCE = 1e-9


class OutcomeDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    state: str
    delay: float = Field(gt=0, allow_inf_nan=False)
    magnitude: float = Field(default=1.0, allow_inf_nan=False)


class BranchDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: float = Field(ge=0, le=1)
    outcomes: List[OutcomeDocument] = Field(default_factory=list)


class ScenarioDocument(BaseModel):
    """Schema of a scenario file; unknown keys are rejected"""
    model_config = ConfigDict(extra="forbid")

    states: List[str]
    rewards: Dict[str, float] = Field(default_factory=dict)
    time_scale: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    choices: Dict[str, List[BranchDocument]]


@dataclass(frozen=True)
class Outcome:
    state: str
    delay: float
    magnitude: float = 1.0


@dataclass(frozen=True)
class Branch:
    """One possible future of a choice, taken with probability p"""
    p: float
    outcomes: Tuple[Outcome, ...] = ()


@dataclass(frozen=True)
class Choice:
    label: str
    branches: Tuple[Branch, ...]

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([branch.p for branch in self.branches], dtype=float)


@dataclass(frozen=True)
class Scenario:
    """Validated decision tree; delays are unscaled, time_scale applies on sampling"""
    vocab: StimulusVocabulary
    choices: Tuple[Choice, ...]
    rewards: Tuple[Tuple[str, float], ...] = ()
    time_scale: float = 1.0

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(choice.label for choice in self.choices)

    def choice(self, label: str) -> Choice:
        for choice in self.choices:
            if choice.label == label:
                return choice
        raise ScenarioError(f"Unknown choice: {label!r}")

    def reward_values(self) -> Dict[str, float]:
        return dict(self.rewards)

    def reward_array(self) -> np.ndarray:
        return self.vocab.vector(self.reward_values())

    def scaled(self, factor: float) -> "Scenario":
        """Same tree with every delay stretched by factor"""
        if not factor > 0:
            raise ScenarioError(f"Time scale factor must be positive, got {factor}")
        return Scenario(self.vocab, self.choices, self.rewards, self.time_scale * factor)

    def delays(self) -> List[float]:
        """All outcome delays after time scaling"""
        return [
            outcome.delay * self.time_scale
            for choice in self.choices
            for branch in choice.branches
            for outcome in branch.outcomes
        ]

    def check_interior(self, grid: TaustarGrid, strict: bool = False) -> List[str]:
        """
        Warnings for delays outside the grid interior. In strict mode the
        first violation raises GridInteriorError instead.
        """
        lo, hi = grid.interior_bounds()
        warnings = []
        for delay in sorted(set(self.delays())):
            if grid.in_interior(delay):
                continue
            message = f"delay {delay!r} outside grid interior [{lo!r}, {hi!r}]"
            if strict:
                raise GridInteriorError(message)
            logger.warning("delay_outside_interior", delay=delay, lo=lo, hi=hi)
            warnings.append(message)
        return warnings

    def to_dict(self) -> Dict[str, Any]:
        return {
            "states": list(self.vocab.names),
            "rewards": dict(self.rewards),
            "time_scale": self.time_scale,
            "choices": {
                choice.label: [
                    {
                        "p": branch.p,
                        "outcomes": [
                            {"state": o.state, "delay": o.delay, "magnitude": o.magnitude}
                            for o in branch.outcomes
                        ],
                    }
                    for branch in choice.branches
                ]
                for choice in self.choices
            },
        }


def _reject_duplicate_keys(pairs: List[Tuple[str, Any]]) -> Dict[str, Any]:
    result: Dict[str, Any] = {}
    for key, value in pairs:
        if key in result:
            raise ScenarioError(f"Duplicate key: {key!r}")
        result[key] = value
    return result


def _format_location(loc: Tuple[Any, ...]) -> str:
    return "".join(f"[{part}]" if isinstance(part, int) else f".{part}" for part in loc).lstrip(".")


def _from_document(document: ScenarioDocument) -> Scenario:
    vocab = StimulusVocabulary(tuple(document.states))

    def known(name: str, where: str) -> str:
        if name not in vocab:
            raise ScenarioError(f"{where} refers to unknown state {name!r}")
        return name

    rewards = tuple((known(name, "rewards"), value) for name, value in document.rewards.items())

    if not document.choices:
        raise ScenarioError("Scenario declares no choices")

    choices = []
    for label, branch_documents in document.choices.items():
        known(label, f"choices.{label}")
        if not branch_documents:
            raise ScenarioError(f"Choice {label!r} has no branches")
        total = sum(branch.p for branch in branch_documents)
        if abs(total - 1.0) > PROBABILITY_TOLERANCE:
            raise ScenarioError(
                f"Branch probabilities of choice {label!r} sum to {total!r}, expected 1"
            )
        branches = tuple(
            Branch(
                p=branch.p,
                outcomes=tuple(
                    Outcome(known(o.state, f"choices.{label}"), o.delay, o.magnitude)
                    for o in branch.outcomes
                ),
            )
            for branch in branch_documents
        )
        choices.append(Choice(label, branches))

    return Scenario(vocab, tuple(choices), rewards, document.time_scale)


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a JSON scenario document"""
    try:
        raw = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"Invalid scenario JSON: {e.msg}", e.lineno, e.colno) from e

    try:
        document = ScenarioDocument.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise ScenarioError(
            f"{_format_location(first['loc']) or 'document'}: {first['msg']}"
        ) from e

    return _from_document(document)


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as f:
        return parse_scenario(f.read())


def serialize_scenario(scenario: Scenario) -> str:
    """Canonical JSON text; key order follows the schema, choices keep their order"""
    return json.dumps(scenario.to_dict(), indent=2) + "\n"


def create_scenario(states: List[str], choices: Dict[str, List[Dict[str, Any]]],
                    rewards: Optional[Dict[str, float]] = None,
                    time_scale: float = 1.0) -> Scenario:
    """Build a scenario from plain Python structures through the same validation"""
    document = {
        "states": list(states),
        "rewards": dict(rewards or {}),
        "time_scale": time_scale,
        "choices": choices,
    }
    return parse_scenario(json.dumps(document))
