"""
Configuration management for scalefuture.
Every run is described by a RunConfig; outputs embed it so that a run can be
reproduced from any file it wrote.
"""
import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import GridError, ScenarioError, SnapshotError


CONFIG_HEADER_PREFIX = "# config: "
SNAPSHOT_FORMAT = "scalefuture-tensor"

DEFAULT_SEED = 20190101
DEFAULT_OUTPUT_DIR = "results"
RELATIVE_EPSILON = 1e-12


class NormalizationAxis(str, Enum):
    """Denominator used when turning M into M-bar"""
    PAST = "past"
    PRESENT = "present"
    EXPOSURE = "exposure"


class GridConfig(BaseModel):
    """Parameters of the log-spaced timeline grid"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    tau_min: float = 0.5
    tau_max: float = 100.0
    n_units: int = 64
    k: int = 4

    @model_validator(mode="after")
    def _check_stencil(self) -> "GridConfig":
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
        return self


class RunConfig(BaseModel):
    """Everything that determines the bytes of an output file"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    grid: GridConfig = Field(default_factory=GridConfig)
    scenario: Optional[str] = None
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)
    episodes_per_choice: int = Field(default=1, ge=1)
    output_dir: str = DEFAULT_OUTPUT_DIR
    strict: bool = False
    axis: NormalizationAxis = NormalizationAxis.PAST
    epsilon: Optional[float] = Field(default=None, gt=0)
    learning_rate: float = 1.0

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a JSON-compatible dictionary"""
        return self.model_dump(mode="json")

    def header_line(self) -> str:
        """Render the `# config:` header line embedded in every output"""
        return CONFIG_HEADER_PREFIX + json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """Create from dictionary"""
        return cls.model_validate(data)


def _config_from_header(line: str) -> RunConfig:
    try:
        return RunConfig.from_dict(json.loads(line[len(CONFIG_HEADER_PREFIX):]))
    except (json.JSONDecodeError, ValidationError) as e:
        raise ScenarioError(f"Malformed embedded config: {e}") from e


def load_config(path: Path) -> RunConfig:
    """
    Load a RunConfig from a JSON file, from the header of a CSV written by
    this tool, or from the header of a tensor snapshot.
    """
    path = Path(path)
    with open(path, "rb") as f:
        first = f.readline()
        rest = f.read()

    try:
        first_text = first.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ScenarioError(f"{path} is not a config-bearing file") from e

    if first_text.startswith("#"):
        for line in (first_text + rest.decode("utf-8")).splitlines():
            if line.startswith(CONFIG_HEADER_PREFIX):
                return _config_from_header(line)
            if not line.startswith("#"):
                break
        raise ScenarioError(f"No embedded config found in {path}")

    try:
        header = json.loads(first_text)
    except json.JSONDecodeError:
        header = None
    if isinstance(header, dict) and header.get("format") == SNAPSHOT_FORMAT:
        if "config" not in header:
            raise SnapshotError(f"Snapshot {path} carries no config")
        return RunConfig.from_dict(header["config"])

    try:
        return RunConfig.from_dict(json.loads(first + rest))
    except json.JSONDecodeError as e:
        raise ScenarioError(f"Invalid config JSON: {e.msg}", e.lineno, e.colno) from e
    except ValidationError as e:
        raise ScenarioError(f"Invalid config: {e}") from e
