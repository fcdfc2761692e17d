"""
CSV result tables with provenance headers.

Every table starts with `#` lines: the embedded run config, the grid, any
extra metadata and warnings. Floats are written with repr so that identical
runs produce identical bytes. Files are replaced atomically.
"""
import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from ..core.config import CONFIG_HEADER_PREFIX, RunConfig
from ..core.grid import TaustarGrid


logger = structlog.get_logger(__name__)

GRID_HEADER_PREFIX = "# grid: "
WARNING_HEADER_PREFIX = "# warning: "


@dataclass
class Table:
    """Rows of one result file plus its header annotations"""
    columns: List[str]
    rows: List[Tuple[Any, ...]] = field(default_factory=list)
    meta: Dict[str, Any] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    def add_row(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"Row has {len(values)} values, table has {len(self.columns)} columns")
        self.rows.append(tuple(values))

    def column(self, name: str) -> List[Any]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def render_table(table: Table, config: Optional[RunConfig] = None,
                 grid: Optional[TaustarGrid] = None) -> str:
    buffer = io.StringIO()
    if config is not None:
        buffer.write(config.header_line() + "\n")
    if grid is not None:
        buffer.write(GRID_HEADER_PREFIX + grid.describe() + "\n")
    for key in sorted(table.meta):
        value = table.meta[key]
        if not isinstance(value, str):
            value = json.dumps(value, sort_keys=True)
        buffer.write(f"# {key}: {value}\n")
    for warning in table.warnings:
        buffer.write(WARNING_HEADER_PREFIX + warning + "\n")

    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(value) for value in row])
    return buffer.getvalue()


def atomic_write(path: Union[str, Path], data: bytes) -> Path:
    """Write to a temporary file in the target directory, then rename over path"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(temp_name, path)
    except BaseException:
        if os.path.exists(temp_name):
            os.unlink(temp_name)
        raise
    return path


def write_table(path: Union[str, Path], table: Table, config: Optional[RunConfig] = None,
                grid: Optional[TaustarGrid] = None) -> Path:
    written = atomic_write(path, render_table(table, config, grid).encode("utf-8"))
    logger.debug("table_written", path=str(written), rows=len(table.rows))
    return written


@dataclass
class ParsedTable:
    header: List[str]
    columns: List[str]
    rows: List[List[str]]

    @property
    def warnings(self) -> List[str]:
        return [line[len(WARNING_HEADER_PREFIX):] for line in self.header
                if line.startswith(WARNING_HEADER_PREFIX)]

    @property
    def config(self) -> Optional[Dict[str, Any]]:
        for line in self.header:
            if line.startswith(CONFIG_HEADER_PREFIX):
                return json.loads(line[len(CONFIG_HEADER_PREFIX):])
        return None


def read_table(path: Union[str, Path]) -> ParsedTable:
    """Split a table written by write_table into header lines and cells"""
    with open(path, "r", encoding="utf-8", newline="") as f:
        lines = f.read().splitlines()
    header = [line for line in lines if line.startswith("#")]
    body: Sequence[str] = [line for line in lines if not line.startswith("#")]
    reader = list(csv.reader(body))
    if not reader:
        return ParsedTable(header, [], [])
    return ParsedTable(header, reader[0], reader[1:])
