"""
Tensor snapshot files.

Layout: one line of JSON header, then the raw little-endian float64 values of
M in (tau*, present, past) row-major order. The header carries the grid,
vocabulary, bookkeeping and a sha256 of the payload.
"""
import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import structlog

from ..core.association import AssociativeTensor
from ..core.config import SNAPSHOT_FORMAT, RunConfig
from ..core.errors import ConfigMismatchError, SnapshotError
from ..core.grid import TaustarGrid, build_grid
from ..events.event_types import StimulusVocabulary
from .tables import atomic_write


logger = structlog.get_logger(__name__)

SNAPSHOT_VERSION = 1
PAYLOAD_DTYPE = "<f8"


def encode_snapshot(memory: AssociativeTensor, config: Optional[RunConfig] = None) -> bytes:
    payload = np.ascontiguousarray(memory.M, dtype=PAYLOAD_DTYPE).tobytes(order="C")
    header = {
        "format": SNAPSHOT_FORMAT,
        "version": SNAPSHOT_VERSION,
        "grid": memory.grid.to_dict(),
        "vocab": list(memory.vocab.names),
        "episodes_seen": int(memory.episodes_seen),
        "presentations": [int(count) for count in memory.presentations],
        "shape": list(memory.M.shape),
        "dtype": PAYLOAD_DTYPE,
        "sha256": hashlib.sha256(payload).hexdigest(),
        "config": config.to_dict() if config is not None else None,
    }
    return json.dumps(header, sort_keys=True).encode("utf-8") + b"\n" + payload


def save(memory: AssociativeTensor, destination: Union[str, Path],
         config: Optional[RunConfig] = None) -> Path:
    """Write a snapshot atomically; an interrupted save leaves no partial file"""
    path = atomic_write(destination, encode_snapshot(memory, config))
    logger.info("snapshot_saved", path=str(path), episodes_seen=memory.episodes_seen)
    return path


def _parse_header(line: bytes) -> Dict[str, Any]:
    try:
        header = json.loads(line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise SnapshotError(f"Unreadable snapshot header: {e}") from e
    if not isinstance(header, dict) or header.get("format") != SNAPSHOT_FORMAT:
        raise SnapshotError("Not a tensor snapshot")
    if header.get("version") != SNAPSHOT_VERSION:
        raise SnapshotError(
            f"Unsupported snapshot version {header.get('version')!r}, expected {SNAPSHOT_VERSION}"
        )
    if header.get("dtype") != PAYLOAD_DTYPE:
        raise SnapshotError(f"Unsupported payload dtype {header.get('dtype')!r}")
    return header


def decode_snapshot(data: bytes, expected_grid: Optional[TaustarGrid] = None,
                    expected_vocab: Optional[StimulusVocabulary] = None) -> AssociativeTensor:
    newline = data.find(b"\n")
    if newline < 0:
        raise SnapshotError("Snapshot header is truncated")
    header = _parse_header(data[:newline])
    payload = data[newline + 1:]

    try:
        grid = build_grid(**header["grid"])
        vocab = StimulusVocabulary(tuple(header["vocab"]))
        shape = tuple(int(n) for n in header["shape"])
        presentations = np.array(header["presentations"], dtype=np.int64)
        episodes_seen = int(header["episodes_seen"])
    except (KeyError, TypeError, ValueError) as e:
        raise SnapshotError(f"Malformed snapshot header: {e}") from e

    if shape != (grid.n_units, len(vocab), len(vocab)) or presentations.shape != (len(vocab),):
        raise SnapshotError(f"Snapshot shape {shape} inconsistent with its grid and vocabulary")
    expected_bytes = int(np.prod(shape)) * np.dtype(PAYLOAD_DTYPE).itemsize
    if len(payload) != expected_bytes:
        raise SnapshotError(
            f"Snapshot payload has {len(payload)} bytes, expected {expected_bytes}"
        )
    if hashlib.sha256(payload).hexdigest() != header.get("sha256"):
        raise SnapshotError("Snapshot checksum mismatch")

    if expected_grid is not None and grid != expected_grid:
        raise ConfigMismatchError(
            f"Snapshot grid ({grid.describe()}) differs from configured grid ({expected_grid.describe()})"
        )
    if expected_vocab is not None and vocab != expected_vocab:
        raise ConfigMismatchError(
            f"Snapshot vocabulary {list(vocab)} differs from expected {list(expected_vocab)}"
        )

    M = np.frombuffer(payload, dtype=PAYLOAD_DTYPE).reshape(shape).astype(np.float64)
    return AssociativeTensor(grid, vocab, M, presentations, episodes_seen)


def load(source: Union[str, Path], expected_grid: Optional[TaustarGrid] = None,
         expected_vocab: Optional[StimulusVocabulary] = None) -> AssociativeTensor:
    """Read a snapshot; any inconsistency raises before a tensor is returned"""
    with open(source, "rb") as f:
        data = f.read()
    memory = decode_snapshot(data, expected_grid, expected_vocab)
    logger.debug("snapshot_loaded", path=str(source), **memory.grid.to_dict())
    return memory


def snapshot_config(source: Union[str, Path]) -> Optional[RunConfig]:
    """The RunConfig embedded in a snapshot header, if any"""
    with open(source, "rb") as f:
        header = _parse_header(f.readline().rstrip(b"\n"))
    if header.get("config") is None:
        return None
    return RunConfig.from_dict(header["config"])
