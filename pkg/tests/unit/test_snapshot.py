import json

import numpy as np
import pytest

from scalefuture.adapters.snapshot import (
    decode_snapshot,
    encode_snapshot,
    load,
    save,
    snapshot_config,
)
from scalefuture.core.config import GridConfig, RunConfig, load_config
from scalefuture.core.errors import ConfigMismatchError, SnapshotError
from scalefuture.core.grid import build_grid
from scalefuture.events.event_types import StimulusVocabulary
from scalefuture.events.simulator import train


@pytest.fixture
def memory(fig4_scenario, grid):
    return train(fig4_scenario, 2, grid, np.random.default_rng(1))


def split(data):
    newline = data.index(b"\n")
    return json.loads(data[:newline]), data[newline + 1:]


def test_round_trip(tmp_path, memory, run_config):
    path = save(memory, tmp_path / "tensor.bin", run_config)
    restored = load(path, memory.grid, memory.vocab)
    assert restored.equals(memory)
    assert restored.M.flags.writeable


def test_saving_twice_gives_identical_bytes(tmp_path, memory, run_config):
    a = save(memory, tmp_path / "a.bin", run_config).read_bytes()
    b = save(memory, tmp_path / "b.bin", run_config).read_bytes()
    assert a == b
    assert not list(tmp_path.glob(".*"))


def test_header_contents(memory):
    header, payload = split(encode_snapshot(memory))
    assert header["grid"] == {"tau_min": 0.5, "tau_max": 100.0, "n_units": 64, "k": 4}
    assert header["vocab"] == ["alpha", "beta", "reward"]
    assert header["shape"] == [64, 3, 3]
    assert header["presentations"] == [2, 2, 4]
    assert header["episodes_seen"] == 4
    assert header["config"] is None
    assert len(payload) == 64 * 3 * 3 * 8


def test_grid_mismatch(memory):
    data = encode_snapshot(memory)
    with pytest.raises(ConfigMismatchError):
        decode_snapshot(data, expected_grid=build_grid(0.5, 100.0, 32, 4))
    with pytest.raises(ConfigMismatchError):
        decode_snapshot(data, expected_vocab=StimulusVocabulary(("alpha", "reward")))
    with pytest.raises(SnapshotError):
        decode_snapshot(data, expected_grid=build_grid(0.5, 100.0, 32, 4))


def test_truncated_payload(memory):
    data = encode_snapshot(memory)
    with pytest.raises(SnapshotError, match="bytes"):
        decode_snapshot(data[:-8])


def test_truncated_header(memory):
    data = encode_snapshot(memory)
    with pytest.raises(SnapshotError):
        decode_snapshot(data[:20])


def test_corrupted_payload(memory):
    data = bytearray(encode_snapshot(memory))
    data[-1] ^= 0xFF
    with pytest.raises(SnapshotError, match="checksum"):
        decode_snapshot(bytes(data))


def test_unsupported_version(memory):
    header, payload = split(encode_snapshot(memory))
    header["version"] = 99
    data = json.dumps(header, sort_keys=True).encode() + b"\n" + payload
    with pytest.raises(SnapshotError, match="version"):
        decode_snapshot(data)


def test_not_a_snapshot():
    with pytest.raises(SnapshotError):
        decode_snapshot(b'{"format": "something-else"}\n')
    with pytest.raises(SnapshotError):
        decode_snapshot(b"\x00\xff\n")


def test_embedded_config(tmp_path, memory):
    config = RunConfig(grid=GridConfig(), seed=99, episodes_per_choice=2, output_dir=str(tmp_path))
    path = save(memory, tmp_path / "tensor.bin", config)
    assert snapshot_config(path) == config
    assert load_config(path) == config

    bare = save(memory, tmp_path / "bare.bin")
    assert snapshot_config(bare) is None


@pytest.mark.parametrize("field, value", [
    ("episodes_seen", "many"),
    ("shape", [64, "three", 3]),
    ("presentations", ["x", 2, 4]),
])
def test_wrongly_typed_header_field(memory, field, value):
    header, payload = split(encode_snapshot(memory))
    header[field] = value
    data = json.dumps(header, sort_keys=True).encode() + b"\n" + payload
    with pytest.raises(SnapshotError, match="Malformed"):
        decode_snapshot(data)
