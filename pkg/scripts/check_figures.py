#!/usr/bin/env python3
"""
Smoke check for the figure suite and the snapshot round trip.
Runs the real pipelines end to end, no mocks.
"""
import sys
import tempfile
from pathlib import Path

import numpy as np

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from scalefuture.adapters import snapshot
from scalefuture.commands.figures import FIGURE_IDS, canonical_scenario, reproduce_figure
from scalefuture.core.config import RunConfig
from scalefuture.core.grid import TaustarGrid
from scalefuture.core.log import configure_logging
from scalefuture.events.simulator import train


def check_snapshot(config: RunConfig) -> bool:
    """Train fig4, save, load and compare"""
    print("Checking snapshot round trip...")
    grid = TaustarGrid.from_config(config.grid)
    memory = train(canonical_scenario("fig4"), 1, grid, np.random.default_rng(config.seed))

    with tempfile.TemporaryDirectory() as tmp:
        path = snapshot.save(memory, Path(tmp) / "fig4.tensor", config)
        restored = snapshot.load(path, grid, memory.vocab)

    if restored.equals(memory):
        print(f"✓ Snapshot restored bit-for-bit ({memory.M.nbytes} bytes of payload)")
        return True
    print("✗ Snapshot differs after reload")
    return False


def check_figures(config: RunConfig) -> bool:
    """Reproduce every figure and report its claims"""
    all_passed = True
    for fig_id in FIGURE_IDS:
        print(f"\nReproducing {fig_id}...")
        try:
            result = reproduce_figure(fig_id, config)
        except Exception as e:
            print(f"✗ {fig_id} failed with error: {e}")
            all_passed = False
            continue

        for claim in result.claims:
            mark = "✓" if claim.passed else "✗"
            print(f"  {mark} {claim.name}: {claim.detail}")
        for warning in result.table.warnings:
            print(f"  warning: {warning}")
        all_passed = all_passed and result.passed
    return all_passed


def main() -> int:
    configure_logging("WARNING")
    config = RunConfig()

    print("scalefuture figure check")
    print("=" * 50)
    print(f"  Grid: {TaustarGrid.from_config(config.grid).describe()}")
    print(f"  Seed: {config.seed}")

    if not check_snapshot(config):
        print("\n✗ Snapshot check failed. Skipping figures.")
        return 1

    passed = check_figures(config)
    print("\n" + "=" * 50)
    print("All claims hold" if passed else "Some claims failed")
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
