"""
Command-line surface for scalefuture.

Subcommands build grids, train on scenarios, dump layers and tensors, compute
values and run the figure-reproduction suite. Every file written embeds the
RunConfig that produced it.
"""
import argparse
import json
import math
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np
import structlog
from pydantic import ValidationError

from ..adapters import snapshot
from ..adapters.tables import Table, atomic_write, write_table
from ..core.association import normalize
from ..core.config import NormalizationAxis, RunConfig, load_config
from ..core.errors import (
    ClaimFailure,
    ExitCode,
    GridInteriorError,
    ScaleFutureError,
    UsageError,
)
from ..core.future import (
    RewardVector,
    TemporalWindow,
    cached_value,
    choose,
    predict,
    predict_state,
    windowed_value,
)
from ..core.grid import TaustarGrid
from ..core.laplace import impulse_response_analytic, new_state
from ..core.log import configure_logging
from ..events.event_types import StimulusVocabulary
from ..events.scenario import Scenario, load_scenario
from ..events.simulator import run_stream, sample_episode, train
from .figures import FIGURE_IDS, reproduce_figure, summary_table


logger = structlog.get_logger(__name__)

IMPULSE_SPAN = 5.0
IMPULSE_STEPS = 500
IMPULSE_STIMULUS = "impulse"


def _grid(config: RunConfig) -> TaustarGrid:
    return TaustarGrid.from_config(config.grid)


def _output(config: RunConfig, output: Optional[str], default: str) -> Path:
    return Path(output) if output else Path(config.output_dir) / default


def _scenario(config: RunConfig) -> Scenario:
    if not config.scenario:
        raise UsageError("This command needs a scenario (--scenario)")
    return load_scenario(config.scenario)


def _rng(config: RunConfig) -> np.random.Generator:
    return np.random.default_rng(config.seed)


def cmd_impulse(config: RunConfig, tau_probe: float, duration: Optional[float] = None,
                steps: int = IMPULSE_STEPS, output: Optional[str] = None) -> Path:
    """Time course of the node nearest tau_probe after a unit delta, next to the exact curve"""
    grid = _grid(config)
    table = Table(["t", "node_tau", "discrete", "analytic"])
    if not grid.in_interior(tau_probe):
        lo, hi = grid.interior_bounds()
        message = f"probe {tau_probe!r} outside grid interior [{lo!r}, {hi!r}]"
        if config.strict:
            raise GridInteriorError(message)
        logger.warning("probe_outside_interior", tau_probe=tau_probe, lo=lo, hi=hi)
        table.warnings.append(message)

    duration = IMPULSE_SPAN * tau_probe if duration is None else duration
    if duration < 0 or steps < 0:
        raise UsageError("duration and steps must be non-negative")
    node = grid.nearest_node(tau_probe)
    node_tau = float(grid.taus[node])

    if duration > 0 and steps > 0:
        state = new_state(grid, StimulusVocabulary((IMPULSE_STIMULUS,))).inject(IMPULSE_STIMULUS)
        dt = duration / steps
        for i in range(1, steps + 1):
            t = i * dt
            state.decay(t - state.now)
            discrete = state.invert().f_tilde[node, 0]
            table.add_row(t, node_tau, discrete, impulse_response_analytic(grid, node_tau, t))

    table.meta["impulse"] = {"tau_probe": tau_probe, "duration": duration, "steps": steps}
    return write_table(_output(config, output, "impulse.csv"), table, config, grid)


def cmd_train(config: RunConfig, destination: Optional[str] = None, workers: int = 1) -> Path:
    """Train on the configured scenario and write a tensor snapshot plus a run log"""
    scenario = _scenario(config)
    grid = _grid(config)
    warnings = scenario.check_interior(grid, config.strict)

    started = time.perf_counter()
    memory = train(scenario, config.episodes_per_choice, grid, _rng(config),
                   rate=config.learning_rate, workers=workers)
    wall_time = time.perf_counter() - started

    stem = Path(config.scenario).stem
    path = snapshot.save(memory, _output(config, destination, f"{stem}.tensor"), config)
    run_log = {
        "episodes": memory.episodes_seen,
        "episodes_per_choice": config.episodes_per_choice,
        "wall_time": wall_time,
        "workers": workers,
        "warnings": warnings,
    }
    atomic_write(path.with_name(path.name + ".log.json"),
                 (json.dumps(run_log, indent=2, sort_keys=True) + "\n").encode("utf-8"))
    return path


def _parse_probes(probes: Sequence[str]) -> Dict[str, float]:
    weights: Dict[str, float] = {}
    for probe in probes:
        name, _, weight = probe.partition("=")
        try:
            weights[name] = weights.get(name, 0.0) + (float(weight) if weight else 1.0)
        except ValueError:
            raise UsageError(f"Invalid probe weight in {probe!r}") from None
    return weights


def cmd_predict(config: RunConfig, source: str, probes: Sequence[str],
                output: Optional[str] = None) -> Path:
    """Future timeline cued by one stimulus (or a weighted mix of several)"""
    grid = _grid(config)
    memory = snapshot.load(source, expected_grid=grid)
    M_bar = normalize(memory, config.epsilon, config.axis)
    weights = _parse_probes(probes)
    if len(weights) == 1 and next(iter(weights.values())) == 1.0:
        p = predict_state(M_bar, next(iter(weights)))
    else:
        p = predict(M_bar, memory.vocab.vector(weights))

    table = Table(["tau_star", "stimulus", "probability"])
    for j, tau in enumerate(grid.taus):
        for i, name in enumerate(memory.vocab):
            table.add_row(tau, name, p.p[j, i])
    table.meta["probe"] = weights
    name = "_".join(sorted(weights))
    return write_table(_output(config, output, f"predict_{name}.csv"), table, config, grid)


def _parse_window(text: str) -> Tuple[float, float]:
    lo, sep, hi = text.partition(":")
    try:
        if not sep:
            raise ValueError(text)
        return float(lo), float(hi)
    except ValueError:
        raise UsageError(f"Window must look like LO:HI, got {text!r}") from None


def cmd_value(config: RunConfig, source: Optional[str] = None, windows: Sequence[str] = (),
              workers: int = 1, output: Optional[str] = None) -> Tuple[Path, Dict[str, Optional[str]]]:
    """Cached and windowed values of every choice, with the preferred choice per window"""
    scenario = _scenario(config)
    grid = _grid(config)
    if source:
        memory = snapshot.load(source, expected_grid=grid, expected_vocab=scenario.vocab)
    else:
        scenario.check_interior(grid, config.strict)
        memory = train(scenario, config.episodes_per_choice, grid, _rng(config),
                       rate=config.learning_rate, workers=workers)
    M_bar = normalize(memory, config.epsilon, config.axis)
    rewards = RewardVector(scenario.reward_array())
    predictions = {label: predict_state(M_bar, label) for label in scenario.labels}

    table = Table(["choice", "window_lo", "window_hi", "value"])
    decisions: Dict[str, Optional[str]] = {}
    values = {label: cached_value(p, rewards) for label, p in predictions.items()}
    for label, value in values.items():
        table.add_row(label, 0.0, math.inf, value)
    decisions["cached"] = choose(values)

    for text in windows:
        lo, hi = _parse_window(text)
        window = TemporalWindow.rectangular(lo, hi)
        values = {label: windowed_value(p, rewards, window) for label, p in predictions.items()}
        for label, value in values.items():
            table.add_row(label, lo, hi, value)
        decisions[text] = choose(values)

    table.meta["decisions"] = decisions
    path = write_table(_output(config, output, "value.csv"), table, config, grid)
    return path, decisions


def cmd_figures(config: RunConfig, fig_ids: Sequence[str] = FIGURE_IDS,
                workers: int = 1, stream: Optional[TextIO] = None) -> List[Path]:
    """Run the figure suite; raises ClaimFailure when any claim fails"""
    stream = stream or sys.stdout
    unknown = [fig_id for fig_id in fig_ids if fig_id not in FIGURE_IDS]
    if unknown:
        raise UsageError(f"Unknown figure id(s): {', '.join(unknown)}")

    grid = _grid(config)
    results, written = [], []
    for fig_id in fig_ids:
        result = reproduce_figure(fig_id, config, workers)
        results.append(result)
        written.append(write_table(Path(config.output_dir) / f"{fig_id}.csv",
                                   result.table, config, grid))
        for claim in result.claims:
            print(claim.line(), file=stream)
    written.append(write_table(Path(config.output_dir) / "summary.csv",
                               summary_table(results), config, grid))

    failed = [claim for result in results for claim in result.claims if not claim.passed]
    if failed:
        raise ClaimFailure(f"{len(failed)} claim(s) failed: "
                           + ", ".join(f"{c.figure}.{c.name}" for c in failed))
    return written


def cmd_dump(config: RunConfig, choice: str, at: float, output: Optional[str] = None) -> Path:
    """F and f-tilde of one sampled episode of a choice, observed at time at"""
    scenario = _scenario(config)
    grid = _grid(config)
    episode = sample_episode(scenario, choice, _rng(config))
    state = run_stream(episode.stream, grid, scenario.vocab, until=at)
    past = state.invert()

    table = Table(["layer", "tau_star", "stimulus", "value"])
    for layer, values in (("F", state.laplace_rows()), ("f_tilde", past.f_tilde)):
        for j, tau in enumerate(grid.taus):
            for i, name in enumerate(scenario.vocab):
                table.add_row(layer, tau, name, values[j, i])
    table.meta["time"] = state.now
    table.meta["episode"] = episode.to_dict()
    return write_table(_output(config, output, f"dump_{choice}.csv"), table, config, grid)


def cmd_slice(config: RunConfig, source: str, present: str, past: str,
              output: Optional[str] = None) -> Path:
    """M[:, present, past] from a snapshot"""
    grid = _grid(config)
    memory = snapshot.load(source, expected_grid=grid)
    table = Table(["tau_star", "value"])
    for tau, value in zip(grid.taus, memory.slice(present, past)):
        table.add_row(tau, value)
    table.meta["slice"] = {"present": present, "past": past}
    return write_table(_output(config, output, f"slice_{present}_{past}.csv"), table, config, grid)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config, CSV or snapshot written by a previous run")
    common.add_argument("--tau-min", type=float)
    common.add_argument("--tau-max", type=float)
    common.add_argument("--n-units", type=int)
    common.add_argument("-k", type=int)
    common.add_argument("--scenario")
    common.add_argument("--seed", type=int)
    common.add_argument("--episodes", type=int, dest="episodes_per_choice")
    common.add_argument("--output-dir")
    common.add_argument("--strict", action="store_const", const=True)
    common.add_argument("--axis", choices=[axis.value for axis in NormalizationAxis])
    common.add_argument("--epsilon", type=float)
    common.add_argument("--learning-rate", type=float)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--log-level", default="WARNING")
    common.add_argument("--log-json", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="scalefuture",
        description="Scale-invariant future timelines from Laplace-domain memory",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    impulse = commands.add_parser("impulse", parents=[common], help="discrete vs exact impulse response")
    impulse.add_argument("--tau-probe", type=float, required=True)
    impulse.add_argument("--duration", type=float)
    impulse.add_argument("--steps", type=int, default=IMPULSE_STEPS)
    impulse.add_argument("--output")

    train_cmd = commands.add_parser("train", parents=[common], help="train and write a snapshot")
    train_cmd.add_argument("--snapshot")

    predict_cmd = commands.add_parser("predict", parents=[common], help="future timeline of a probe")
    predict_cmd.add_argument("--snapshot", required=True)
    predict_cmd.add_argument("--probe", action="append", required=True,
                             help="stimulus name, optionally NAME=WEIGHT; repeatable")
    predict_cmd.add_argument("--output")

    value = commands.add_parser("value", parents=[common], help="cached and windowed values")
    value.add_argument("--snapshot")
    value.add_argument("--window", action="append", default=[], help="LO:HI, repeatable")
    value.add_argument("--output")

    figures = commands.add_parser("figures", parents=[common], help="figure reproduction suite")
    figures.add_argument("ids", nargs="*", default=list(FIGURE_IDS))

    dump = commands.add_parser("dump", parents=[common], help="F and f-tilde of an episode")
    dump.add_argument("--choice", required=True)
    dump.add_argument("--time", type=float, required=True)
    dump.add_argument("--output")

    slice_cmd = commands.add_parser("slice", parents=[common], help="one association curve")
    slice_cmd.add_argument("--snapshot", required=True)
    slice_cmd.add_argument("--present", required=True)
    slice_cmd.add_argument("--past", required=True)
    slice_cmd.add_argument("--output")
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    """Embedded or default config, overridden by the flags actually given"""
    base = load_config(Path(args.config)) if args.config else RunConfig()
    data = base.to_dict()
    for flag, field_name in (("tau_min", "tau_min"), ("tau_max", "tau_max"),
                             ("n_units", "n_units"), ("k", "k")):
        value = getattr(args, flag)
        if value is not None:
            data["grid"][field_name] = value
    for name in ("scenario", "seed", "episodes_per_choice", "output_dir", "strict",
                 "axis", "epsilon", "learning_rate"):
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    return RunConfig.from_dict(data)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level, args.log_json)
    try:
        config = build_config(args)
        if args.command == "impulse":
            print(cmd_impulse(config, args.tau_probe, args.duration, args.steps, args.output))
        elif args.command == "train":
            print(cmd_train(config, args.snapshot, args.workers))
        elif args.command == "predict":
            print(cmd_predict(config, args.snapshot, args.probe, args.output))
        elif args.command == "value":
            path, decisions = cmd_value(config, args.snapshot, args.window, args.workers, args.output)
            for window, decision in decisions.items():
                print(f"{window}: {decision if decision is not None else 'tie'}")
            print(path)
        elif args.command == "figures":
            cmd_figures(config, args.ids, args.workers)
        elif args.command == "dump":
            print(cmd_dump(config, args.choice, args.time, args.output))
        elif args.command == "slice":
            print(cmd_slice(config, args.snapshot, args.present, args.past, args.output))
    except ScaleFutureError as e:
        logger.error("command_failed", command=args.command, error=str(e),
                     kind=type(e).__name__)
        print(f"error: {e}", file=sys.stderr)
        return int(e.exit_code)
    except ValidationError as e:
        print(f"error: invalid configuration: {e}", file=sys.stderr)
        return int(ExitCode.USAGE)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return int(ExitCode.USAGE)
    return int(ExitCode.OK)


def run() -> None:
    sys.exit(main())
