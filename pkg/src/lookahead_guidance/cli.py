"""Command-line entry points: scenario runs, envelope studies, ratio sweeps.

All commands write deterministic, plot-ready CSV/text files (9 significant
digits, LF endings) into the requested output directory. Exit codes: 0 on
success, 2 for parse/validation problems, 3 for runtime numeric failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import envelope as env
from . import metrics
from .errors import GuidanceError, ParseError, ValidationError
from .guidance import ConstantLookahead, VariableLookahead
from .scenario import (
    PRESET_NAMES,
    EnvelopeConfig,
    Scenario,
    parse_envelope_config,
    parse_scenario,
    preset_scenario,
)
from .simulation import run_simulation, write_trajectory_csv

_OK = 0
_CONFIG_FAIL = 2
_RUNTIME_FAIL = 3


def _profile_labels(profiles) -> list[str]:
    labels = []
    for p in profiles:
        label = "constant" if isinstance(p, ConstantLookahead) else "variable"
        if label in labels:
            label += "_2"
        labels.append(label)
    return labels


def _fmt(value) -> str:
    return "" if value is None else f"{value:.9g}"


def cmd_simulate(scenario: Scenario, out_dir: Path) -> int:
    """Run every profile of the scenario and write trajectories plus metrics."""
    out_dir.mkdir(parents=True, exist_ok=True)
    labels = _profile_labels(scenario.profiles)
    reports: dict[str, metrics.PerformanceReport] = {}
    for label, profile in zip(labels, scenario.profiles):
        traj = run_simulation(
            scenario.path, profile, scenario.limits, scenario.init, scenario.sim
        )
        with open(out_dir / f"trajectory_{label}.csv", "w", newline="\n") as f:
            write_trajectory_csv(traj, f)
        report = metrics.performance_report(traj)
        reports[label] = report
        with open(out_dir / f"performance_{label}.csv", "w", newline="\n") as f:
            metrics.report_to_csv(report, f)

    with open(out_dir / "summary.txt", "w", newline="\n") as f:
        for label in labels:
            r = reports[label]
            f.write(f"{label}_t_s={_fmt(r.t_s)}\n")
            f.write(f"{label}_J={_fmt(r.J)}\n")
            f.write(f"{label}_Mp={_fmt(r.Mp)}\n")
            f.write(f"{label}_T_far_measured={_fmt(r.T_far_measured)}\n")
            f.write(f"{label}_T_far_bound={_fmt(r.T_far_bound)}\n")
        if len(labels) == 2:
            a, b = labels
            f.write(f"better_J={a if reports[a].J <= reports[b].J else b}\n")
            f.write(f"better_Mp={a if reports[a].Mp <= reports[b].Mp else b}\n")
    return _OK


def cmd_envelope(config: EnvelopeConfig, out_dir: Path) -> int:
    """Write the region grid, boundary curves, polar maps, and gain summary."""
    if len(config.profiles) != 2:
        raise ValidationError("[profile2] envelope comparison needs two profiles")
    out_dir.mkdir(parents=True, exist_ok=True)
    baseline, enlarged = config.profiles
    report = env.compute_envelope(config.grid, config.limits, baseline, enlarged)
    with open(out_dir / "envelope_grid.csv", "w", newline="\n") as f:
        env.write_envelope_grid_csv(report, f)
    with open(out_dir / "boundary.csv", "w", newline="\n") as f:
        env.write_boundary_csv(report, f)
    with open(out_dir / "summary.csv", "w", newline="\n") as f:
        env.write_summary_csv(report, f)
    for name, profile in (("polar_const.csv", baseline), ("polar_var.csv", enlarged)):
        polar = env.polar_map_export(config.grid, config.limits, profile)
        with open(out_dir / name, "w", newline="\n") as f:
            env.write_polar_csv(polar, f)
    return _OK


def cmd_sweep(config: EnvelopeConfig, ratios, out_dir: Path) -> int:
    """Sweep the look-ahead ratio and write the gain series."""
    variable = next(
        (p for p in config.profiles if isinstance(p, VariableLookahead)), None
    )
    if variable is None:
        raise ValidationError(
            "[profile] ratio sweep needs a variable profile for L_min and d_c"
        )
    series = env.ratio_sweep(
        ratios, config.grid, config.limits, variable.L_min, variable.d_c
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "ratio_sweep.csv", "w", newline="\n") as f:
        env.write_ratio_sweep_csv(series, f)
    return _OK


def _parse_ratio_range(spec: str) -> list[float]:
    try:
        start_s, stop_s, step_s = spec.split(":")
        start, stop, step = float(start_s), float(stop_s), float(step_s)
    except ValueError as exc:
        raise ParseError(f"--ratios expects start:stop:step, got {spec!r}") from exc
    if step <= 0.0 or stop < start:
        raise ParseError("--ratios needs step > 0 and stop >= start")
    ratios = []
    k = 0
    while True:
        r = start + k * step
        if r > stop + 1e-9:
            break
        ratios.append(min(r, stop))
        k += 1
    return ratios


def _read_text(path_arg: str) -> str:
    try:
        return Path(path_arg).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path_arg}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lookahead-guidance",
        description="Path-following guidance simulation and envelope analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a scenario and export results")
    p_sim.add_argument("scenario", nargs="?", help="scenario file")
    p_sim.add_argument("--preset", choices=PRESET_NAMES,
                       help="use a shipped case-study scenario")
    p_sim.add_argument("--out", required=True, help="output directory")

    p_env = sub.add_parser("envelope", help="saturation-envelope comparison")
    p_env.add_argument("config", help="envelope configuration file")
    p_env.add_argument("--out", required=True, help="output directory")

    p_swp = sub.add_parser("sweep", help="envelope gain vs look-ahead ratio")
    p_swp.add_argument("config", help="envelope configuration file")
    p_swp.add_argument("--ratios", default="1:5:0.25", metavar="START:STOP:STEP")
    p_swp.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            if (args.scenario is None) == (args.preset is None):
                raise ParseError(
                    "simulate needs exactly one of a scenario file or --preset"
                )
            scenario = (
                preset_scenario(args.preset)
                if args.preset
                else parse_scenario(_read_text(args.scenario))
            )
            return cmd_simulate(scenario, Path(args.out))
        if args.command == "envelope":
            config = parse_envelope_config(_read_text(args.config))
            return cmd_envelope(config, Path(args.out))
        if args.command == "sweep":
            config = parse_envelope_config(_read_text(args.config))
            return cmd_sweep(config, _parse_ratio_range(args.ratios),
                             Path(args.out))
        raise ParseError(f"unknown command {args.command!r}")
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _CONFIG_FAIL
    except (GuidanceError, ArithmeticError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return _RUNTIME_FAIL


if __name__ == "__main__":
    sys.exit(main())
