"""Command line entry points: run, sweep, predict."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import harness, prediction
from .harness import ConfigError, ExperimentConfig

log = logging.getLogger(__name__)

# Option name -> parser for values coming from a key=value config file.
_RUN_OPTIONS = {
    "env": str,
    "size": int,
    "episodes": int,
    "agent": str,
    "alpha": float,
    "branches": int,
    "depth": int,
    "train_timing": str,
    "k": int,
    "seeds": int,
    "out": str,
    "switch_episode": int,
    "jobs": int,
}


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    # Defaults stay at None so config-file values can fill the gaps.
    parser.add_argument("--config", metavar="FILE", help="key=value file with option defaults")
    parser.add_argument("--env", choices=harness.ENVS)
    parser.add_argument("--size", type=int, metavar="N")
    parser.add_argument("--episodes", type=int)
    parser.add_argument("--agent", choices=harness.AGENTS)
    parser.add_argument("--alpha", type=float, help="exploration constant")
    parser.add_argument("--branches", type=int, help="parallel lookahead branches")
    parser.add_argument("--depth", type=int, help="lookahead depth")
    parser.add_argument("--train-timing", choices=("step", "episode"), dest="train_timing")
    parser.add_argument("--k", type=int, help="random-exploration episodes for qlearn")
    parser.add_argument("--seeds", type=int, metavar="COUNT", help="run seeds 0..COUNT-1")
    parser.add_argument("--switch-episode", type=int, dest="switch_episode")
    parser.add_argument("--jobs", type=int, help="seeds to run in parallel")
    parser.add_argument("--out", metavar="DIR", help="write CSV files and figures here")
    parser.add_argument("--no-figures", action="store_true", help="skip PNG rendering")


def _parse_config_file(path: str) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _RUN_OPTIONS:
            raise ConfigError(f"{path}:{lineno}: unknown option {key!r}")
        try:
            values[key] = _RUN_OPTIONS[key](value.strip())
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
    return values


def _build_experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    merged = dict(_parse_config_file(args.config)) if args.config else {}
    for key in _RUN_OPTIONS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if "seeds" in merged:
        merged["seeds"] = tuple(range(merged["seeds"]))
    if args.no_figures:
        merged["figures"] = False
    cfg = ExperimentConfig(**merged)
    harness.validate(cfg)
    return cfg


def _parse_grid_file(path: str) -> dict[str, list]:
    grid: dict[str, list] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=v1,v2,..., got {raw!r}")
        key, _, values = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _RUN_OPTIONS or key in ("seeds", "out"):
            raise ConfigError(f"{path}:{lineno}: cannot sweep {key!r}")
        try:
            grid[key] = [_RUN_OPTIONS[key](v.strip()) for v in values.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
        if not grid[key]:
            raise ConfigError(f"{path}:{lineno}: no values for {key!r}")
    if not grid:
        raise ConfigError(f"{path}: grid file defines no parameters")
    return grid


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = _build_experiment_config(args)
    run = harness.run_experiment(cfg)
    _print_summary(run.mean)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    grid = _parse_grid_file(args.grid)
    out = getattr(args, "out", None)
    base = _build_experiment_config(args)
    rows = harness.sweep(base, grid, out=out)
    for point, summary in rows:
        print(
            ", ".join(f"{k}={v}" for k, v in point.items())
            + f": solve {summary.solve_rate_total:.1f}%"
            + f", steps above minimum {summary.steps_above_total:.1f}"
        )
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    if args.size < 2:
        raise ConfigError("size must be at least 2")
    if args.seeds < 1:
        raise ConfigError("need at least one seed")
    runner = (
        prediction.run_action_experiment if args.task == "action" else prediction.run_state_experiment
    )
    kwargs = {}
    if args.epochs is not None:
        if args.epochs < 1:
            raise ConfigError("epochs must be at least 1")
        kwargs["epochs_per_phase"] = args.epochs
    out_dir = Path(args.out) if args.out else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    for seed in range(args.seeds):
        records = runner(args.size, seed=seed, **kwargs)
        switch = max(r.epoch for r in records if r.phase == 1)
        reach = prediction.epochs_to_threshold(records, phase=1)
        readapt = prediction.epochs_to_threshold(records, phase=2)
        print(
            f"{args.task} n={args.size} seed={seed}: "
            f"0.99 reached after {reach if reach is not None else '>' + str(switch)} epochs, "
            f"re-reached after {readapt if readapt is not None else '>' + str(switch)} post-switch"
        )
        if out_dir is not None:
            stem = f"{args.task}_n{args.size}_seed{seed}"
            prediction.write_series_csv(records, out_dir / f"{stem}.csv")
            if not args.no_figures:
                from . import plots

                plots.accuracy_figure(
                    records,
                    out_dir / f"{stem}.png",
                    switch_epoch=switch,
                    title=f"next-{args.task} prediction, {args.size}x{args.size}",
                )
    return 0


def _print_summary(summary: harness.MetricsSummary) -> None:
    print(f"{'metric':<22}{'first half':>12}{'last half':>12}{'total':>12}")
    for name, first, last, total in summary.rows():
        print(f"{name:<22}{first:>12.6g}{last:>12.6g}{total:>12.6g}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fastslow",
        description="Online grid-world navigation with a goal-conditioned policy "
        "and a transition-memory planner.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="per-episode debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one experiment configuration")
    _add_run_options(run_p)
    run_p.set_defaults(func=_cmd_run)

    sweep_p = sub.add_parser("sweep", help="run a parameter grid")
    sweep_p.add_argument("--grid", required=True, metavar="FILE", help="key=v1,v2,... lines")
    _add_run_options(sweep_p)
    sweep_p.set_defaults(func=_cmd_sweep)

    predict_p = sub.add_parser("predict", help="next-action / next-state benchmark")
    predict_p.add_argument("--task", choices=("action", "state"), required=True)
    predict_p.add_argument("--size", type=int, default=10, metavar="N")
    predict_p.add_argument("--seeds", type=int, default=1, metavar="COUNT")
    predict_p.add_argument("--epochs", type=int, default=None, help="epochs per phase")
    predict_p.add_argument("--out", metavar="DIR")
    predict_p.add_argument("--no-figures", action="store_true")
    predict_p.set_defaults(func=_cmd_predict)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
