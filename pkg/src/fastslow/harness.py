"""Experiment runner: seeded episode loops, metrics, CSV files and figures.

Evaluation is purely online: a fresh agent starts at episode 1 with empty
memory and an untrained policy, and every episode counts. Solve rate is the
percentage of episodes that reach the goal within the n*n budget; steps above
minimum accumulates the gap to the BFS-optimal path, charging failed episodes
the full budget.
"""
from __future__ import annotations

import csv
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product
from pathlib import Path
from typing import Sequence

import numpy as np

from .agent import EpisodeResult, FastSlowAgent, FastSlowConfig
from .baselines import ABLATION_VARIANTS, QLearningAgent, QLearningConfig, ablation_agent
from .gridworld import GridWorldConfig

log = logging.getLogger(__name__)

AGENTS = ("fastslow", "qlearn", "nofast", "noslow", "neither")
ENVS = ("static", "dynamic")
EPISODE_CSV_HEADER = (
    "seed,episode,steps,min_steps,solved,start_x,start_y,goal_x,goal_y"
)
SUMMARY_CSV_HEADER = "metric,first50,last50,total"


class ConfigError(ValueError):
    """Raised for configurations the runner refuses to execute."""


@dataclass(frozen=True)
class ExperimentConfig:
    env: str = "static"
    size: int = 10
    episodes: int = 100
    agent: str = "fastslow"
    alpha: float = 1.0
    branches: int = 100
    depth: int = 20
    train_timing: str = "step"
    k: int = 75
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    out: str | None = None
    switch_episode: int = 50
    jobs: int = 1
    figures: bool = True


@dataclass(frozen=True)
class MetricsSummary:
    """Solve rate (%) and steps above minimum over the two halves and overall."""

    solve_rate_first: float
    solve_rate_last: float
    solve_rate_total: float
    steps_above_first: float
    steps_above_last: float
    steps_above_total: float

    def rows(self) -> list[tuple[str, float, float, float]]:
        return [
            ("solve_rate", self.solve_rate_first, self.solve_rate_last, self.solve_rate_total),
            (
                "steps_above_minimum",
                self.steps_above_first,
                self.steps_above_last,
                self.steps_above_total,
            ),
        ]


@dataclass
class ExperimentRun:
    config: ExperimentConfig
    results: dict[int, list[EpisodeResult]] = field(default_factory=dict)
    summaries: dict[int, MetricsSummary] = field(default_factory=dict)
    mean: MetricsSummary | None = None


def validate(cfg: ExperimentConfig) -> None:
    if cfg.env not in ENVS:
        raise ConfigError(f"env must be one of {ENVS}, got {cfg.env!r}")
    if cfg.agent not in AGENTS:
        raise ConfigError(f"agent must be one of {AGENTS}, got {cfg.agent!r}")
    if cfg.size < 2:
        raise ConfigError("size must be at least 2")
    if cfg.episodes < 1:
        raise ConfigError("episodes must be at least 1")
    if not cfg.seeds:
        raise ConfigError("need at least one seed")
    if cfg.branches < 1 or cfg.depth < 1:
        raise ConfigError("branches and depth must be at least 1")
    if cfg.alpha < 0:
        raise ConfigError("alpha must be nonnegative")
    if cfg.train_timing not in ("step", "episode"):
        raise ConfigError("train_timing must be 'step' or 'episode'")
    if cfg.k < 0:
        raise ConfigError("k must be nonnegative")
    if cfg.jobs < 1:
        raise ConfigError("jobs must be at least 1")


def solve_rate(results: Sequence[EpisodeResult]) -> float:
    """Percentage of episodes that reached the goal."""
    return 100.0 * sum(r.solved for r in results) / len(results)


def steps_above_minimum(results: Sequence[EpisodeResult]) -> int:
    """Total steps beyond the BFS optimum; failures already carry the full budget."""
    return sum(r.steps - r.min_steps for r in results)


def halves(results: Sequence[EpisodeResult]) -> tuple[Sequence[EpisodeResult], Sequence[EpisodeResult]]:
    """First/last half split; a single episode is both halves."""
    n = len(results)
    return results[: (n + 1) // 2], results[n // 2 :]


def summarize(results: Sequence[EpisodeResult]) -> MetricsSummary:
    first, last = halves(results)
    return MetricsSummary(
        solve_rate(first),
        solve_rate(last),
        solve_rate(results),
        steps_above_minimum(first),
        steps_above_minimum(last),
        steps_above_minimum(results),
    )


def mean_summary(summaries: Sequence[MetricsSummary]) -> MetricsSummary:
    return MetricsSummary(
        *(
            float(np.mean([getattr(s, name) for s in summaries]))
            for name in (
                "solve_rate_first",
                "solve_rate_last",
                "solve_rate_total",
                "steps_above_first",
                "steps_above_last",
                "steps_above_total",
            )
        )
    )


def build_agent(cfg: ExperimentConfig, seed: int):
    env_config = GridWorldConfig(
        size=cfg.size, mode=cfg.env, switch_episode=cfg.switch_episode, seed=seed
    )
    if cfg.agent == "qlearn":
        return QLearningAgent(env_config, QLearningConfig(random_episodes=cfg.k, seed=seed))
    fs_config = FastSlowConfig(
        alpha=cfg.alpha,
        branches=cfg.branches,
        depth=cfg.depth,
        train_timing=cfg.train_timing,
        seed=seed,
    )
    if cfg.agent == "fastslow":
        return FastSlowAgent(env_config, fs_config)
    return ablation_agent(cfg.agent, env_config, fs_config)


def run_seed(cfg: ExperimentConfig, seed: int) -> list[EpisodeResult]:
    """All episodes for one seed; pure given (cfg, seed)."""
    agent = build_agent(cfg, seed)
    results = []
    for episode in range(1, cfg.episodes + 1):
        t0 = time.perf_counter()
        result = agent.run_episode(episode)
        log.debug(
            "seed %d episode %d: %d steps (min %d) in %.3fs",
            seed, episode, result.steps, result.min_steps, time.perf_counter() - t0,
        )
        results.append(result)
    return results


def run_experiment(cfg: ExperimentConfig) -> ExperimentRun:
    """Run every seed, aggregate metrics, and write outputs when requested.

    Partially written output files are removed if the run aborts.
    """
    validate(cfg)
    run = ExperimentRun(cfg)
    t0 = time.perf_counter()
    if cfg.jobs > 1 and len(cfg.seeds) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.jobs, len(cfg.seeds))) as pool:
            for seed, results in zip(cfg.seeds, pool.map(run_seed, [cfg] * len(cfg.seeds), cfg.seeds)):
                run.results[seed] = results
    else:
        for seed in cfg.seeds:
            run.results[seed] = run_seed(cfg, seed)
    for seed in cfg.seeds:
        run.summaries[seed] = summarize(run.results[seed])
    run.mean = mean_summary([run.summaries[s] for s in cfg.seeds])
    log.info(
        "%s/%s %dx%d: solve %.1f%% (halves %.1f/%.1f), steps above minimum %.1f in %.1fs",
        cfg.agent, cfg.env, cfg.size, cfg.size,
        run.mean.solve_rate_total, run.mean.solve_rate_first, run.mean.solve_rate_last,
        run.mean.steps_above_total, time.perf_counter() - t0,
    )
    if cfg.out is not None:
        write_outputs(run, Path(cfg.out))
    return run


def write_outputs(run: ExperimentRun, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        episodes_path = out_dir / "episodes.csv"
        written.append(episodes_path)
        with open(episodes_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(EPISODE_CSV_HEADER.split(","))
            for seed in run.config.seeds:
                for r in run.results[seed]:
                    writer.writerow(
                        [seed, r.episode, r.steps, r.min_steps, int(r.solved),
                         r.start.x, r.start.y, r.goal.x, r.goal.y]
                    )

        summary_path = out_dir / "summary.csv"
        written.append(summary_path)
        with open(summary_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(SUMMARY_CSV_HEADER.split(","))
            for row in run.mean.rows():
                writer.writerow([row[0], _fmt(row[1]), _fmt(row[2]), _fmt(row[3])])

        by_seed_path = out_dir / "summary_by_seed.csv"
        written.append(by_seed_path)
        with open(by_seed_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["seed"] + SUMMARY_CSV_HEADER.split(","))
            for seed in run.config.seeds:
                for row in run.summaries[seed].rows():
                    writer.writerow([seed, row[0], _fmt(row[1]), _fmt(row[2]), _fmt(row[3])])

        if run.config.figures:
            from . import plots  # deferred so headless CSV runs never touch matplotlib

            for seed in run.config.seeds:
                fig_path = out_dir / f"steps_seed{seed}.png"
                written.append(fig_path)
                plots.steps_per_episode_figure(
                    run.results[seed],
                    fig_path,
                    title=f"{run.config.agent} on {run.config.env} "
                    f"{run.config.size}x{run.config.size}, seed {seed}",
                )
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def sweep(
    cfg: ExperimentConfig, grid: dict[str, list], out: str | None = None
) -> list[tuple[dict, MetricsSummary]]:
    """Cross-product run over the grid values, sharing seeds across points."""
    for key in grid:
        if not hasattr(cfg, key):
            raise ConfigError(f"unknown sweep parameter: {key!r}")
        if key in ("seeds", "out", "jobs", "figures"):
            raise ConfigError(f"parameter {key!r} cannot be swept")
    names = list(grid)
    rows: list[tuple[dict, MetricsSummary]] = []
    for values in product(*(grid[name] for name in names)):
        point = dict(zip(names, values))
        point_cfg = replace(cfg, out=None, **point)
        run = run_experiment(point_cfg)
        rows.append((point, run.mean))
        log.info("sweep point %s done", point)
    if out is not None:
        _write_sweep_outputs(rows, names, Path(out), render=cfg.figures)
    return rows


def _write_sweep_outputs(
    rows: list[tuple[dict, MetricsSummary]], names: list[str], out_dir: Path, render: bool
) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "sweep.csv"
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                names
                + ["solve_rate_first", "solve_rate_last", "solve_rate_total",
                   "steps_above_first", "steps_above_last", "steps_above_total"]
            )
            for point, summary in rows:
                writer.writerow(
                    [point[name] for name in names]
                    + [_fmt(summary.solve_rate_first), _fmt(summary.solve_rate_last),
                       _fmt(summary.solve_rate_total), _fmt(summary.steps_above_first),
                       _fmt(summary.steps_above_last), _fmt(summary.steps_above_total)]
                )
        if render and len(names) == 1 and len(rows) > 1:
            from . import plots

            plots.sweep_figure(
                names[0],
                [point[names[0]] for point, _ in rows],
                [summary for _, summary in rows],
                out_dir / "sweep.png",
            )
    except BaseException:
        path.unlink(missing_ok=True)
        (out_dir / "sweep.png").unlink(missing_ok=True)
        raise
