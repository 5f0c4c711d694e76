"""Online grid-world navigation: fast goal-conditioned policy, slow memory planner."""

from .agent import EpisodeResult, FastSlowAgent, FastSlowConfig, build_replay_pairs, select_action
from .gridworld import EnvAction, GridPos, GridWorldConfig, StepOutcome, wall_layout
from .harness import ExperimentConfig, MetricsSummary, run_experiment, solve_rate, steps_above_minimum
from .memory import LookaheadResult, MemoryBank, VisitCounts, lookahead
from .neural import MLP, Adam, TrainingPair, train_step
from .oracle import AxisBias, BenchAction, bfs_min_steps, greedy_label, greedy_next_state

__version__ = "0.1.0"

__all__ = [
    "Adam",
    "AxisBias",
    "BenchAction",
    "EnvAction",
    "EpisodeResult",
    "ExperimentConfig",
    "FastSlowAgent",
    "FastSlowConfig",
    "GridPos",
    "GridWorldConfig",
    "LookaheadResult",
    "MLP",
    "MemoryBank",
    "MetricsSummary",
    "StepOutcome",
    "TrainingPair",
    "VisitCounts",
    "bfs_min_steps",
    "build_replay_pairs",
    "greedy_label",
    "greedy_next_state",
    "lookahead",
    "run_experiment",
    "select_action",
    "solve_rate",
    "steps_above_minimum",
    "train_step",
    "wall_layout",
]
