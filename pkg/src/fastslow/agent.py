"""Online control loop: count-penalized action selection from the
goal-conditioned policy, planner override from recalled transitions, memory
writes with conflict eviction, and trajectory-replay training.

Per step: the policy proposes action probabilities p (uniform when the fast
mechanism is ablated); the executed action is argmax_a p(a) - alpha *
sqrt(visits(a)) unless the planner recalls a route to the goal, whose first
action then takes precedence. The observed transition lands in both the
episodic and the overall bank, and the policy trains on (state, goal) ->
action pairs replayed from the walked trajectory (goal = current position)
plus the recalled route (goal = the episode goal).

The replayed past trajectory is consolidated by loop erasure: returning to an
already-visited state drops the loop walked since, so the replay always
covers a genuine simple path from the episode start to the current position.
Without this the replay labels contradict each other whenever the walk
backtracks (the same (state, goal) input appears with opposite actions) and
the policy degenerates into directionless momentum instead of learning where
the goal lies.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import gridworld, oracle
from .gridworld import EnvAction, GridPos, GridWorldConfig, NUM_ACTIONS
from .memory import LookaheadResult, MemoryBank, VisitCounts, lookahead
from .neural import MLP, Adam, TrainingPair, train_step

_UNIFORM_P = np.full(NUM_ACTIONS, 1.0 / NUM_ACTIONS)


@dataclass(frozen=True)
class FastSlowConfig:
    """Agent hyperparameters; the defaults are the baseline configuration."""

    alpha: float = 1.0
    branches: int = 100
    depth: int = 20
    train_timing: Literal["step", "episode"] = "step"
    use_fast: bool = True
    use_slow: bool = True
    learning_rate: float = 0.001
    seed: int = 0

    def __post_init__(self) -> None:
        if self.branches < 1 or self.depth < 1 or self.alpha < 0:
            raise ValueError("need branches >= 1, depth >= 1, alpha >= 0")


@dataclass(frozen=True)
class EpisodeResult:
    episode: int
    steps: int
    solved: bool
    min_steps: int
    start: GridPos
    goal: GridPos


def derive_seed(seed: int, tag: int) -> int:
    """Independent integer seed for a named stream of a run."""
    return int(np.random.SeedSequence([seed, tag]).generate_state(1, np.uint64)[0])


def select_action(p: np.ndarray, counts: np.ndarray, alpha: float) -> int:
    """Explore-exploit rule: probabilities penalized by the square root of the
    per-action visit count; ties go to the lowest action index (plain argmax).

    Deterministic tie-breaking matters for the ablated agents that run on
    uniform probabilities: breaking ties at random makes their count-driven
    sweeps cover the grid so well that removing the policy barely hurts,
    flattening the gap between the ablations.
    """
    scores = np.asarray(p, dtype=float) - alpha * np.sqrt(np.asarray(counts, dtype=float))
    return int(np.argmax(scores))


def build_replay_pairs(
    past: list[tuple[GridPos, int]],
    future: list[tuple[GridPos, int]] | None,
    current: GridPos,
    goal: GridPos,
) -> list[TrainingPair]:
    """Replay pairs: every past state targets its taken action with the current
    position as the goal; every recalled-route state targets its action with
    the episode goal."""
    pairs = [TrainingPair(tuple(s), tuple(current), int(a)) for s, a in past]
    if future:
        pairs.extend(TrainingPair(tuple(s), tuple(goal), int(a)) for s, a in future)
    return pairs


class FastSlowAgent:
    """Runs episodes online against a grid world, learning as it goes.

    The overall bank and the policy weights persist across episodes; the
    episodic bank and the visit counters reset at every episode start.
    """

    def __init__(self, env_config: GridWorldConfig, config: FastSlowConfig = FastSlowConfig()):
        self.env_config = env_config
        self.config = config
        self.overall = MemoryBank()
        self.episodic = MemoryBank()
        self.counts = VisitCounts(NUM_ACTIONS)
        self.net = MLP(
            heads=(NUM_ACTIONS,),
            scale=env_config.size - 1,
            rng=derive_seed(config.seed, 0),
        )
        self.adam = Adam(learning_rate=config.learning_rate)
        self._env_rng = random.Random(derive_seed(config.seed, 1))
        self._lookahead_seed = derive_seed(config.seed, 3)
        self._global_step = 0

    def agent_step(self, state: GridPos, goal: GridPos) -> tuple[EnvAction, LookaheadResult]:
        """Choose the action for one step; the planner's route wins when found."""
        cfg = self.config
        p = self.net.forward(state, goal) if cfg.use_fast else _UNIFORM_P
        action = select_action(p, self.counts.numvisits(state), cfg.alpha)
        if cfg.use_slow:
            recalled = lookahead(
                self.overall,
                state,
                goal,
                cfg.branches,
                cfg.depth,
                master_seed=self._lookahead_seed,
                step_index=self._global_step,
            )
            if recalled.found:
                action = int(recalled.trajectory[0][1])
        else:
            recalled = LookaheadResult([], False)
        self._global_step += 1
        return EnvAction(action), recalled

    def run_episode(self, episode: int) -> EpisodeResult:
        envc = self.env_config
        n = envc.size
        budget = envc.budget()
        start, goal, obstacles = gridworld.reset(envc, episode, self._env_rng)
        min_steps = oracle.bfs_min_steps(obstacles, n, start, goal)
        assert min_steps is not None  # reset guarantees reachability

        self.episodic.clear()
        self.counts.reset()
        past: list[tuple[GridPos, int]] = []
        position: dict[GridPos, int] = {}  # state -> index of its entry in past
        last_future: list[tuple[GridPos, int]] = []
        state = start
        steps = 0
        solved = False
        train_every_step = self.config.use_fast and self.config.train_timing == "step"
        for t in range(budget):
            action, recalled = self.agent_step(state, goal)
            outcome = gridworld.step(state, action, goal, obstacles, n, t, budget)
            self.episodic.store(state, action, outcome.next_state)
            self.overall.store(state, action, outcome.next_state)
            self.counts.record_visit(state, action)

            position[state] = len(past)
            past.append((state, int(action)))
            cut = position.get(outcome.next_state)
            if cut is not None:
                for dropped, _ in past[cut:]:
                    del position[dropped]
                del past[cut:]

            future = recalled.trajectory if recalled.found else []
            if future:
                last_future = future
            state = outcome.next_state
            steps = t + 1
            if train_every_step:
                pairs = build_replay_pairs(past, future, state, goal)
                if pairs:
                    train_step(self.net, self.adam, pairs)
            if outcome.done:
                solved = True
                break
        if self.config.use_fast and self.config.train_timing == "episode":
            pairs = build_replay_pairs(past, last_future, state, goal)
            if pairs:
                train_step(self.net, self.adam, pairs)
        return EpisodeResult(episode, steps, solved, min_steps, start, goal)
