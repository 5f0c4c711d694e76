"""Tabular Q-learning baseline and the ablated agent variants.

The Q-learner explores uniformly at random for its first ``random_episodes``
episodes and acts greedily afterwards; with the unit learning rate every
backup lands the stored value exactly on r + gamma * max_a Q(s', a).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, replace

from . import gridworld, oracle
from .agent import EpisodeResult, FastSlowAgent, FastSlowConfig, derive_seed
from .gridworld import GridPos, GridWorldConfig, NUM_ACTIONS

QTable = dict[tuple[GridPos, int], float]

ABLATION_VARIANTS = {
    "nofast": (False, True),
    "noslow": (True, False),
    "neither": (False, False),
}


@dataclass(frozen=True)
class QLearningConfig:
    gamma: float = 0.99
    learning_rate: float = 1.0
    random_episodes: int = 75
    seed: int = 0


def td_update(
    q: QTable,
    state: GridPos,
    action: int,
    reward: float,
    next_state: GridPos,
    gamma: float = 0.99,
    learning_rate: float = 1.0,
    num_actions: int = NUM_ACTIONS,
) -> None:
    """One Bellman backup on the visited pair; unvisited entries read as 0.

    Written as a convex combination so the unit learning rate lands the
    stored value exactly on the target, bit for bit.
    """
    best_next = max(q.get((next_state, a), 0.0) for a in range(num_actions))
    current = q.get((state, action), 0.0)
    target = reward + gamma * best_next
    q[(state, action)] = (1.0 - learning_rate) * current + learning_rate * target


def q_select(
    q: QTable,
    state: GridPos,
    episode: int,
    k: int,
    rng: random.Random,
    num_actions: int = NUM_ACTIONS,
) -> int:
    """Uniform random through episode k, greedy with random tie-break after."""
    if episode <= k:
        return rng.randrange(num_actions)
    values = [q.get((state, a), 0.0) for a in range(num_actions)]
    best = max(values)
    ties = [a for a, v in enumerate(values) if v == best]
    if len(ties) == 1:
        return ties[0]
    return ties[rng.randrange(len(ties))]


class QLearningAgent:
    """Harness-compatible episode runner around the tabular update."""

    def __init__(self, env_config: GridWorldConfig, config: QLearningConfig = QLearningConfig()):
        self.env_config = env_config
        self.config = config
        self.q: QTable = {}
        self._env_rng = random.Random(derive_seed(config.seed, 11))
        self._action_rng = random.Random(derive_seed(config.seed, 12))

    def run_episode(self, episode: int) -> EpisodeResult:
        envc = self.env_config
        n = envc.size
        budget = envc.budget()
        start, goal, obstacles = gridworld.reset(envc, episode, self._env_rng)
        min_steps = oracle.bfs_min_steps(obstacles, n, start, goal)
        assert min_steps is not None

        cfg = self.config
        state = start
        steps = 0
        solved = False
        for t in range(budget):
            action = q_select(self.q, state, episode, cfg.random_episodes, self._action_rng)
            outcome = gridworld.step(state, action, goal, obstacles, n, t, budget)
            td_update(
                self.q, state, action, outcome.reward, outcome.next_state,
                gamma=cfg.gamma, learning_rate=cfg.learning_rate,
            )
            state = outcome.next_state
            steps = t + 1
            if outcome.done:
                solved = True
                break
        return EpisodeResult(episode, steps, solved, min_steps, start, goal)


def ablation_agent(
    variant: str, env_config: GridWorldConfig, config: FastSlowConfig = FastSlowConfig()
) -> FastSlowAgent:
    """Agent with the fast and/or slow mechanism removed.

    Variants: 'nofast' (uniform action probabilities), 'noslow' (no planner
    lookahead), 'neither' (pure count-based selection).
    """
    try:
        use_fast, use_slow = ABLATION_VARIANTS[variant]
    except KeyError:
        raise ValueError(f"unknown ablation variant: {variant!r}") from None
    return FastSlowAgent(env_config, replace(config, use_fast=use_fast, use_slow=use_slow))
