"""Deterministic n-by-n navigation world with static and phase-switching layouts.

Coordinates are (x, y) with x the column and y the row, origin at the top
left, so UP decreases y. Moving into a wall, an obstacle or out of bounds is
a no-op: the agent stays where it is. Reward is sparse: 1 on reaching the
goal, 0 otherwise.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from enum import IntEnum
from typing import Literal, NamedTuple

from . import oracle


class GridPos(NamedTuple):
    x: int
    y: int


class EnvAction(IntEnum):
    UP = 0
    DOWN = 1
    LEFT = 2
    RIGHT = 3


DELTAS = {
    EnvAction.UP: (0, -1),
    EnvAction.DOWN: (0, 1),
    EnvAction.LEFT: (-1, 0),
    EnvAction.RIGHT: (1, 0),
}

NUM_ACTIONS = len(EnvAction)


class StepOutcome(NamedTuple):
    next_state: GridPos
    reward: int
    done: bool
    truncated: bool


@dataclass(frozen=True)
class GridWorldConfig:
    """Environment parameters; max_steps defaults to the n*n budget."""

    size: int
    mode: Literal["static", "dynamic"] = "static"
    switch_episode: int = 50
    max_steps: int | None = None
    seed: int = 0

    def budget(self) -> int:
        return self.size * self.size if self.max_steps is None else self.max_steps


def wall_layout(n: int, phase: Literal["pre", "post"]) -> frozenset[GridPos]:
    """Wall with a one-cell gap at the grid centre.

    Pre-phase the wall is vertical (column n//2), post-phase horizontal
    (row n//2); the gap sits at (n//2, n//2) in both phases.
    """
    if n < 2:
        raise ValueError("grid size must be at least 2")
    mid = n // 2
    if phase == "pre":
        return frozenset(GridPos(mid, y) for y in range(n) if y != mid)
    if phase == "post":
        return frozenset(GridPos(x, mid) for x in range(n) if x != mid)
    raise ValueError(f"unknown wall phase: {phase!r}")


def reset(
    config: GridWorldConfig, episode: int, rng: random.Random
) -> tuple[GridPos, GridPos, frozenset[GridPos]]:
    """Start, goal and obstacle set for one episode.

    Static mode is the fixed corner-to-corner task on an empty grid. Dynamic
    mode applies the phase wall (pre up to and including switch_episode) and
    samples start and goal uniformly from free cells, rejecting pairs that
    are equal or mutually unreachable.
    """
    if episode < 1:
        raise ValueError("episodes are 1-indexed")
    n = config.size
    if config.mode == "static":
        return GridPos(0, 0), GridPos(n - 1, n - 1), frozenset()

    phase = "pre" if episode <= config.switch_episode else "post"
    obstacles = wall_layout(n, phase)
    free = [GridPos(x, y) for y in range(n) for x in range(n) if GridPos(x, y) not in obstacles]
    if not _has_reachable_pair(obstacles, n, free):
        raise ValueError("no mutually reachable start/goal pair exists in this layout")
    while True:
        start = free[rng.randrange(len(free))]
        goal = free[rng.randrange(len(free))]
        if start == goal:
            continue
        if oracle.bfs_min_steps(obstacles, n, start, goal) is not None:
            return start, goal, obstacles


def _has_reachable_pair(obstacles: frozenset[GridPos], n: int, free: list[GridPos]) -> bool:
    # Any free cell with at least one free 4-neighbour gives a valid pair.
    free_set = set(free)
    for x, y in free:
        for dx, dy in ((0, -1), (0, 1), (-1, 0), (1, 0)):
            if (x + dx, y + dy) in free_set:
                return True
    return False


def step(
    state: GridPos,
    action: EnvAction,
    goal: GridPos,
    obstacles: frozenset[GridPos],
    n: int,
    steps_taken: int,
    max_steps: int,
) -> StepOutcome:
    """Move one cell; collisions with edges or obstacles leave the agent put.

    done is true exactly when the move lands on the goal (reward 1);
    truncated is true when this was the last budgeted step and the goal was
    not reached. They are never both true.
    """
    dx, dy = DELTAS[action]
    nx, ny = state[0] + dx, state[1] + dy
    if 0 <= nx < n and 0 <= ny < n and (nx, ny) not in obstacles:
        next_state = GridPos(nx, ny)
    else:
        next_state = GridPos(state[0], state[1])
    done = next_state == goal
    truncated = not done and steps_taken + 1 >= max_steps
    return StepOutcome(next_state, int(done), done, truncated)


def render_layout(
    n: int,
    obstacles: frozenset[GridPos] = frozenset(),
    start: GridPos | None = None,
    goal: GridPos | None = None,
) -> str:
    """Row-major text dump: '.' free, '#' obstacle, 'S' start, 'G' goal."""
    rows = []
    for y in range(n):
        row = []
        for x in range(n):
            cell = (x, y)
            if start is not None and cell == tuple(start):
                row.append("S")
            elif goal is not None and cell == tuple(goal):
                row.append("G")
            elif cell in obstacles:
                row.append("#")
            else:
                row.append(".")
        rows.append("".join(row))
    return "\n".join(rows)
