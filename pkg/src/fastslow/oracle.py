"""Ground-truth helpers: grid shortest paths and greedy teacher labels.

Works on plain ``(x, y)`` tuples so it has no dependency on the environment
module; ``GridPos`` named tuples pass through unchanged.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Container
from enum import IntEnum

Cell = tuple[int, int]


class BenchAction(IntEnum):
    """Action vocabulary for the prediction benchmark (adds DONT_MOVE)."""

    UP = 0
    DOWN = 1
    LEFT = 2
    RIGHT = 3
    DONT_MOVE = 4


class AxisBias(IntEnum):
    """Which axis the greedy teacher reduces first when both differ."""

    X_FIRST = 0
    Y_FIRST = 1


# Fixed expansion order (up, down, left, right); distances don't depend on it.
_NEIGHBOUR_DELTAS = ((0, -1), (0, 1), (-1, 0), (1, 0))

_BENCH_DELTAS = {
    BenchAction.UP: (0, -1),
    BenchAction.DOWN: (0, 1),
    BenchAction.LEFT: (-1, 0),
    BenchAction.RIGHT: (1, 0),
    BenchAction.DONT_MOVE: (0, 0),
}


def bfs_min_steps(obstacles: Container[Cell], n: int, start: Cell, goal: Cell) -> int | None:
    """Length of the shortest 4-connected obstacle-avoiding path.

    Returns None when the goal is unreachable; never conflates that with a
    zero-length path (start == goal returns 0).
    """
    start = (start[0], start[1])
    goal = (goal[0], goal[1])
    if start == goal:
        return 0
    dist = {start: 0}
    queue = deque([start])
    while queue:
        cell = queue.popleft()
        d = dist[cell] + 1
        for dx, dy in _NEIGHBOUR_DELTAS:
            nxt = (cell[0] + dx, cell[1] + dy)
            if nxt in dist:
                continue
            if not (0 <= nxt[0] < n and 0 <= nxt[1] < n) or nxt in obstacles:
                continue
            if nxt == goal:
                return d
            dist[nxt] = d
            queue.append(nxt)
    return None


def greedy_label(start: Cell, goal: Cell, bias: AxisBias) -> BenchAction:
    """Teacher action on an obstacle-free grid: close the preferred axis
    first, then the other, DONT_MOVE once on the goal."""
    dx = goal[0] - start[0]
    dy = goal[1] - start[1]
    if bias == AxisBias.X_FIRST:
        if dx != 0:
            return BenchAction.RIGHT if dx > 0 else BenchAction.LEFT
        if dy != 0:
            return BenchAction.DOWN if dy > 0 else BenchAction.UP
        return BenchAction.DONT_MOVE
    if dy != 0:
        return BenchAction.DOWN if dy > 0 else BenchAction.UP
    if dx != 0:
        return BenchAction.RIGHT if dx > 0 else BenchAction.LEFT
    return BenchAction.DONT_MOVE


def greedy_next_state(start: Cell, goal: Cell, bias: AxisBias) -> Cell:
    """Cell reached by applying the greedy teacher action to ``start``."""
    dx, dy = _BENCH_DELTAS[greedy_label(start, goal, bias)]
    return (start[0] + dx, start[1] + dy)
