"""Transition banks with conflict eviction, visit counters, and the branched
random-walk lookahead planner.

The bank is a hash table from a state key to the stored (action, next state)
outcomes. Storing a transition evicts any entry for the same state and action
whose next state disagrees, so each (state, action) maps to at most one
successor at all times and the bank tracks a changing environment instead of
modelling transition probabilities. States and actions can be any hashable
values; the agent uses grid positions and action indices.
"""
from __future__ import annotations

import random
from typing import Hashable, NamedTuple

import numpy as np

from .gridworld import EnvAction, GridPos

State = Hashable


class LookaheadResult(NamedTuple):
    """Shortest recalled route to the goal, as (state, action) transitions.

    When found is true, replaying the actions from trajectory[0][0] through
    the bank lands exactly on the queried goal.
    """

    trajectory: list[tuple[State, Hashable]]
    found: bool


class MemoryBank:
    """Rewritable world model: state -> stored (action, next state) pairs."""

    def __init__(self) -> None:
        self._entries: dict[State, list[tuple[Hashable, State]]] = {}
        self._next_state_refs: dict[State, int] = {}

    def store(self, state: State, action: Hashable, next_state: State) -> None:
        """Insert a transition, evicting a conflicting one for (state, action).

        Idempotent for repeated identical transitions.
        """
        row = self._entries.get(state)
        if row is None:
            self._entries[state] = [(action, next_state)]
            self._bump(next_state, +1)
            return
        for i, (stored_action, stored_next) in enumerate(row):
            if stored_action == action:
                if stored_next != next_state:
                    row[i] = (action, next_state)
                    self._bump(stored_next, -1)
                    self._bump(next_state, +1)
                return
        row.append((action, next_state))
        self._bump(next_state, +1)

    def lookup(self, state: State) -> list[tuple[Hashable, State]]:
        """Stored (action, next state) pairs for a state; empty when unknown."""
        return list(self._entries.get(state, ()))

    def seen_as_next_state(self, state: State) -> bool:
        """Whether any stored transition lands on ``state``."""
        return state in self._next_state_refs

    def clear(self) -> None:
        self._entries.clear()
        self._next_state_refs.clear()

    def states(self):
        return self._entries.keys()

    def __len__(self) -> int:
        return sum(len(row) for row in self._entries.values())

    def __contains__(self, state: State) -> bool:
        return state in self._entries

    def _bump(self, state: State, delta: int) -> None:
        refs = self._next_state_refs.get(state, 0) + delta
        if refs > 0:
            self._next_state_refs[state] = refs
        else:
            self._next_state_refs.pop(state, None)


class VisitCounts:
    """Per-episode (state, action) execution counters for the exploration term."""

    def __init__(self, num_actions: int = 4) -> None:
        self.num_actions = num_actions
        self._counts: dict[State, list[int]] = {}

    def record_visit(self, state: State, action: int) -> None:
        row = self._counts.get(state)
        if row is None:
            row = [0] * self.num_actions
            self._counts[state] = row
        row[action] += 1

    def numvisits(self, state: State) -> np.ndarray:
        """Count vector over actions; zeros for a state never acted from."""
        row = self._counts.get(state)
        if row is None:
            return np.zeros(self.num_actions)
        return np.asarray(row, dtype=float)

    def reset(self) -> None:
        self._counts.clear()


def _branch_seed(master_seed: int, step_index: int, branch_index: int) -> int:
    # Stable integer mix so every branch owns a schedule-independent stream.
    return ((master_seed * 1_000_003 + step_index) * 1_000_003 + branch_index) & (2**63 - 1)


def lookahead(
    bank: MemoryBank,
    state: State,
    goal: State,
    branches: int,
    depth: int,
    master_seed: int = 0,
    step_index: int = 0,
) -> LookaheadResult:
    """Walk the bank with independent random branches and keep the shortest
    trajectory that lands on the goal.

    Each branch repeatedly samples one stored (action, next state) pair from
    its current key, stopping at the depth bound, on reaching the goal, or at
    a key with nothing stored. Ties between equally short goal-reaching walks
    go to the lowest branch index. Branch randomness depends only on
    (master_seed, step_index, branch_index), so results are identical however
    the branches are scheduled.
    """
    if branches < 1:
        raise ValueError("need at least one branch")
    if depth < 1:
        raise ValueError("need at least depth 1")
    # A walk can only land on the goal through a stored transition into it;
    # when no such transition exists the search cannot succeed.
    if not bank.seen_as_next_state(goal):
        return LookaheadResult([], False)

    entries = bank._entries
    best: list[tuple[State, Hashable]] | None = None
    for branch in range(branches):
        rng = random.Random(_branch_seed(master_seed, step_index, branch))
        current = state
        trajectory: list[tuple[State, Hashable]] = []
        for _ in range(depth):
            row = entries.get(current)
            if not row:
                break
            action, next_state = row[rng.randrange(len(row))] if len(row) > 1 else row[0]
            trajectory.append((current, action))
            current = next_state
            if current == goal:
                if best is None or len(trajectory) < len(best):
                    best = trajectory
                break
        if best is not None and len(best) == 1:
            break  # nothing can beat a single-step route, and ties keep the earliest
    if best is None:
        return LookaheadResult([], False)
    return LookaheadResult(best, True)


def dump_grid_bank(bank: MemoryBank) -> str:
    """Line-oriented debug dump ``sx,sy,action,nx,ny`` for grid-state banks."""
    lines = []
    for state in sorted(bank.states()):
        for action, next_state in sorted(bank.lookup(state)):
            lines.append(
                f"{state[0]},{state[1]},{EnvAction(action).name},{next_state[0]},{next_state[1]}"
            )
    return "\n".join(lines)


def load_grid_bank(text: str) -> MemoryBank:
    """Inverse of :func:`dump_grid_bank`."""
    bank = MemoryBank()
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        sx, sy, name, nx, ny = line.split(",")
        bank.store(GridPos(int(sx), int(sy)), EnvAction[name], GridPos(int(nx), int(ny)))
    return bank
