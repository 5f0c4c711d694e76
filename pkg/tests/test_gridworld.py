import random

import pytest
from hypothesis import given, strategies as st

from fastslow import gridworld, oracle
from fastslow.gridworld import EnvAction, GridPos, GridWorldConfig, reset, step, wall_layout


class TestWallLayout:
    def test_pre_phase_10(self):
        cells = wall_layout(10, "pre")
        assert cells == {GridPos(5, y) for y in range(10) if y != 5}
        assert len(cells) == 9
        assert GridPos(5, 5) not in cells

    def test_post_phase_10(self):
        cells = wall_layout(10, "post")
        assert cells == {GridPos(x, 5) for x in range(10) if x != 5}
        assert GridPos(5, 5) not in cells

    def test_smallest_grid(self):
        assert wall_layout(2, "pre") == {GridPos(1, 0)}

    @pytest.mark.parametrize("phase", ["pre", "post"])
    def test_gap_keeps_grid_connected(self, phase):
        # all free-cell pairs must stay mutually reachable through the gap
        n = 10
        cells = wall_layout(n, phase)
        free = [(x, y) for x in range(n) for y in range(n) if (x, y) not in cells]
        anchor = free[0]
        for cell in free[1:]:
            assert oracle.bfs_min_steps(cells, n, anchor, cell) is not None

    def test_rejects_tiny_grid(self):
        with pytest.raises(ValueError):
            wall_layout(1, "pre")


class TestReset:
    def test_static_is_fixed_corner_task(self):
        cfg = GridWorldConfig(size=10, mode="static")
        for episode in (1, 50, 100):
            start, goal, obstacles = reset(cfg, episode, random.Random(0))
            assert start == GridPos(0, 0)
            assert goal == GridPos(9, 9)
            assert obstacles == frozenset()

    def test_dynamic_switches_exactly_after_switch_episode(self):
        cfg = GridWorldConfig(size=10, mode="dynamic", switch_episode=50)
        rng = random.Random(1)
        layouts = {ep: reset(cfg, ep, rng)[2] for ep in (1, 50, 51, 100)}
        assert layouts[1] == layouts[50] == wall_layout(10, "pre")
        assert layouts[51] == layouts[100] == wall_layout(10, "post")
        assert layouts[50] != layouts[51]

    def test_dynamic_start_goal_free_distinct_reachable(self):
        cfg = GridWorldConfig(size=10, mode="dynamic")
        rng = random.Random(7)
        for episode in range(1, 80):
            start, goal, obstacles = reset(cfg, episode, rng)
            assert start != goal
            assert start not in obstacles and goal not in obstacles
            assert oracle.bfs_min_steps(obstacles, 10, start, goal) is not None

    def test_rejects_zero_episode(self):
        with pytest.raises(ValueError):
            reset(GridWorldConfig(size=10), 0, random.Random(0))


class TestStep:
    def test_no_wraparound_at_top_edge(self):
        out = step(GridPos(0, 0), EnvAction.UP, GridPos(9, 9), frozenset(), 10, 0, 100)
        assert out.next_state == GridPos(0, 0)
        assert out.reward == 0 and not out.done

    def test_adjacent_goal(self):
        out = step(GridPos(8, 9), EnvAction.RIGHT, GridPos(9, 9), frozenset(), 10, 3, 100)
        assert out.next_state == GridPos(9, 9)
        assert out.reward == 1 and out.done and not out.truncated

    def test_gap_cell_is_passable(self):
        obstacles = wall_layout(10, "pre")
        out = step(GridPos(4, 5), EnvAction.RIGHT, GridPos(9, 9), obstacles, 10, 0, 100)
        assert out.next_state == GridPos(5, 5)

    def test_obstacle_collision_is_noop(self):
        obstacles = wall_layout(10, "pre")
        out = step(GridPos(4, 4), EnvAction.RIGHT, GridPos(9, 9), obstacles, 10, 0, 100)
        assert out.next_state == GridPos(4, 4)

    def test_truncation_on_last_budgeted_step(self):
        out = step(GridPos(0, 0), EnvAction.DOWN, GridPos(9, 9), frozenset(), 10, 99, 100)
        assert out.truncated and not out.done

    def test_goal_on_last_step_counts_as_done(self):
        out = step(GridPos(8, 9), EnvAction.RIGHT, GridPos(9, 9), frozenset(), 10, 99, 100)
        assert out.done and not out.truncated


@given(
    actions=st.lists(st.sampled_from(list(EnvAction)), min_size=1, max_size=60),
    phase=st.sampled_from(["pre", "post"]),
)
def test_containment_and_determinism(actions, phase):
    n = 10
    obstacles = wall_layout(n, phase)
    state = GridPos(0, 0)
    for i, action in enumerate(actions):
        out = step(state, action, GridPos(9, 9), obstacles, n, i, 10_000)
        repeat = step(state, action, GridPos(9, 9), obstacles, n, i, 10_000)
        assert out.next_state == repeat.next_state
        assert 0 <= out.next_state.x < n and 0 <= out.next_state.y < n
        assert out.next_state not in obstacles
        state = out.next_state


def test_episode_budget_invariant():
    # an episode emits at most max_steps outcomes and ends with done or truncated
    n, budget = 4, 16
    rng = random.Random(3)
    for _ in range(50):
        state = GridPos(0, 0)
        outcomes = []
        for t in range(budget):
            action = EnvAction(rng.randrange(4))
            out = step(state, action, GridPos(3, 3), frozenset(), n, t, budget)
            outcomes.append(out)
            state = out.next_state
            if out.done:
                break
        assert len(outcomes) <= budget
        assert not any(o.done and o.truncated for o in outcomes)
        assert outcomes[-1].done or outcomes[-1].truncated
        assert sum(o.done for o in outcomes) <= 1


def test_render_layout_golden():
    obstacles = wall_layout(4, "pre")
    text = gridworld.render_layout(4, obstacles, start=GridPos(0, 0), goal=GridPos(3, 3))
    assert text == "S.#.\n..#.\n....\n..#G"
