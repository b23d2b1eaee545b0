from __future__ import annotations

from collections import deque

import pytest
from hypothesis import given, settings, strategies as st

from conftest import plat
from pcgeval.generators import gen_platformer
from pcgeval.level import TileKind
from pcgeval.planner import astar
from pcgeval.platformer import (Goombas, PlatformerAction as A, PlatformerProblem, PlatformerState,
                                platformer_goal_reached, platformer_heuristic, platformer_reachable_states,
                                platformer_start, platformer_step)

FLAT = """
----------
----------
----------
----------
XXXXXXXXXX
"""


def _oracle_reachable(grid, start):
    """Independent agent-only simulator written from the physics rules, used only as a BFS oracle."""
    def solid(x, y):
        return 0 <= x < grid.width and 0 <= y < grid.height and grid[x, y] in (TileKind.GROUND, TileKind.BRICK)

    def step(x, y, vy, dx, jump):
        if jump and solid(x, y + 1):
            vy = 3
        if 0 <= x + dx < grid.width and not solid(x + dx, y):
            x += dx
        vy = max(vy - 1, -4)
        remaining = abs(vy)
        while remaining:
            ny = y - 1 if vy > 0 else y + 1
            if ny >= grid.height:
                return None
            if ny < 0 or solid(x, ny):
                vy = 0
                break
            y = ny
            remaining -= 1
        if vy < 0 and solid(x, y + 1):
            vy = 0
        return x, y, vy

    moves = [(0, False), (1, False), (-1, False), (1, True), (-1, True), (0, True)]
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for dx, jump in moves:
            t = step(*s, dx, jump)
            if t is not None and t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def test_action_codes_fixed():
    assert [int(a) for a in A] == [0, 1, 2, 3, 4, 5]


def test_flat_walk():
    g = plat(FLAT)
    s = platformer_start(g)
    assert (s.x, s.y) == (0, 3)
    t = platformer_step(g, s, A.RIGHT)
    assert (t.x, t.y, t.vy, t.tick, t.alive) == (1, 3, 0, 1, True)


def test_standing_jump_apex_is_three():
    g = plat(FLAT)
    s = platformer_start(g)
    trace = [s := platformer_step(g, s, A.JUMP_UP)]
    for _ in range(8):
        trace.append(s := platformer_step(g, s, A.NOOP))
    ys = [t.y for t in trace]
    assert 3 - min(ys) == 3
    assert ys[:3] == [1, 0, 0]
    assert ys[-1] == 3 and trace[-1].vy == 0
    assert all(t.x == 0 for t in trace)


def test_jump_only_from_ground():
    g = plat(FLAT)
    s = platformer_step(g, platformer_start(g), A.JUMP_UP)
    mid = platformer_step(g, s, A.JUMP_UP)
    assert mid.vy == s.vy - 1


def test_fall_out_kills():
    g = plat("""
        -----
        -----
        X--XX
    """)
    s = platformer_start(g)
    s = platformer_step(g, s, A.RIGHT)
    assert s.alive and s.x == 1
    for _ in range(3):
        if not s.alive:
            break
        s = platformer_step(g, s, A.NOOP)
    assert not s.alive


def test_walking_into_goomba_kills():
    g = plat("""
        -----
        -gB--
        XXXXX
    """)
    # the Goomba patrols columns 0-1 and is back on column 1 at tick 1
    assert Goombas(g).position(0, 1) == (1, 1)
    s = platformer_step(g, platformer_start(g), A.RIGHT)
    assert not s.alive


def test_stomp_removes_goomba():
    # drop onto a boxed-in Goomba from above
    g = plat("""
        ---
        -X-
        ---
        XgX
        XXX
    """)
    grid_goombas = Goombas(g)
    assert grid_goombas.position(0, 7) == (1, 3)
    s = PlatformerState(1, 2, 0)
    t = platformer_step(g, s, A.NOOP, grid_goombas)
    assert t.alive and (t.x, t.y) == (1, 3)
    assert t.stomped == frozenset({0})
    after = platformer_step(g, t, A.NOOP, grid_goombas)
    assert after.alive


def test_goomba_patrol_period():
    g = plat("""
        ------
        --g---
        XXXXX-
        XXXXXX
    """)
    gm = Goombas(g)
    p = 5
    cols = [gm.position(0, t)[0] for t in range(4 * p)]
    assert cols[: 2 * p] == cols[2 * p:]
    assert set(cols) == set(range(5))
    assert all(abs(a - b) <= 1 for a, b in zip(cols, cols[1:]))


def test_goal_and_heuristic():
    g = plat(FLAT)
    assert platformer_goal_reached(g, PlatformerState(9, 3))
    assert not platformer_goal_reached(g, PlatformerState(0, 3))
    flag = plat("""
        -----F----
        XXXXXXXXXX
    """)
    assert platformer_goal_reached(flag, PlatformerState(5, 0))
    assert platformer_heuristic(flag, PlatformerState(5, 0)) == 0
    assert platformer_heuristic(flag, PlatformerState(7, 0)) == 0
    assert platformer_heuristic(g, PlatformerState(2, 3)) == 7


def test_reachable_flat_matches_oracle():
    g = plat(FLAT)
    res = platformer_reachable_states(g)
    assert not res.truncated
    assert res.count == len(_oracle_reachable(g, platformer_start(g).key))


def test_reachable_cap():
    res = platformer_reachable_states(plat(FLAT), cap=1)
    assert (res.count, res.truncated) == (1, True)


def test_boxed_start():
    g = plat("""
        B-----
        -B----
        XXXXXX
    """)
    # ceiling above and a wall to the right: the agent cannot leave its tile
    res = platformer_reachable_states(g)
    assert res.count == 1
    wider = plat("""
        BBB---
        ---B--
        ---B--
        XXXXXX
    """)
    assert platformer_reachable_states(wider).count == len(_oracle_reachable(wider, platformer_start(wider).key))


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_generated_reachability_matches_oracle(seed):
    g = gen_platformer(20, 8, 0.1, 0.1, seed, step_rate=0.2)
    res = platformer_reachable_states(g)
    assert res.count == len(_oracle_reachable(g, platformer_start(g).key))


@given(st.integers(0, 10**6), st.lists(st.sampled_from(list(A)), min_size=1, max_size=30))
@settings(max_examples=50, deadline=None)
def test_step_pure_and_bounded(seed, actions):
    g = gen_platformer(20, 8, 0.1, 0.1, seed, step_rate=0.2)
    gm = Goombas(g)
    s = platformer_start(g)
    for a in actions:
        if not s.alive:
            break
        t = platformer_step(g, s, a, gm)
        assert t == platformer_step(g, s, a, gm)
        assert abs(t.x - s.x) <= 1 and abs(t.y - s.y) <= 4
        assert -4 <= t.vy <= 4 and t.tick == s.tick + 1
        assert 0 <= t.x < g.width and 0 <= t.y < g.height
        s = t


def _ucs_ticks(problem):
    start = problem.start
    frontier = deque([(start, 0)])
    seen = {start}
    while frontier:
        s, d = frontier.popleft()
        if problem.is_goal(s):
            return d
        for _, t in problem.successors(s):
            if t not in seen:
                seen.add(t)
                frontier.append((t, d + 1))
    return None


@pytest.mark.parametrize("seed", range(8))
def test_heuristic_admissible_vs_uniform_cost(seed):
    g = gen_platformer(14, 7, 0.15, 0.15, seed, step_rate=0.2)
    p = PlatformerProblem(g)
    best = _ucs_ticks(p)
    r = astar(p)
    assert r.solved == (best is not None)
    if best is not None:
        assert platformer_heuristic(g, p.start) <= best
        assert len(r.actions) == best


def test_flat_level_solved_by_walking():
    g = gen_platformer(12, 6, 0.0, 0.0, 3)
    r = astar(PlatformerProblem(g))
    assert list(r.actions) == [A.RIGHT] * 11
