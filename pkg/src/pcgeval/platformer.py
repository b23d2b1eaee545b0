"""A small deterministic tile platformer with Goombas as the only enemy.

Physics per tick, in this order:

1. A jump action while standing on solid ground sets ``vy = +3``.
2. Horizontal move of ``dx`` in {-1, 0, +1}; blocked by solid tiles and level edges.
3. Gravity: ``vy = max(vy - 1, -4)``.
4. Vertical move of ``vy`` tiles, one tile at a time. ``vy > 0`` is up the
   screen, so y decreases by vy. Hitting a solid tile stops the move and
   zeroes vy. Moving past the bottom row kills the agent.
5. Goomba contact against enemy positions at the new tick.

A standing jump therefore climbs 2, 1, 0 tiles on its first three ticks
(apex 3) and then falls. Ground and Brick are solid; Air, Flag and the
tile a Goomba starts on are not.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .level import Domain, TileGrid, TileKind

JUMP_VELOCITY = 3
MIN_VY, MAX_VY = -4, 4
MAX_HORIZONTAL_SPEED = 1

SOLID = frozenset({TileKind.GROUND, TileKind.BRICK})


class PlatformerAction(enum.IntEnum):
    NOOP = 0
    RIGHT = 1
    LEFT = 2
    JUMP_RIGHT = 3
    JUMP_LEFT = 4
    JUMP_UP = 5


_DX = {
    PlatformerAction.NOOP: 0,
    PlatformerAction.RIGHT: 1,
    PlatformerAction.LEFT: -1,
    PlatformerAction.JUMP_RIGHT: 1,
    PlatformerAction.JUMP_LEFT: -1,
    PlatformerAction.JUMP_UP: 0,
}
_JUMPS = frozenset({PlatformerAction.JUMP_RIGHT, PlatformerAction.JUMP_LEFT, PlatformerAction.JUMP_UP})


@dataclass(frozen=True)
class PlatformerState:
    x: int
    y: int
    vy: int = 0
    tick: int = 0
    alive: bool = True
    # indices into Goombas.starts of enemies stomped earlier in this trace
    stomped: frozenset[int] = frozenset()

    @property
    def key(self) -> tuple[int, int, int]:
        """Agent-only reachability key."""
        return (self.x, self.y, self.vy)


def is_solid(grid: TileGrid, x: int, y: int) -> bool:
    return grid.in_bounds(x, y) and grid[x, y] in SOLID


class Goombas:
    """Enemy patrol table for one level.

    Each Goomba walks its supporting platform of length p at 1 tile/tick,
    starting rightward and dwelling one tick at each edge, so its column
    is a pure function of tick with period 2p.
    """

    def __init__(self, grid: TileGrid):
        self.starts: list[tuple[int, int]] = []
        self._platforms: list[tuple[int, int]] = []  # (left column, length)
        for y in range(grid.height):
            for x in range(grid.width):
                if grid[x, y] is not TileKind.GOOMBA:
                    continue
                left = right = x
                while _walkable(grid, left - 1, y):
                    left -= 1
                while _walkable(grid, right + 1, y):
                    right += 1
                self.starts.append((x, y))
                self._platforms.append((left, right - left + 1))

    def __len__(self) -> int:
        return len(self.starts)

    def position(self, i: int, tick: int) -> tuple[int, int]:
        x0, y = self.starts[i]
        left, p = self._platforms[i]
        k = (x0 - left + tick) % (2 * p)
        offset = k if k < p else 2 * p - 1 - k
        return left + offset, y


def _walkable(grid: TileGrid, x: int, y: int) -> bool:
    # a tile a Goomba can stand on: in bounds, not solid, solid underneath
    return grid.in_bounds(x, y) and not is_solid(grid, x, y) and is_solid(grid, x, y + 1)


def on_ground(grid: TileGrid, x: int, y: int) -> bool:
    return is_solid(grid, x, y + 1)


def _move_agent(grid: TileGrid, x: int, y: int, vy: int, action: PlatformerAction):
    """Agent-only physics. Returns (x, y, vy, fell_out, moved_down)."""
    if action in _JUMPS and on_ground(grid, x, y):
        vy = JUMP_VELOCITY
    nx = x + _DX[action]
    if grid.in_bounds(nx, y) and not is_solid(grid, nx, y):
        x = nx
    vy = max(vy - 1, MIN_VY)
    moved_down = False
    step = -1 if vy > 0 else 1  # screen direction of travel
    for _ in range(abs(vy)):
        ny = y + step
        if ny >= grid.height:
            return x, ny, vy, True, True
        if ny < 0 or is_solid(grid, x, ny):
            vy = 0
            break
        y = ny
        moved_down = moved_down or step > 0
    else:
        if vy < 0 and on_ground(grid, x, y):
            vy = 0  # landed exactly; keeps reachability keys canonical
    return x, y, vy, False, moved_down


def platformer_step(grid: TileGrid, s: PlatformerState, a: PlatformerAction,
                    goombas: Goombas | None = None) -> PlatformerState:
    if not s.alive:
        raise ValueError("dead states have no successors")
    if goombas is None:
        goombas = Goombas(grid)
    x, y, vy, fell, moved_down = _move_agent(grid, s.x, s.y, s.vy, PlatformerAction(a))
    tick = s.tick + 1
    if fell:
        return PlatformerState(x, grid.height - 1, vy, tick, False, s.stomped)
    stomped = s.stomped
    alive = True
    for i in range(len(goombas)):
        if i in stomped:
            continue
        gx, gy = goombas.position(i, tick)
        hit = (gx, gy) == (x, y)
        # passing through each other in one tick counts as lateral contact
        crossed = (gx, gy) == (s.x, s.y) and goombas.position(i, s.tick) == (x, y)
        if hit and moved_down:
            stomped = stomped | {i}
        elif hit or crossed:
            alive = False
    return PlatformerState(x, y, vy, tick, alive, stomped)


def goal_column(grid: TileGrid) -> int:
    for x in range(grid.width - 1, -1, -1):
        if any(grid[x, y] is TileKind.FLAG for y in range(grid.height)):
            return x
    return grid.width - 1


def platformer_goal_reached(grid: TileGrid, s: PlatformerState, goal_col: int | None = None) -> bool:
    if goal_col is None:
        goal_col = goal_column(grid)
    return s.x == goal_col


def platformer_heuristic(grid: TileGrid, s: PlatformerState, goal_col: int | None = None) -> float:
    """Lower bound on ticks needed to reach the goal column."""
    if goal_col is None:
        goal_col = goal_column(grid)
    return max(goal_col - s.x, 0) / MAX_HORIZONTAL_SPEED


def platformer_start(grid: TileGrid) -> PlatformerState:
    """Column 0, on the lowest free tile that stands on solid ground (top row if none)."""
    for y in range(grid.height - 2, -1, -1):
        if not is_solid(grid, 0, y) and is_solid(grid, 0, y + 1):
            return PlatformerState(0, y)
    return PlatformerState(0, 0)


@dataclass(frozen=True)
class ReachableCount:
    count: int
    truncated: bool


def platformer_reachable_states(grid: TileGrid, cap: int = 1_000_000,
                                start: PlatformerState | None = None) -> ReachableCount:
    """Breadth-first count of distinct (x, y, vy) triples, Goombas ignored."""
    if cap < 1:
        raise ValueError("cap must be positive")
    if start is None:
        start = platformer_start(grid)
    first = start.key
    seen = {first}
    queue = deque([first])
    while queue:
        x, y, vy = queue.popleft()
        for a in PlatformerAction:
            nx, ny, nvy, fell, _ = _move_agent(grid, x, y, vy, a)
            if fell:
                continue
            k = (nx, ny, nvy)
            if k not in seen:
                if len(seen) >= cap:
                    return ReachableCount(len(seen), True)
                seen.add(k)
                queue.append(k)
    return ReachableCount(len(seen), False)


class PlatformerProblem:
    """Search problem adapter; dead successor states are pruned."""

    def __init__(self, grid: TileGrid, start: PlatformerState | None = None):
        if grid.domain is not Domain.PLATFORMER:
            raise ValueError(f"expected a platformer grid, got {grid.domain.value}")
        self.grid = grid
        self.start = start if start is not None else platformer_start(grid)
        self.goal_col = goal_column(grid)
        self.goombas = Goombas(grid)

    def successors(self, s: PlatformerState) -> list[tuple[int, PlatformerState]]:
        out = []
        for a in PlatformerAction:
            t = platformer_step(self.grid, s, a, self.goombas)
            if t.alive:
                out.append((int(a), t))
        return out

    def heuristic(self, s: PlatformerState) -> float:
        return platformer_heuristic(self.grid, s, self.goal_col)

    def is_goal(self, s: PlatformerState) -> bool:
        return s.x == self.goal_col

    @cached_property
    def reachable(self) -> ReachableCount:
        return platformer_reachable_states(self.grid, start=self.start)

    def reachable_count(self) -> int:
        return self.reachable.count
