"""Maze game: 4-connected unit-cost movement from the top-left to the bottom-right corner."""

from __future__ import annotations

import enum
from collections import deque
from typing import Iterable

from .errors import BlockedEndpoint
from .level import Domain, TileGrid, TileKind

MazeState = tuple[int, int]


class MazeAction(enum.IntEnum):
    UP = 0
    DOWN = 1
    LEFT = 2
    RIGHT = 3


# successor order is part of the trajectory contract
_MOVES = (
    (MazeAction.UP, 0, -1),
    (MazeAction.DOWN, 0, 1),
    (MazeAction.LEFT, -1, 0),
    (MazeAction.RIGHT, 1, 0),
)


def _check_maze(grid: TileGrid) -> None:
    if grid.domain is not Domain.MAZE:
        raise ValueError(f"expected a maze grid, got {grid.domain.value}")


def maze_start_goal(grid: TileGrid) -> tuple[MazeState, MazeState]:
    _check_maze(grid)
    start, goal = (0, 0), (grid.width - 1, grid.height - 1)
    for name, pos in (("start", start), ("goal", goal)):
        if grid[pos] is TileKind.WALL:
            raise BlockedEndpoint(f"{name} tile {pos} is a wall")
    return start, goal


def maze_successors(grid: TileGrid, s: MazeState) -> list[tuple[MazeAction, MazeState]]:
    x, y = s
    out = []
    for action, dx, dy in _MOVES:
        nx, ny = x + dx, y + dy
        if grid.in_bounds(nx, ny) and grid[nx, ny] is TileKind.EMPTY:
            out.append((action, (nx, ny)))
    return out


def maze_heuristic(s: MazeState, goal: MazeState) -> int:
    return abs(s[0] - goal[0]) + abs(s[1] - goal[1])


def reachable_cells(grid: TileGrid, start: MazeState) -> set[MazeState]:
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for _, t in maze_successors(grid, s):
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def bfs_distances(grid: TileGrid, start: MazeState) -> dict[MazeState, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for _, t in maze_successors(grid, s):
            if t not in dist:
                dist[t] = dist[s] + 1
                queue.append(t)
    return dist


def is_solvable(grid: TileGrid) -> bool:
    try:
        start, goal = maze_start_goal(grid)
    except BlockedEndpoint:
        return False
    return goal in reachable_cells(grid, start)


def empty_cells(grid: TileGrid) -> Iterable[MazeState]:
    w = grid.width
    return ((i % w, i // w) for i, t in enumerate(grid.tiles) if t is TileKind.EMPTY)


class MazeProblem:
    """Search problem adapter for the planner.

    Open cells are cached once so successor generation avoids enum lookups.
    """

    def __init__(self, grid: TileGrid):
        self.grid = grid
        self.start, self.goal = maze_start_goal(grid)
        w = grid.width
        self._open = {(i % w, i // w) for i, t in enumerate(grid.tiles) if t is TileKind.EMPTY}

    def successors(self, s: MazeState) -> list[tuple[int, MazeState]]:
        x, y = s
        out = []
        for action, dx, dy in _MOVES:
            t = (x + dx, y + dy)
            if t in self._open:
                out.append((int(action), t))
        return out

    def heuristic(self, s: MazeState) -> int:
        return abs(s[0] - self.goal[0]) + abs(s[1] - self.goal[1])

    def is_goal(self, s: MazeState) -> bool:
        return s == self.goal

    def reachable_count(self) -> int:
        return len(reachable_cells(self.grid, self.start))
