"""Level metrics: compression distance, leniency, and the A*-based diversity and difficulty."""

from __future__ import annotations

import enum
import gzip
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Sequence

import numpy as np
from scipy import ndimage

from .errors import EmptyInput, InvalidDenominator, ReprDomainMismatch, Unsolvable, UnsolvedLevel
from .level import Domain, TileGrid, TileKind
from .maze import maze_start_goal, maze_successors
from .planner import SearchResult, off_path_expansions
from .representations import HeightDelta, Repr, column_features, represent


class Metric(enum.Enum):
    CD = "CD"
    LENIENCY = "Leniency"
    ASTAR_DIVERSITY = "AStarDiversity"
    ASTAR_DIFFICULTY = "AStarDifficulty"
    MANHATTAN_DIVERSITY = "ManhattanDiversity"


@dataclass(frozen=True)
class MetricSample:
    metric: Metric
    value: float
    level_ids: tuple[int, ...]
    repr_tag: Repr | None = None

    def __post_init__(self):
        if len(self.level_ids) == 2 and not self.level_ids[0] < self.level_ids[1]:
            raise ValueError(f"pair ids must satisfy id_a < id_b, got {self.level_ids}")
        if len(self.level_ids) not in (1, 2):
            raise ValueError("a sample refers to one level or one pair of levels")


# ---------------------------------------------------------------- compression

GZIP_LEVEL = 9


def compressed_size(data: bytes) -> int:
    # mtime=0 and no filename keep the gzip header byte-stable
    return len(gzip.compress(data, compresslevel=GZIP_LEVEL, mtime=0))


def ncd(x: bytes, y: bytes) -> float:
    if not x or not y:
        raise EmptyInput("ncd needs two non-empty inputs")
    cx, cy = compressed_size(x), compressed_size(y)
    cxy = compressed_size(x + y)
    return (cxy - min(cx, cy)) / max(cx, cy)


def compression_distance(a: TileGrid, b: TileGrid, repr_: Repr = Repr.FLAT,
                         level_ids: tuple[int, int] = (0, 1)) -> MetricSample:
    if a.domain is not b.domain:
        raise ReprDomainMismatch("levels come from different domains")
    if a.domain is Domain.MAZE and repr_ is not Repr.FLAT:
        raise ReprDomainMismatch(f"maze levels have no {repr_.value} representation")
    value = ncd(represent(a, repr_).encode(), represent(b, repr_).encode())
    return MetricSample(Metric.CD, value, level_ids, repr_)


# ------------------------------------------------------------------ diversity

def levenshtein(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Edit distance with unit insert, delete and substitute costs."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def _require_solved(*results: SearchResult) -> None:
    for r in results:
        if not r.solved:
            raise UnsolvedLevel("metric is undefined on unsolved levels")


def astar_diversity(ra: SearchResult, rb: SearchResult) -> float:
    _require_solved(ra, rb)
    longest = max(len(ra.actions), len(rb.actions))
    if longest == 0:
        return 0.0
    return levenshtein(ra.actions, rb.actions) / longest


def position(state: Any) -> tuple[int, int]:
    if isinstance(state, tuple):
        return state[0], state[1]
    return state.x, state.y


def manhattan_diversity(ra: SearchResult, rb: SearchResult) -> float:
    """Mean Manhattan distance between time-aligned path positions.

    The shorter path is padded with its final position.
    """
    _require_solved(ra, rb)
    pa = [position(s) for s in ra.path_states]
    pb = [position(s) for s in rb.path_states]
    n = max(len(pa), len(pb))
    pa += [pa[-1]] * (n - len(pa))
    pb += [pb[-1]] * (n - len(pb))
    return sum(abs(xa - xb) + abs(ya - yb) for (xa, ya), (xb, yb) in zip(pa, pb)) / n


# ----------------------------------------------------------------- difficulty

def astar_difficulty(r: SearchResult, reachable_count: int,
                     project: Callable[[Any], Hashable] | None = None) -> float:
    """Off-path expansions divided by the number of reachable states.

    ``project`` maps search states onto the same keys the reachable count
    was taken over (the platformer counts (x, y, vy) triples).
    """
    _require_solved(r)
    expanded = len(r.expanded) if project is None else len({project(s) for s in r.expanded})
    if reachable_count < 1 or reachable_count < expanded:
        raise InvalidDenominator(
            f"reachable count {reachable_count} is smaller than {expanded} expanded states")
    return off_path_expansions(r, project) / reachable_count


# ------------------------------------------------------------------- leniency

def _bfs_tree(grid: TileGrid, start):
    parent = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for _, t in maze_successors(grid, s):
            if t not in parent:
                parent[t] = s
                queue.append(t)
    return parent


def _path_to(parent, t):
    path = []
    while t is not None:
        path.append(t)
        t = parent[t]
    return path[::-1]


def dead_end_tiles(grid: TileGrid) -> set[tuple[int, int]]:
    """Empty tiles labelled as dead ends by the fill-and-check procedure.

    For each tile t reachable from the start and not on the start-goal
    shortest path, the shortest start-to-t path (excluding t) is walled off;
    t is a dead end when the goal is then unreachable from t.
    """
    start, goal = maze_start_goal(grid)
    parent = _bfs_tree(grid, start)
    if goal not in parent:
        raise Unsolvable("leniency needs a solvable maze")
    main_path = set(_path_to(parent, goal))
    open_ = np.array([[t is TileKind.EMPTY for t in row] for row in grid.rows()])
    dead = set()
    for t in parent:
        if t in main_path:
            continue
        blocked = open_.copy()
        for x, y in _path_to(parent, t)[:-1]:
            blocked[y, x] = False
        labels, _ = ndimage.label(blocked)
        if labels[t[1], t[0]] != labels[goal[1], goal[0]]:
            dead.add(t)
    return dead


def leniency_maze(grid: TileGrid) -> float:
    """Fraction of start-reachable empty tiles that are dead ends."""
    start, _ = maze_start_goal(grid)
    dead = dead_end_tiles(grid)
    reachable = len(_bfs_tree(grid, start))
    return len(dead) / reachable


GAP_SCORE = -1.0
ENEMY_SCORE = -1.0
JUMP_SCORE = 1.0


def platformer_challenges(grid: TileGrid) -> list[float]:
    """Per-challenge leniency scores: gaps, enemies and gap-free ledge jumps."""
    feats = column_features(grid)
    scores = []
    for f in feats:
        if f.gap_start:
            scores.append(GAP_SCORE)
        if f.has_enemy:
            scores.append(ENEMY_SCORE)
        if f.height_delta is HeightDelta.INC and not f.near_gap:
            scores.append(JUMP_SCORE)
    return scores


def leniency_platformer(grid: TileGrid) -> float:
    scores = platformer_challenges(grid)
    if not scores:
        return 1.0
    return (sum(scores) / len(scores) + 1.0) / 2.0
