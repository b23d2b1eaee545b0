"""Seeded level generators.

Every generator is a pure function of its parameters and seed. Randomness
comes from ``random.Random`` whose sequence is stable across Python versions.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass

from .errors import BadDimensions, UnsolvableBase
from .level import Domain, LevelSet, TileGrid, TileKind
from .maze import is_solvable, maze_start_goal, maze_successors, reachable_cells

EMPTY, WALL = TileKind.EMPTY, TileKind.WALL


class DifficultyClass(enum.IntEnum):
    VERY_EASY = 1
    EASY = 2
    MODERATE = 3
    DIFFICULT = 4
    VERY_DIFFICULT = 5


@dataclass(frozen=True)
class DifficultyClassSet:
    class_label: DifficultyClass
    levels: LevelSet

    def __post_init__(self):
        dims = {(g.width, g.height) for g in self.levels}
        if len(dims) > 1:
            raise ValueError("all levels in a difficulty class share dimensions")


def derive_seed(*parts: int) -> int:
    """Mix integers into one 64-bit seed (order-sensitive, platform-stable)."""
    h = 0xCBF29CE484222325
    for p in parts:
        for byte in int(p).to_bytes(8, "little", signed=False):
            h ^= byte
            h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


# ---------------------------------------------------------------------- mazes

def gen_random_maze(w: int, h: int, wall_prob: float, seed: int) -> TileGrid:
    if w < 2 or h < 2:
        raise BadDimensions(f"random mazes need w, h >= 2, got {w}x{h}")
    if not 0.0 <= wall_prob < 1.0:
        raise ValueError("wall_prob must lie in [0, 1)")
    rng = random.Random(seed)
    tiles = [WALL if rng.random() < wall_prob else EMPTY for _ in range(w * h)]
    tiles[0] = tiles[-1] = EMPTY
    return TileGrid(w, h, tuple(tiles), Domain.MAZE)


def _carve_backtracker(cw: int, ch: int, rng: random.Random, goal_bias: float = 0.0) -> list[list[bool]]:
    """Perfect maze on a cw x ch tile grid (odd sizes); cells sit at even coordinates.

    Until the far corner is carved, each step picks a neighbour closer to that
    corner with probability ``goal_bias`` (when one exists). With bias 0 this
    is the plain recursive backtracker and its long winding corridors.
    """
    open_ = [[False] * cw for _ in range(ch)]
    open_[0][0] = True
    stack = [(0, 0)]
    gx, gy = cw - 1, ch - 1
    reached = False
    while stack:
        x, y = stack[-1]
        options = [(x + dx, y + dy, dx // 2, dy // 2)
                   for dx, dy in ((0, -2), (0, 2), (-2, 0), (2, 0))
                   if 0 <= x + dx < cw and 0 <= y + dy < ch and not open_[y + dy][x + dx]]
        if not options:
            stack.pop()
            continue
        if goal_bias and not reached:
            closer = [o for o in options if abs(gx - o[0]) + abs(gy - o[1]) < abs(gx - x) + abs(gy - y)]
            if closer and rng.random() < goal_bias:
                options = closer
        nx, ny, hx, hy = rng.choice(options)
        open_[y + hy][x + hx] = True
        open_[ny][nx] = True
        reached = reached or (nx, ny) == (gx, gy)
        stack.append((nx, ny))
    return open_


def _cell_degree(open_, x, y) -> int:
    h, w = len(open_), len(open_[0])
    return sum(1 for dx, dy in ((0, -1), (0, 1), (-1, 0), (1, 0))
               if 0 <= x + dx < w and 0 <= y + dy < h and open_[y + dy][x + dx])


def _braid(open_, fraction: float, rng: random.Random) -> None:
    """Open a wall at ``fraction`` of the dead-end cells, joining them into loops."""
    h, w = len(open_), len(open_[0])
    tips = [(x, y) for y in range(0, h, 2) for x in range(0, w, 2) if _cell_degree(open_, x, y) == 1]
    rng.shuffle(tips)
    for x, y in tips[:round(fraction * len(tips))]:
        if _cell_degree(open_, x, y) != 1:
            continue  # already joined by an earlier braid
        walls = [(x + dx // 2, y + dy // 2, x + dx, y + dy)
                 for dx, dy in ((0, -2), (0, 2), (-2, 0), (2, 0))
                 if 0 <= x + dx < w and 0 <= y + dy < h and not open_[y + dy // 2][x + dx // 2]]
        if not walls:
            continue
        # prefer knocking through into another dead end, as classic braiding does
        both = [c for c in walls if _cell_degree(open_, c[2], c[3]) == 1]
        wx, wy, _, _ = rng.choice(both or walls)
        open_[wy][wx] = True


# per-class knobs, linear between the extremes
BRAID_FRACTION = {1: 1.0, 2: 0.75, 3: 0.5, 4: 0.25, 5: 0.0}
GOAL_BIAS = {1: 1.0, 2: 0.75, 3: 0.5, 4: 0.25, 5: 0.0}


def gen_maze_with_difficulty(w: int, h: int, difficulty: int, seed: int) -> TileGrid:
    """Perfect maze from a recursive backtracker, post-processed by class.

    Two knobs move together with the class. Goal bias steers carving
    straight at the goal (class 1) or leaves the backtracker's longest-path
    winding intact (class 5). Braiding opens walls at dead ends: every one
    in class 1, none in class 5, linearly in between. Even dimensions carve
    one tile smaller and pad the far edge with wall, opening only the goal
    corner.
    """
    if w < 5 or h < 5:
        raise BadDimensions(f"difficulty mazes need w, h >= 5, got {w}x{h}")
    if difficulty not in BRAID_FRACTION:
        raise ValueError(f"difficulty class must be 1..5, got {difficulty}")
    rng = random.Random(seed)
    cw = w if w % 2 else w - 1
    ch = h if h % 2 else h - 1
    open_ = _carve_backtracker(cw, ch, rng, GOAL_BIAS[difficulty])
    _braid(open_, BRAID_FRACTION[difficulty], rng)

    rows = [[EMPTY if open_[y][x] else WALL for x in range(cw)] + [WALL] * (w - cw)
            for y in range(ch)]
    rows += [[WALL] * w for _ in range(h - ch)]
    if cw < w:
        rows[ch - 1][w - 1] = EMPTY
    if ch < h:
        rows[h - 1][cw - 1] = EMPTY
    rows[h - 1][w - 1] = EMPTY
    return TileGrid.from_rows(rows, Domain.MAZE)


def dead_end_fraction(grid: TileGrid) -> float:
    """Fraction of reachable empty tiles removed by dead-end filling.

    Tiles with at most one open neighbour (other than the start and goal)
    are filled repeatedly until none remain.
    """
    start, goal = maze_start_goal(grid)
    cells = reachable_cells(grid, start)
    degree = {c: sum(1 for _, t in maze_successors(grid, c) if t in cells) for c in cells}
    stack = [c for c, d in degree.items() if d <= 1 and c not in (start, goal)]
    removed = set()
    while stack:
        c = stack.pop()
        if c in removed:
            continue
        removed.add(c)
        for _, t in maze_successors(grid, c):
            if t in cells and t not in removed:
                degree[t] -= 1
                if degree[t] <= 1 and t not in (start, goal):
                    stack.append(t)
    return len(removed) / len(cells)


def gen_difficulty_classes(w: int, h: int, per_class: int, seed: int) -> list[DifficultyClassSet]:
    out = []
    for cls in DifficultyClass:
        levels = tuple(gen_maze_with_difficulty(w, h, cls, derive_seed(seed, cls, i))
                       for i in range(per_class))
        out.append(DifficultyClassSet(cls, LevelSet(levels, seed, f"difficulty-{int(cls)}")))
    return out


# ------------------------------------------------------------ visual variants

def gen_fixed_path_base(w: int, h: int, seed: int, wall_prob: float = 0.5) -> TileGrid:
    """A single walled-in monotone corridor from corner to corner, random elsewhere."""
    rng = random.Random(seed)
    path = [(0, 0)]
    x = y = 0
    while (x, y) != (w - 1, h - 1):
        if x == w - 1 or (y < h - 1 and rng.random() < 0.5):
            y += 1
        else:
            x += 1
        path.append((x, y))
    on_path = set(path)
    rows = []
    for yy in range(h):
        row = []
        for xx in range(w):
            if (xx, yy) in on_path:
                row.append(EMPTY)
            elif any((xx + dx, yy + dy) in on_path for dx, dy in ((0, -1), (0, 1), (-1, 0), (1, 0))):
                row.append(WALL)
            else:
                row.append(WALL if rng.random() < wall_prob else EMPTY)
        rows.append(row)
    return TileGrid.from_rows(rows, Domain.MAZE)


def gen_visual_variants(base: TileGrid, n: int, seed: int, wall_prob: float = 0.5) -> LevelSet:
    """Re-randomize every tile the player cannot reach or touch.

    Start-reachable tiles and the walls bordering them are copied from the
    base, so the playable region and the A* trajectory never change.
    """
    if not is_solvable(base):
        raise UnsolvableBase("visual variants need a solvable base level")
    start, _ = maze_start_goal(base)
    keep = set(reachable_cells(base, start))
    for x, y in list(keep):
        for dx, dy in ((0, -1), (0, 1), (-1, 0), (1, 0)):
            if base.in_bounds(x + dx, y + dy):
                keep.add((x + dx, y + dy))
    levels = []
    for i in range(n):
        rng = random.Random(derive_seed(seed, i))
        tiles = list(base.tiles)
        for idx in range(len(tiles)):
            pos = (idx % base.width, idx // base.width)
            if pos not in keep:
                tiles[idx] = WALL if rng.random() < wall_prob else EMPTY
        levels.append(TileGrid(base.width, base.height, tuple(tiles), Domain.MAZE))
    return LevelSet(tuple(levels), seed, "visual-variants")


# ----------------------------------------------------------------- platformer

DEFAULT_PLATFORMER_PARAMS = dict(gap_rate=0.06, enemy_rate=0.06, step_rate=0.12, brick_rate=0.25)

_SAFE_START, _SAFE_END = 3, 3
MAX_GAP = 3


def gen_platformer(w: int, h: int, gap_rate: float, enemy_rate: float, seed: int, *,
                   step_rate: float = 0.0, brick_rate: float = 0.0) -> TileGrid:
    """Ground band with gaps, +-1 steps, Goombas, floating bricks and a flag.

    Gaps are at most 3 wide with level ground on both sides, which a running
    jump always clears. Bricks float 4-5 tiles above the agent's standing
    row, out of jump reach, and never over the first or last columns.
    """
    if w < 10 or h < 5:
        raise BadDimensions(f"platformer levels need w >= 10 and h >= 5, got {w}x{h}")
    rng = random.Random(seed)
    max_ground = max(1, min(9, h - 5))
    heights = []
    enemies = [False] * w
    ground = min(2, max_ground)
    x = 0
    while x < w:
        lo, hi = _SAFE_START, w - _SAFE_END
        if lo <= x < hi and heights and heights[-1] > 0:
            if rng.random() < gap_rate:
                width = rng.randint(1, MAX_GAP)
                # leave a landing column of the same height before the safe end
                if x + width < hi:
                    heights.extend([0] * width)
                    heights.append(ground)
                    x += width + 1
                    continue
            if rng.random() < step_rate:
                ground = min(max_ground, max(1, ground + rng.choice((-1, 1))))
        heights.append(ground)
        x += 1
    heights = heights[:w]

    for x in range(_SAFE_START, w - _SAFE_END):
        flat_here = heights[x] > 0 and heights[x - 1] == heights[x] == heights[x + 1]
        if flat_here and not enemies[x - 1] and rng.random() < enemy_rate:
            enemies[x] = True

    rows = [[TileKind.AIR] * w for _ in range(h)]
    for x, gh in enumerate(heights):
        for k in range(gh):
            rows[h - 1 - k][x] = TileKind.GROUND
        if enemies[x]:
            rows[h - 1 - gh][x] = TileKind.GOOMBA

    x = _SAFE_START
    while x < w - _SAFE_END:
        if rng.random() < brick_rate:
            length = rng.randint(2, 4)
            base = max(heights[x:x + length])
            lift = rng.choice((4, 5))
            y = h - 1 - base - lift
            if y >= 0:
                for xx in range(x, min(x + length, w - _SAFE_END)):
                    rows[y][xx] = TileKind.BRICK
            x += length
        x += 1

    rows[h - 1 - heights[-1]][w - 1] = TileKind.FLAG
    return TileGrid.from_rows(rows, Domain.PLATFORMER)
