"""String encodings of platformer levels for compression distance.

Normal alphabet (16 symbols, one per column, written as hex digits):

    gap columns          0 single-column gap, 1 gap start, 2 inside gap, 3 gap end
    non-gap columns      4 + 4 * delta + 2 * near_gap + has_enemy
                         with delta 0 flat, 1 up, 2 down relative to the previous
                         column and near_gap set when a neighbour column is a gap

A column is a gap when its bottom tile is not solid. Platform height counts
the unbroken run of solid tiles rising from the bottom row, so floating
bricks above the ground surface do not change the height.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import HeightOverflow, ReprDomainMismatch
from .level import Domain, TileGrid, TileKind, flatten
from .platformer import SOLID


class Repr(enum.Enum):
    NORMAL = "normal"
    CONCATENATED = "concatenated"
    FLAT = "flat"


class HeightDelta(enum.IntEnum):
    FLAT = 0
    INC = 1
    DEC = 2


@dataclass(frozen=True)
class ColumnFeatures:
    platform_height: int
    height_delta: HeightDelta
    gap_start: bool
    gap_end: bool
    in_gap: bool
    has_enemy: bool
    near_gap: bool


_HEX = "0123456789abcdef"


def _require_platformer(grid: TileGrid) -> None:
    if grid.domain is not Domain.PLATFORMER:
        raise ReprDomainMismatch(f"{grid.domain.value} levels only support the flat representation")


def platform_heights(grid: TileGrid) -> list[int]:
    heights = []
    for x in range(grid.width):
        h = 0
        for y in range(grid.height - 1, -1, -1):
            if grid[x, y] not in SOLID:
                break
            h += 1
        heights.append(h)
    return heights


def enemy_columns(grid: TileGrid) -> list[bool]:
    return [any(grid[x, y] is TileKind.GOOMBA for y in range(grid.height))
            for x in range(grid.width)]


def column_features(grid: TileGrid) -> list[ColumnFeatures]:
    _require_platformer(grid)
    heights = platform_heights(grid)
    enemies = enemy_columns(grid)
    gap = [h == 0 for h in heights]
    w = grid.width
    feats = []
    for x in range(w):
        left_gap = x > 0 and gap[x - 1]
        right_gap = x < w - 1 and gap[x + 1]
        if gap[x]:
            delta = HeightDelta.FLAT
        elif x == 0 or gap[x - 1] or heights[x] == heights[x - 1]:
            delta = HeightDelta.FLAT
        else:
            delta = HeightDelta.INC if heights[x] > heights[x - 1] else HeightDelta.DEC
        feats.append(ColumnFeatures(
            platform_height=heights[x],
            height_delta=delta,
            gap_start=gap[x] and not left_gap,
            gap_end=gap[x] and not right_gap,
            in_gap=gap[x],
            has_enemy=enemies[x],
            near_gap=not gap[x] and (left_gap or right_gap),
        ))
    return feats


def _symbol(f: ColumnFeatures) -> str:
    if f.in_gap:
        if f.gap_start and f.gap_end:
            return _HEX[0]
        if f.gap_start:
            return _HEX[1]
        if f.gap_end:
            return _HEX[3]
        return _HEX[2]
    return _HEX[4 + 4 * f.height_delta + 2 * f.near_gap + f.has_enemy]


def repr_normal(grid: TileGrid) -> str:
    return "".join(_symbol(f) for f in column_features(grid))


def repr_concatenated(grid: TileGrid) -> str:
    _require_platformer(grid)
    heights = platform_heights(grid)
    for x, h in enumerate(heights):
        if h > 9:
            raise HeightOverflow(f"column {x} has platform height {h} > 9")
    return "".join(map(str, heights)) + "".join("1" if e else "0" for e in enemy_columns(grid))


def repr_flat(grid: TileGrid) -> str:
    return flatten(grid)


def represent(grid: TileGrid, repr_: Repr) -> str:
    if repr_ is Repr.FLAT:
        return repr_flat(grid)
    if repr_ is Repr.NORMAL:
        return repr_normal(grid)
    return repr_concatenated(grid)
