"""Tile grids, their text format, and level-set files.

Coordinates everywhere are (x, y) with the origin at the top-left corner,
x growing rightward and y growing downward. Tiles are stored row-major.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import RaggedLines, UnknownTileCode


class Domain(enum.Enum):
    MAZE = "maze"
    PLATFORMER = "platformer"


class TileKind(enum.Enum):
    """Tile kinds; the value is the one-character file code."""

    EMPTY = "."
    WALL = "#"
    AIR = "-"
    GROUND = "X"
    BRICK = "B"
    GOOMBA = "g"
    FLAG = "F"

    @property
    def code(self) -> str:
        return self.value


DOMAIN_TILES: dict[Domain, frozenset[TileKind]] = {
    Domain.MAZE: frozenset({TileKind.EMPTY, TileKind.WALL}),
    Domain.PLATFORMER: frozenset(
        {TileKind.AIR, TileKind.GROUND, TileKind.BRICK, TileKind.GOOMBA, TileKind.FLAG}
    ),
}

_CODE_TO_TILE: dict[Domain, dict[str, TileKind]] = {
    d: {t.code: t for t in kinds} for d, kinds in DOMAIN_TILES.items()
}

# flatten() symbols; the maze uses the binary wall string
_FLAT_SYMBOL = {
    TileKind.EMPTY: "0",
    TileKind.WALL: "1",
    TileKind.AIR: "-",
    TileKind.GROUND: "X",
    TileKind.BRICK: "B",
    TileKind.GOOMBA: "g",
    TileKind.FLAG: "F",
}


@dataclass(frozen=True)
class TileGrid:
    width: int
    height: int
    tiles: tuple[TileKind, ...]
    domain: Domain

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"grid dimensions must be positive, got {self.width}x{self.height}")
        if len(self.tiles) != self.width * self.height:
            raise ValueError(
                f"expected {self.width * self.height} tiles, got {len(self.tiles)}"
            )
        legal = DOMAIN_TILES[self.domain]
        for i, t in enumerate(self.tiles):
            if t not in legal:
                raise UnknownTileCode(t.code, i // self.width, i % self.width)

    def __getitem__(self, pos: tuple[int, int]) -> TileKind:
        x, y = pos
        return self.tiles[y * self.width + x]

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def rows(self) -> Iterator[tuple[TileKind, ...]]:
        for y in range(self.height):
            yield self.tiles[y * self.width:(y + 1) * self.width]

    def replace(self, changes: dict[tuple[int, int], TileKind]) -> TileGrid:
        """Return a copy with the given (x, y) -> tile substitutions."""
        tiles = list(self.tiles)
        for (x, y), t in changes.items():
            tiles[y * self.width + x] = t
        return TileGrid(self.width, self.height, tuple(tiles), self.domain)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[TileKind]], domain: Domain) -> TileGrid:
        height = len(rows)
        width = len(rows[0]) if rows else 0
        tiles = tuple(t for row in rows for t in row)
        return cls(width, height, tiles, domain)

    @classmethod
    def filled(cls, width: int, height: int, tile: TileKind, domain: Domain) -> TileGrid:
        return cls(width, height, (tile,) * (width * height), domain)


def parse_level(text: str, domain: Domain) -> TileGrid:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [ln.rstrip("\r") for ln in lines]
    if not lines or not lines[0]:
        raise RaggedLines("level text is empty")
    width = len(lines[0])
    table = _CODE_TO_TILE[domain]
    tiles = []
    for row, line in enumerate(lines):
        if len(line) != width:
            raise RaggedLines(f"row {row} has length {len(line)}, expected {width}")
        for col, ch in enumerate(line):
            try:
                tiles.append(table[ch])
            except KeyError:
                raise UnknownTileCode(ch, row, col) from None
    return TileGrid(width, len(lines), tuple(tiles), domain)


def serialize_level(grid: TileGrid) -> str:
    return "\n".join("".join(t.code for t in row) for row in grid.rows())


def flatten(grid: TileGrid) -> str:
    """Row-major string of tile symbols ('0'/'1' for maze empty/wall)."""
    return "".join(_FLAT_SYMBOL[t] for t in grid.tiles)


@dataclass(frozen=True)
class LevelSet:
    levels: tuple[TileGrid, ...]
    seed: int = 0
    source_label: str = ""

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        domains = {g.domain for g in self.levels}
        if len(domains) > 1:
            raise ValueError("all levels in a set must share a domain")

    def __len__(self) -> int:
        return len(self.levels)

    def __iter__(self) -> Iterator[TileGrid]:
        return iter(self.levels)

    def __getitem__(self, i: int) -> TileGrid:
        return self.levels[i]

    @property
    def domain(self) -> Domain | None:
        return self.levels[0].domain if self.levels else None


def parse_level_set(text: str, domain: Domain, seed: int = 0, source_label: str = "") -> LevelSet:
    """Parse levels separated by blank lines; lines starting with '%' are comments."""
    levels = []
    block: list[str] = []
    for line in text.split("\n"):
        line = line.rstrip("\r")
        if line.startswith("%"):
            continue
        if line == "":
            if block:
                levels.append(parse_level("\n".join(block), domain))
                block = []
            continue
        block.append(line)
    if block:
        levels.append(parse_level("\n".join(block), domain))
    return LevelSet(tuple(levels), seed, source_label)


def serialize_level_set(levels: Iterable[TileGrid], header: Sequence[str] = ()) -> str:
    parts = ["\n".join(f"% {h}" for h in header)] if header else []
    parts.extend(serialize_level(g) for g in levels)
    return "\n\n".join(parts) + "\n"


def read_level(path: str | Path, domain: Domain) -> TileGrid:
    return parse_level(Path(path).read_text(encoding="utf-8"), domain)


def read_level_set(path: str | Path, domain: Domain) -> LevelSet:
    return parse_level_set(Path(path).read_text(encoding="utf-8"), domain, source_label=str(path))
