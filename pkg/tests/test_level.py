from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from pcgeval.errors import RaggedLines, UnknownTileCode
from pcgeval.level import (Domain, LevelSet, TileGrid, TileKind, flatten, parse_level, parse_level_set,
                           read_level_set, serialize_level, serialize_level_set)


def test_parse_all_empty():
    g = parse_level("..\n..", Domain.MAZE)
    assert (g.width, g.height) == (2, 2)
    assert all(t is TileKind.EMPTY for t in g.tiles)


def test_parse_walls_at_expected_coordinates():
    g = parse_level(".#\n#.", Domain.MAZE)
    assert g[1, 0] is TileKind.WALL and g[0, 1] is TileKind.WALL
    assert g[0, 0] is TileKind.EMPTY and g[1, 1] is TileKind.EMPTY


def test_ragged_lines():
    with pytest.raises(RaggedLines):
        parse_level("..\n...", Domain.MAZE)


def test_unknown_code_reports_position():
    with pytest.raises(UnknownTileCode) as info:
        parse_level("..\n.X", Domain.MAZE)
    assert (info.value.row, info.value.col) == (1, 1)


def test_platformer_code_illegal_in_maze_and_back():
    with pytest.raises(UnknownTileCode):
        parse_level("#", Domain.PLATFORMER)
    g = parse_level("-gF\nXBX", Domain.PLATFORMER)
    assert g[1, 0] is TileKind.GOOMBA and g[1, 1] is TileKind.BRICK


def test_grid_rejects_foreign_tiles():
    with pytest.raises(UnknownTileCode):
        TileGrid(1, 1, (TileKind.GROUND,), Domain.MAZE)
    with pytest.raises(ValueError):
        TileGrid(2, 1, (TileKind.EMPTY,), Domain.MAZE)


def test_serialize_examples():
    assert serialize_level(TileGrid.filled(2, 2, TileKind.EMPTY, Domain.MAZE)) == "..\n.."
    assert serialize_level(TileGrid.filled(1, 1, TileKind.WALL, Domain.MAZE)) == "#"


def test_trailing_newline_optional():
    assert parse_level("..\n..\n", Domain.MAZE) == parse_level("..\n..", Domain.MAZE)


def test_flatten_examples():
    assert flatten(parse_level(".#\n#.", Domain.MAZE)) == "0110"
    assert flatten(parse_level("...", Domain.MAZE)) == "000"
    assert flatten(parse_level("-X\nFg", Domain.PLATFORMER)) == "-XFg"


maze_rows = st.integers(1, 12).flatmap(
    lambda w: st.lists(st.text(alphabet=".#", min_size=w, max_size=w), min_size=1, max_size=12))


@given(maze_rows)
def test_roundtrip_and_flatten_length(rows):
    text = "\n".join(rows)
    g = parse_level(text, Domain.MAZE)
    assert serialize_level(g) == text
    assert parse_level(serialize_level(g), Domain.MAZE) == g
    flat = flatten(g)
    assert len(flat) == g.width * g.height
    assert set(flat) <= {"0", "1"}


def test_roundtrip_generated_40x40():
    from pcgeval.generators import gen_random_maze
    for seed in range(5):
        g = gen_random_maze(40, 40, 0.3, seed)
        assert parse_level(serialize_level(g), Domain.MAZE) == g


def test_level_set_file_roundtrip(tmp_path):
    levels = [parse_level(".#\n..", Domain.MAZE), parse_level("..\n#.", Domain.MAZE)]
    path = tmp_path / "set.txt"
    path.write_text(serialize_level_set(levels, ["seed=3", "made by a test"]))
    assert path.read_text().startswith("% seed=3\n% made by a test\n\n")
    loaded = read_level_set(path, Domain.MAZE)
    assert list(loaded) == levels
    assert list(read_level_set(path, Domain.MAZE)) == list(loaded)


def test_level_set_comments_and_domain():
    s = parse_level_set("% hi\n..\n\n% mid\n##\n", Domain.MAZE)
    assert len(s) == 2 and s.domain is Domain.MAZE
    with pytest.raises(ValueError):
        LevelSet((parse_level("..", Domain.MAZE), parse_level("--", Domain.PLATFORMER)))
    with pytest.raises(ValueError):
        LevelSet((), seed=-1)
