from __future__ import annotations

import pytest

from pcgeval.level import Domain, parse_level


def maze(text: str):
    return parse_level("\n".join(line.strip() for line in text.strip().splitlines()), Domain.MAZE)


def plat(text: str):
    return parse_level("\n".join(line.strip() for line in text.strip().splitlines()), Domain.PLATFORMER)


# 5x5 maze with one dead-end branch off the main path; counts worked out by hand
DEAD_END_5 = """
.....
.###.
...#.
##.#.
...#.
"""


@pytest.fixture
def dead_end_maze():
    return maze(DEAD_END_5)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
