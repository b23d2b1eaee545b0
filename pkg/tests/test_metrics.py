from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import maze, plat
from pcgeval.errors import (EmptyInput, InvalidDenominator, ReprDomainMismatch, Unsolvable, UnsolvedLevel)
from pcgeval.generators import gen_maze_with_difficulty, gen_platformer, gen_random_maze
from pcgeval.maze import MazeAction as M, MazeProblem, is_solvable, reachable_cells
from pcgeval.metrics import (Metric, MetricSample, astar_difficulty, astar_diversity, compression_distance,
                             dead_end_tiles, leniency_maze, leniency_platformer, levenshtein,
                             manhattan_diversity, ncd)
from pcgeval.planner import SearchResult, astar
from pcgeval.representations import Repr, represent


def _solved(actions, states=None):
    states = states or [(0, 0)] * (len(actions) + 1)
    return SearchResult(True, tuple(actions), tuple(states), frozenset(states), len(states))


# ------------------------------------------------------------------ ncd

def test_ncd_golden_self_distance():
    x = b"01" * 1000
    # gzip level 9, mtime 0: C(x) = 36 and C(xx) = 41 bytes
    assert ncd(x, x) == pytest.approx(5 / 36, abs=1e-12)
    assert ncd(x, x) < 0.2


def test_ncd_zeros_vs_noise():
    rng = random.Random(0)
    y = bytes(rng.getrandbits(8) for _ in range(4096))
    assert ncd(bytes(4096), y) > 0.7


def test_ncd_empty():
    with pytest.raises(EmptyInput):
        ncd(b"", b"x")


def test_ncd_nearly_symmetric_on_corpus():
    # measured on this corpus: mean 0.025, max 0.082; a few bytes of deflate
    # framing on ~100-byte outputs keep single pairs above 0.05
    levels = [gen_random_maze(20, 20, 0.3, s) for s in range(30)]
    strings = [represent(g, Repr.FLAT).encode() for g in levels]
    gaps = [abs(ncd(a, b) - ncd(b, a)) for a in strings for b in strings]
    assert sum(gaps) / len(gaps) < 0.05
    assert max(gaps) < 0.1


def test_compression_distance_rules():
    a = gen_random_maze(10, 10, 0.3, 1)
    s = represent(a, Repr.FLAT).encode()
    assert compression_distance(a, a).value == ncd(s, s)
    with pytest.raises(ReprDomainMismatch):
        compression_distance(a, a, Repr.NORMAL)
    p = gen_platformer(20, 8, 0.1, 0.1, 1)
    with pytest.raises(ReprDomainMismatch):
        compression_distance(a, p)
    sample = compression_distance(p, p, Repr.CONCATENATED, (2, 5))
    assert sample.metric is Metric.CD and sample.repr_tag is Repr.CONCATENATED


def test_metric_sample_ids():
    with pytest.raises(ValueError):
        MetricSample(Metric.CD, 0.1, (3, 3))
    with pytest.raises(ValueError):
        MetricSample(Metric.LENIENCY, 0.1, ())
    MetricSample(Metric.LENIENCY, 0.1, (4,))


# ------------------------------------------------------------- diversity

def test_levenshtein_examples():
    assert levenshtein([1, 2, 3], [1, 2, 3]) == 0
    assert levenshtein(list(b"kitten"), list(b"sitting")) == 3
    assert levenshtein([], [1, 2, 3, 4]) == 4


seqs = st.lists(st.integers(0, 3), max_size=25)


@given(seqs, seqs, seqs)
def test_levenshtein_metric_axioms(a, b, c):
    assert levenshtein(a, b) == levenshtein(b, a)
    assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)
    assert (levenshtein(a, b) == 0) == (a == b)


def test_astar_diversity_examples():
    R, D = M.RIGHT, M.DOWN
    assert astar_diversity(_solved([R, R, D, D]), _solved([R, R, D, D])) == 0.0
    assert astar_diversity(_solved([R, R, D, D]), _solved([D, D, R, R])) == 1.0
    assert astar_diversity(_solved([R, R, D, D]), _solved([R, D, R, D])) == 0.5
    with pytest.raises(UnsolvedLevel):
        astar_diversity(_solved([R]), SearchResult(False))


def test_manhattan_examples():
    a = _solved([M.RIGHT] * 4, [(x, 0) for x in range(5)])
    b = _solved([M.RIGHT] * 4, [(x, 1) for x in range(5)])
    assert manhattan_diversity(a, a) == 0.0
    assert manhattan_diversity(a, b) == 1.0
    short = _solved([M.RIGHT], [(0, 0), (1, 0)])
    # padded with (1, 0): distances 0, 0, 1, 2, 3
    assert manhattan_diversity(a, short) == pytest.approx(6 / 5)
    with pytest.raises(UnsolvedLevel):
        manhattan_diversity(a, SearchResult(False))


# ------------------------------------------------------------ difficulty

def test_difficulty_corridor_zero():
    p = MazeProblem(maze("....."))
    assert astar_difficulty(astar(p), p.reachable_count()) == 0.0


def test_difficulty_hand_fixture(dead_end_maze):
    p = MazeProblem(dead_end_maze)
    r = astar(p)
    assert p.reachable_count() == 17
    assert astar_difficulty(r, p.reachable_count()) == pytest.approx(6 / 17)


def test_difficulty_errors(dead_end_maze):
    r = astar(MazeProblem(dead_end_maze))
    with pytest.raises(InvalidDenominator):
        astar_difficulty(r, 3)
    with pytest.raises(InvalidDenominator):
        astar_difficulty(r, 0)
    with pytest.raises(UnsolvedLevel):
        astar_difficulty(SearchResult(False), 10)


# -------------------------------------------------------------- leniency

def test_leniency_corridor_zero():
    assert leniency_maze(maze(".....")) == 0.0


def test_leniency_two_stubs():
    g = maze("""
        .....
        ##.#.
        ##.#.
        ###..
        ####.
    """)
    assert dead_end_tiles(g) == {(2, 1), (2, 2), (3, 3)}
    assert leniency_maze(g) == pytest.approx(3 / 12)


def test_leniency_hand_fixture(dead_end_maze):
    # the left branch (6 cells) plus the two-cell spur hanging off it are dead ends
    assert leniency_maze(dead_end_maze) == pytest.approx(8 / 17)


def test_loop_is_not_a_dead_end():
    g = maze("""
        .....
        .#.#.
        .....
    """)
    assert leniency_maze(g) == 0.0


def test_unreachable_tiles_are_skipped():
    # (4,0) and (4,1) form a sealed pocket; every reachable tile is on the path
    g = maze("""
        ...#.
        ##.#.
        ...##
        .####
        .....
    """)
    assert leniency_maze(g) == 0.0
    assert dead_end_tiles(g) == set()


def test_leniency_unsolvable():
    with pytest.raises(Unsolvable):
        leniency_maze(maze("..#..\n..#.."))


@pytest.mark.parametrize("seed", range(5))
def test_perfect_maze_all_branches_dead(seed):
    g = gen_maze_with_difficulty(21, 21, 5, seed)
    p = MazeProblem(g)
    r = astar(p)
    reach = reachable_cells(g, (0, 0))
    assert leniency_maze(g) == pytest.approx((len(reach) - len(r.path_states)) / len(reach))


def test_platformer_leniency_examples():
    assert leniency_platformer(plat("""
        ----------
        XXXXXXXXXX
    """)) == 1.0
    assert leniency_platformer(plat("""
        ----------
        XXXX-XXXXX
    """)) == 0.0
    assert leniency_platformer(plat("""
        -------XXX
        XXXX-XXXXX
    """)) == 0.5
    assert leniency_platformer(plat("""
        --g-------
        XXXXXXXXXX
    """)) == 0.0


# ----------------------------------------------------------- properties

@given(st.integers(0, 10**6), st.sampled_from([0.1, 0.25, 0.35]))
@settings(max_examples=40, deadline=None)
def test_maze_metrics_in_unit_interval(seed, p):
    g = gen_random_maze(12, 12, p, seed)
    if not is_solvable(g):
        return
    prob = MazeProblem(g)
    r = astar(prob)
    assert 0.0 <= astar_difficulty(r, prob.reachable_count()) <= 1.0
    assert 0.0 <= leniency_maze(g) <= 1.0
    assert astar_diversity(r, r) == 0.0
