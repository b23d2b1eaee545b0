"""Pearson correlation and the Mann-Whitney U test."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import special

from .errors import DegenerateInput

EXACT_MAX_N = 12


class Alternative(enum.Enum):
    LESS = "less"
    GREATER = "greater"
    TWO_SIDED = "two-sided"


@dataclass(frozen=True)
class StatReport:
    statistic: float
    p_value: float
    n1: int
    n2: int
    alternative: Alternative = Alternative.TWO_SIDED

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value} outside [0, 1]")
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("sample sizes must be positive")


def pearson(xs: Sequence[float], ys: Sequence[float]) -> StatReport:
    """Pearson r with a two-sided p-value from Student's t on n - 2 df."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DegenerateInput("pearson needs two equal-length 1-d samples")
    n = len(x)
    if n < 3:
        raise DegenerateInput(f"pearson needs at least 3 points, got {n}")
    # compare against the first value; the mean of a constant float sample can round off
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise DegenerateInput("zero variance in one of the samples")
    dx = x - x.mean()
    dy = y - y.mean()
    # r is scale-free; normalising keeps tiny samples (e.g. 1e-306) from underflowing to 0
    dx /= np.abs(dx).max()
    dy /= np.abs(dy).max()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = min(1.0, max(-1.0, r))
    df = n - 2
    if abs(r) == 1.0:
        p = 0.0
    else:
        t = r * math.sqrt(df / (1.0 - r * r))
        p = 2.0 * special.stdtr(df, -abs(t))
    return StatReport(r, float(min(1.0, p)), n, n)


def rankdata(values: Sequence[float]) -> list[float]:
    """1-based ranks; ties get the mean of the ranks they span."""
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mid = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = mid
        i = j + 1
    return ranks


def _exact_p(u: float, n1: int, n2: int, alternative: Alternative) -> float:
    # distribution of U over every assignment of ranks 1..n to the first sample
    n = n1 + n2
    offset = n1 * (n1 + 1) / 2.0
    us = [sum(c) + n1 - offset for c in itertools.combinations(range(n), n1)]
    total = len(us)
    lower = sum(1 for v in us if v <= u) / total
    upper = sum(1 for v in us if v >= u) / total
    if alternative is Alternative.LESS:
        return lower
    if alternative is Alternative.GREATER:
        return upper
    return min(1.0, 2.0 * min(lower, upper))


def mann_whitney_u(a: Sequence[float], b: Sequence[float],
                   alternative: Alternative = Alternative.TWO_SIDED, exact: bool | None = None) -> StatReport:
    """U statistic of ``a`` with a p-value for the chosen alternative.

    ``Alternative.LESS`` tests whether ``a`` is stochastically smaller than
    ``b``. Small tie-free samples (n1 + n2 <= 12) use the exact null
    distribution; otherwise the normal approximation with tie and continuity
    corrections. ``exact`` forces one path or the other (the exact path
    still requires tie-free data).
    """
    n1, n2 = len(a), len(b)
    if n1 < 1 or n2 < 1:
        raise DegenerateInput("both samples must be non-empty")
    pooled = [float(v) for v in a] + [float(v) for v in b]
    ranks = rankdata(pooled)
    u = sum(ranks[:n1]) - n1 * (n1 + 1) / 2.0
    n = n1 + n2
    has_ties = len(set(pooled)) < n

    if exact is None:
        exact = n <= EXACT_MAX_N and not has_ties
    elif exact and has_ties:
        raise DegenerateInput("the exact null distribution assumes no ties")
    if exact:
        p = _exact_p(u, n1, n2, alternative)
        return StatReport(u, p, n1, n2, alternative)

    mu = n1 * n2 / 2.0
    tie_term = sum(t ** 3 - t for t in _tie_counts(pooled))
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0.0:
        return StatReport(u, 1.0, n1, n2, alternative)
    sd = math.sqrt(var)
    if alternative is Alternative.LESS:
        p = special.ndtr((u - mu + 0.5) / sd)
    elif alternative is Alternative.GREATER:
        p = special.ndtr(-(u - mu - 0.5) / sd)
    else:
        z = (abs(u - mu) - 0.5) / sd
        p = 2.0 * special.ndtr(-z)
    return StatReport(u, float(min(1.0, max(0.0, p))), n1, n2, alternative)


def _tie_counts(values: list[float]) -> list[int]:
    counts: dict[float, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return [c for c in counts.values() if c > 1]


def pairwise_indices(n: int) -> list[tuple[int, int]]:
    if n < 2:
        raise ValueError("need at least two items to form pairs")
    return list(itertools.combinations(range(n), 2))
