"""Domain-agnostic A* that records what the metrics need.

A problem object supplies ``start``, ``successors(state)`` returning
``(action_code, next_state)`` pairs, ``heuristic(state)`` and
``is_goal(state)``. Every edge costs 1.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Protocol, Sequence

from .errors import NotSolved

DEFAULT_BUDGET = 1_000_000


class SearchProblem(Protocol):
    start: Hashable

    def successors(self, s: Any) -> Sequence[tuple[int, Any]]: ...

    def heuristic(self, s: Any) -> float: ...

    def is_goal(self, s: Any) -> bool: ...


@dataclass(frozen=True)
class SearchResult:
    solved: bool
    actions: tuple[int, ...] = ()
    path_states: tuple[Any, ...] = ()
    expanded: frozenset = field(default_factory=frozenset)
    expansions_total: int = 0
    budget_exhausted: bool = False


def astar(problem: SearchProblem, start: Hashable | None = None, budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Closed-set A*; each state is expanded at most once.

    Frontier order: lowest f, then highest g, then earliest insertion.
    Improved paths to already-queued states are re-inserted and the stale
    heap entries skipped on pop.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if start is None:
        start = problem.start
    counter = itertools.count()
    g_cost = {start: 0}
    parent: dict[Hashable, tuple[Hashable, int] | None] = {start: None}
    frontier = [(problem.heuristic(start), 0, next(counter), start)]
    closed: set = set()

    while frontier:
        f, neg_g, _, s = heapq.heappop(frontier)
        g = -neg_g
        if s in closed or g > g_cost[s]:
            continue
        if problem.is_goal(s):
            actions, path = _reconstruct(parent, s)
            return SearchResult(True, actions, path, frozenset(closed), len(closed))
        if len(closed) >= budget:
            return SearchResult(False, expanded=frozenset(closed),
                                expansions_total=len(closed), budget_exhausted=True)
        closed.add(s)
        for action, t in problem.successors(s):
            if t in closed:
                continue
            ng = g + 1
            if ng < g_cost.get(t, float("inf")):
                g_cost[t] = ng
                parent[t] = (s, action)
                heapq.heappush(frontier, (ng + problem.heuristic(t), -ng, next(counter), t))

    return SearchResult(False, expanded=frozenset(closed), expansions_total=len(closed))


def _reconstruct(parent, s):
    actions, path = [], [s]
    link = parent[s]
    while link is not None:
        prev, action = link
        actions.append(action)
        path.append(prev)
        link = parent[prev]
    return tuple(reversed(actions)), tuple(reversed(path))


def off_path_expansions(r: SearchResult, project: Callable[[Any], Hashable] | None = None) -> int:
    """Number of expanded states that are not on the solution path.

    ``project`` maps states to the identity used for counting, for domains
    whose search state carries more than the reachability key.
    """
    if not r.solved:
        raise NotSolved("off-path expansions are only defined for solved searches")
    if project is None:
        return len(r.expanded - set(r.path_states))
    return len({project(s) for s in r.expanded} - {project(s) for s in r.path_states})
