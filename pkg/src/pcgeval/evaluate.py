"""Per-level evaluation shared by the experiments and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BlockedEndpoint
from .level import Domain, TileGrid
from .maze import MazeProblem, is_solvable
from .metrics import astar_difficulty, leniency_maze, leniency_platformer
from .planner import DEFAULT_BUDGET, SearchResult, astar
from .platformer import PlatformerProblem, PlatformerState


def _platformer_key(s: PlatformerState):
    return s.key


def make_problem(grid: TileGrid):
    if grid.domain is Domain.MAZE:
        return MazeProblem(grid)
    return PlatformerProblem(grid)


@dataclass(frozen=True)
class LevelEvaluation:
    result: SearchResult
    reachable_count: int
    difficulty: float | None
    leniency: float | None
    reason: str = ""

    @property
    def solved(self) -> bool:
        return self.result.solved


def evaluate_level(grid: TileGrid, budget: int = DEFAULT_BUDGET, with_leniency: bool = False) -> LevelEvaluation:
    """Run A* and the per-level metrics; unsolvable levels come back with a reason."""
    if grid.domain is Domain.MAZE and not is_solvable(grid):
        try:
            MazeProblem(grid)
        except BlockedEndpoint:
            return LevelEvaluation(SearchResult(False), 0, None, None, "blocked_endpoint")
        return LevelEvaluation(SearchResult(False), 0, None, None, "no_path")

    problem = make_problem(grid)
    result = astar(problem, budget=budget)
    if not result.solved:
        reason = "budget_exhausted" if result.budget_exhausted else "no_path"
        return LevelEvaluation(result, 0, None, None, reason)

    reachable = problem.reachable_count()
    project = _platformer_key if grid.domain is Domain.PLATFORMER else None
    difficulty = astar_difficulty(result, reachable, project)
    leniency = None
    if with_leniency:
        leniency = leniency_maze(grid) if grid.domain is Domain.MAZE else leniency_platformer(grid)
    return LevelEvaluation(result, reachable, difficulty, leniency)
