"""Experiment recipes: corpus generation, metric sweeps and deterministic file output.

Every recipe writes into ``cfg.output_dir``:

    samples.csv       one row per (seed, pair or level, metric, repr)
    exclusions.csv    candidate levels that were dropped, with the reason
    levels/           the level sets that were evaluated

plus a recipe-specific summary, matrix or report file. Rows are sorted by a
canonical key before writing, so worker scheduling never changes output bytes.
"""

from __future__ import annotations

import csv
import enum
import logging
import os
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .errors import ConfigError, DegenerateInput, InsufficientSolvable, UnsolvableBase
from .evaluate import LevelEvaluation, evaluate_level
from .generators import (DEFAULT_PLATFORMER_PARAMS, derive_seed, gen_difficulty_classes,
                         gen_fixed_path_base, gen_maze_with_difficulty, gen_platformer,
                         gen_random_maze, gen_visual_variants)
from .level import Domain, TileGrid, serialize_level_set
from .metrics import Metric, astar_diversity, compressed_size, manhattan_diversity
from .planner import DEFAULT_BUDGET
from .representations import Repr, represent
from .stats import Alternative, StatReport, mann_whitney_u, pairwise_indices, pearson

log = logging.getLogger(__name__)

CSV_COLUMNS = ("experiment", "domain", "seed", "size_w", "size_h", "metric", "repr", "id_a", "id_b", "value")
SUMMARY_COLUMNS = ("experiment", "domain", "size_w", "size_h", "metric", "repr", "n", "mean", "variance")
EXCLUSION_COLUMNS = ("experiment", "domain", "seed", "size_w", "size_h", "candidate", "reason")

THREADS_ENV = "PCG_EVAL_THREADS"


class Experiment(enum.Enum):
    DIVERSITY_DISTRIBUTION = "diversity_distribution"
    SIZE_SWEEP = "size_sweep"
    VISUAL_VARIATION = "visual_variation"
    DIFFICULTY_ORDERING = "difficulty_ordering"
    DIFFICULTY_CORRELATION = "difficulty_correlation"


class MazeSource(enum.Enum):
    RANDOM = "random"          # independent wall tiles at wall_prob
    DIFFICULTY = "difficulty"  # carved mazes, class fixed or drawn per level


@dataclass
class ExperimentConfig:
    experiment: Experiment
    domain: Domain = Domain.MAZE
    sizes: list[tuple[int, int]] = field(default_factory=lambda: [(20, 20)])
    n_levels: int = 100
    seeds: list[int] = field(default_factory=lambda: [0, 1, 2, 3, 4])
    reprs: list[Repr] = field(default_factory=lambda: list(Repr))
    output_dir: Path = Path("out")
    budget: int = DEFAULT_BUDGET
    maze_source: MazeSource = MazeSource.RANDOM
    wall_prob: float = 0.3
    difficulty: int | None = None
    max_attempts_factor: int = 50
    threads: int = 1

    def __post_init__(self):
        if not self.sizes:
            raise ConfigError("sizes must not be empty")
        if not self.seeds:
            raise ConfigError("seeds must not be empty")
        if self.n_levels < 1:
            raise ConfigError("n_levels must be positive")
        if self.budget < 1:
            raise ConfigError("budget must be positive")
        self.output_dir = Path(self.output_dir)

    @property
    def domain_reprs(self) -> list[Repr]:
        if self.domain is Domain.MAZE:
            return [Repr.FLAT]
        return [r for r in Repr if r in self.reprs]


class Row(NamedTuple):
    experiment: str
    domain: str
    seed: int
    size_w: int
    size_h: int
    metric: str
    repr: str
    id_a: int
    id_b: int | None
    value: float

    def sort_key(self):
        return (self.seed, self.size_w, self.size_h, self.metric, self.repr,
                self.id_a, -1 if self.id_b is None else self.id_b)


class Exclusion(NamedTuple):
    experiment: str
    domain: str
    seed: int
    size_w: int
    size_h: int
    candidate: int
    reason: str


@dataclass
class Outcome:
    """In-memory result of a recipe, mirroring what was written to disk."""

    rows: list[Row] = field(default_factory=list)
    exclusions: list[Exclusion] = field(default_factory=list)
    summary: list[tuple] = field(default_factory=list)
    matrices: dict[tuple[int, str], "OrderingMatrix"] = field(default_factory=dict)
    report: StatReport | None = None
    files: list[Path] = field(default_factory=list)

    def values(self, metric: Metric, repr_: Repr | None = None, seed: int | None = None,
               size: tuple[int, int] | None = None) -> list[float]:
        tag = repr_.value if repr_ else ""
        return [r.value for r in self.rows
                if r.metric == metric.value and r.repr == tag
                and (seed is None or r.seed == seed)
                and (size is None or (r.size_w, r.size_h) == tuple(size))]


# ------------------------------------------------------------------- configs

def _parse_sizes(text: str) -> list[tuple[int, int]]:
    sizes = []
    for part in _split_list(text):
        w, _, h = part.lower().partition("x")
        sizes.append((int(w), int(h or w)))
    return sizes


def _split_list(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


_PARSERS: dict[str, Callable[[str], object]] = {
    "experiment": Experiment,
    "domain": Domain,
    "sizes": _parse_sizes,
    "n_levels": int,
    "seeds": lambda t: [int(s) for s in _split_list(t)],
    "reprs": lambda t: [Repr(s) for s in _split_list(t)],
    "output_dir": Path,
    "budget": int,
    "maze_source": MazeSource,
    "wall_prob": float,
    "difficulty": lambda t: None if t.lower() in ("", "none", "random") else int(t),
    "max_attempts_factor": int,
    "threads": int,
}


def parse_config_text(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines; '#' starts a comment."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        raw[key.strip().replace("-", "_")] = value.strip()
    return raw


def build_config(raw: dict[str, str]) -> ExperimentConfig:
    kwargs = {}
    for key, value in raw.items():
        if key not in _PARSERS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            kwargs[key] = _PARSERS[key](value)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from None
    if "experiment" not in kwargs:
        raise ConfigError("config needs an 'experiment' key")
    if "threads" not in kwargs and os.environ.get(THREADS_ENV):
        try:
            kwargs["threads"] = int(os.environ[THREADS_ENV])
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer") from None
    return ExperimentConfig(**kwargs)


def load_config(path: str | Path | None, overrides: dict[str, str] | None = None) -> ExperimentConfig:
    raw = {}
    if path is not None:
        try:
            raw = parse_config_text(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
    raw.update(overrides or {})
    return build_config(raw)


# ------------------------------------------------------------------ corpora

def _pool_map(fn, items: Sequence, threads: int) -> list:
    if threads > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))
    return [fn(x) for x in items]


def candidate_levels(cfg: ExperimentConfig, seed: int, w: int, h: int) -> Iterator[TileGrid]:
    """Endless seeded stream of candidate levels for one (seed, size) cell."""
    rng = random.Random(derive_seed(seed, w, h, 0xC1A55))
    i = 0
    while True:
        level_seed = derive_seed(seed, w, h, i)
        if cfg.domain is Domain.PLATFORMER:
            yield gen_platformer(w, h, seed=level_seed, **DEFAULT_PLATFORMER_PARAMS)
        elif cfg.maze_source is MazeSource.RANDOM:
            yield gen_random_maze(w, h, cfg.wall_prob, level_seed)
        else:
            cls = cfg.difficulty if cfg.difficulty is not None else rng.randint(1, 5)
            yield gen_maze_with_difficulty(w, h, cls, level_seed)
        i += 1


def collect_solvable(cfg: ExperimentConfig, seed: int, w: int, h: int,
                     with_leniency: bool = False) -> tuple[list[TileGrid], list[LevelEvaluation], list[Exclusion]]:
    """Draw candidates until ``n_levels`` are solved by the planner."""
    levels, evals, excluded = [], [], []
    max_attempts = cfg.n_levels * cfg.max_attempts_factor
    stream = candidate_levels(cfg, seed, w, h)
    evaluate = partial(evaluate_level, budget=cfg.budget, with_leniency=with_leniency)
    attempts = 0
    while len(levels) < cfg.n_levels and attempts < max_attempts:
        batch = [next(stream) for _ in range(min(cfg.n_levels - len(levels), max_attempts - attempts))]
        for grid, ev in zip(batch, _pool_map(evaluate, batch, cfg.threads)):
            if ev.solved:
                levels.append(grid)
                evals.append(ev)
            else:
                excluded.append(Exclusion(cfg.experiment.value, cfg.domain.value, seed, w, h, attempts, ev.reason))
            attempts += 1
    if len(levels) < 2:
        raise InsufficientSolvable(f"seed {seed}, size {w}x{h}: only {len(levels)} solvable levels "
                                   f"after {attempts} candidates")
    return levels, evals, excluded


# ---------------------------------------------------------------- pairwise

def pairwise_rows(levels: Sequence[TileGrid], evals: Sequence[LevelEvaluation], reprs: Iterable[Repr],
                  experiment: str, seed: int, manhattan: bool = True) -> list[Row]:
    """CD per representation plus A* (and Manhattan) diversity for every pair i < j."""
    w, h = levels[0].width, levels[0].height
    domain = levels[0].domain.value
    pairs = pairwise_indices(len(levels))
    rows = []
    for rp in reprs:
        strings = [represent(g, rp).encode() for g in levels]
        sizes = [compressed_size(s) for s in strings]
        for i, j in pairs:
            cxy = compressed_size(strings[i] + strings[j])
            value = (cxy - min(sizes[i], sizes[j])) / max(sizes[i], sizes[j])
            rows.append(Row(experiment, domain, seed, w, h, Metric.CD.value, rp.value, i, j, value))
    results = [ev.result for ev in evals]
    for i, j in pairs:
        rows.append(Row(experiment, domain, seed, w, h, Metric.ASTAR_DIVERSITY.value, "", i, j,
                        astar_diversity(results[i], results[j])))
        if manhattan:
            rows.append(Row(experiment, domain, seed, w, h, Metric.MANHATTAN_DIVERSITY.value, "", i, j,
                            manhattan_diversity(results[i], results[j])))
    return rows


# ------------------------------------------------------------------ writing

def _fmt(v):
    return "" if v is None else v


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def _write_common(cfg: ExperimentConfig, out: Outcome) -> None:
    out.rows.sort(key=Row.sort_key)
    out.exclusions.sort()
    out.files.append(write_csv(cfg.output_dir / "samples.csv", CSV_COLUMNS, out.rows))
    out.files.append(write_csv(cfg.output_dir / "exclusions.csv", EXCLUSION_COLUMNS, out.exclusions))


def _write_levels(cfg: ExperimentConfig, name: str, levels: Sequence[TileGrid], header: Sequence[str]) -> Path:
    path = cfg.output_dir / "levels" / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_level_set(levels, header), encoding="utf-8")
    return path


def summarize(rows: Iterable[Row], experiment: str) -> list[tuple]:
    groups: dict[tuple, list[float]] = {}
    for r in rows:
        groups.setdefault((r.domain, r.size_w, r.size_h, r.metric, r.repr), []).append(r.value)
    out = []
    for (domain, w, h, metric, rp), vals in sorted(groups.items()):
        var = statistics.variance(vals) if len(vals) > 1 else 0.0
        out.append((experiment, domain, w, h, metric, rp, len(vals), statistics.fmean(vals), var))
    return out


# ------------------------------------------------------------------ recipes

def run_diversity_distribution(cfg: ExperimentConfig, size: tuple[int, int] | None = None) -> Outcome:
    w, h = size or cfg.sizes[0]
    out = Outcome()
    for seed in cfg.seeds:
        levels, evals, excluded = collect_solvable(cfg, seed, w, h)
        out.exclusions.extend(excluded)
        out.rows.extend(pairwise_rows(levels, evals, cfg.domain_reprs, cfg.experiment.value, seed))
        out.files.append(_write_levels(cfg, f"seed{seed}_{w}x{h}.txt", levels,
                                       [f"seed={seed}", f"size={w}x{h}", f"domain={cfg.domain.value}"]))
        log.info("seed %d size %dx%d: %d levels, %d excluded", seed, w, h, len(levels), len(excluded))
    if size is None:
        _write_common(cfg, out)
    return out


def run_size_sweep(cfg: ExperimentConfig) -> Outcome:
    if len(cfg.sizes) < 2:
        raise ConfigError("a size sweep needs at least two sizes")
    out = Outcome()
    for size in cfg.sizes:
        part = run_diversity_distribution(cfg, size)
        out.rows.extend(part.rows)
        out.exclusions.extend(part.exclusions)
        out.files.extend(part.files)
    _write_common(cfg, out)
    out.summary = summarize(out.rows, cfg.experiment.value)
    out.files.append(write_csv(cfg.output_dir / "summary.csv", SUMMARY_COLUMNS, out.summary))
    return out


def run_visual_variation(cfg: ExperimentConfig) -> Outcome:
    """Variants sharing one walled-in corridor; only unreachable tiles differ."""
    w, h = cfg.sizes[0]
    out = Outcome()
    control = []
    for seed in cfg.seeds:
        base = gen_fixed_path_base(w, h, seed)
        base_eval = evaluate_level(base, cfg.budget)
        if not base_eval.solved:
            raise UnsolvableBase(f"seed {seed}: fixed-path base is unsolvable ({base_eval.reason})")
        variants = list(gen_visual_variants(base, cfg.n_levels, seed))
        evals = [evaluate_level(g, cfg.budget) for g in variants]
        out.rows.extend(pairwise_rows(variants, evals, [Repr.FLAT], cfg.experiment.value, seed))
        # identical copies of the base as the no-variation reference
        copies = [base] * cfg.n_levels
        control.extend(r for r in pairwise_rows(copies, [base_eval] * cfg.n_levels, [Repr.FLAT],
                                                "visual_variation_identical", seed, manhattan=False)
                       if r.metric == Metric.CD.value)
        out.files.append(_write_levels(cfg, f"seed{seed}_{w}x{h}.txt", variants,
                                       [f"seed={seed}", "visual variants of a fixed-path base"]))
    _write_common(cfg, out)
    out.summary = summarize(out.rows, cfg.experiment.value) + summarize(control, "visual_variation_identical")
    out.files.append(write_csv(cfg.output_dir / "summary.csv", SUMMARY_COLUMNS, out.summary))
    return out


@dataclass(frozen=True)
class OrderingMatrix:
    """Class means on the diagonal, one-sided Mann-Whitney p-values off it.

    ``cells[i][j]`` for i != j is the p-value for the alternative
    ``metric(class i) < metric(class j)`` (``LESS``) or ``>`` (``GREATER``).
    """

    labels: tuple[int, ...]
    cells: tuple[tuple[float, ...], ...]
    alternative: Alternative

    def p(self, i: int, j: int) -> float:
        return self.cells[self.labels.index(i)][self.labels.index(j)]

    def mean(self, i: int) -> float:
        k = self.labels.index(i)
        return self.cells[k][k]


def ordering_matrix(groups: dict[int, Sequence[float]], alternative: Alternative) -> OrderingMatrix:
    labels = tuple(sorted(groups))
    cells = []
    for i in labels:
        row = []
        for j in labels:
            if i == j:
                row.append(statistics.fmean(groups[i]))
            else:
                row.append(mann_whitney_u(groups[i], groups[j], alternative).p_value)
        cells.append(tuple(row))
    return OrderingMatrix(labels, tuple(cells), alternative)


def run_difficulty_ordering(cfg: ExperimentConfig) -> Outcome:
    """Carved mazes per difficulty class; A* difficulty and leniency per class."""
    if cfg.domain is not Domain.MAZE:
        raise ConfigError("difficulty ordering uses the maze difficulty generator")
    w, h = cfg.sizes[0]
    out = Outcome()
    exp = cfg.experiment.value
    evaluate = partial(evaluate_level, budget=cfg.budget, with_leniency=True)
    for seed in cfg.seeds:
        labels = []
        difficulty: dict[int, list[float]] = {}
        leniency: dict[int, list[float]] = {}
        for cs in gen_difficulty_classes(w, h, cfg.n_levels, seed):
            cls = int(cs.class_label)
            evals = _pool_map(evaluate, list(cs.levels), cfg.threads)
            for i, ev in enumerate(evals):
                level_id = (cls - 1) * cfg.n_levels + i
                labels.append((level_id, cls))
                if not ev.solved:
                    out.exclusions.append(Exclusion(exp, "maze", seed, w, h, level_id, ev.reason))
                    continue
                difficulty.setdefault(cls, []).append(ev.difficulty)
                leniency.setdefault(cls, []).append(ev.leniency)
                out.rows.append(Row(exp, "maze", seed, w, h, Metric.ASTAR_DIFFICULTY.value, "", level_id, None,
                                    ev.difficulty))
                out.rows.append(Row(exp, "maze", seed, w, h, Metric.LENIENCY.value, "", level_id, None,
                                    ev.leniency))
            out.files.append(_write_levels(cfg, f"seed{seed}_class{cls}_{w}x{h}.txt", cs.levels,
                                           [f"seed={seed}", f"class={cls}"]))
        out.files.append(write_csv(cfg.output_dir / f"labels_seed{seed}.csv", ("id", "class"), labels))
        for metric, groups, alt in ((Metric.ASTAR_DIFFICULTY, difficulty, Alternative.LESS),
                                    (Metric.LENIENCY, leniency, Alternative.GREATER)):
            m = ordering_matrix(groups, alt)
            out.matrices[(seed, metric.value)] = m
            out.files.append(write_csv(cfg.output_dir / f"matrix_{metric.value}_seed{seed}.csv",
                                       ("class",) + tuple(str(c) for c in m.labels),
                                       [(lab,) + row for lab, row in zip(m.labels, m.cells)]))
    _write_common(cfg, out)
    return out


def difficulty_correlation(leniencies: Sequence[float], difficulties: Sequence[float]) -> StatReport:
    """Pearson correlation between per-level leniency and A* difficulty."""
    return pearson(leniencies, difficulties)


MIN_CORRELATION_LEVELS = 100


def run_difficulty_correlation(cfg: ExperimentConfig) -> Outcome:
    w, h = cfg.sizes[0]
    out = Outcome()
    exp = cfg.experiment.value
    dom = cfg.domain.value
    len_all, diff_all = [], []
    offset = 0
    for seed in cfg.seeds:
        levels, evals, excluded = collect_solvable(cfg, seed, w, h, with_leniency=True)
        out.exclusions.extend(excluded)
        for i, ev in enumerate(evals):
            out.rows.append(Row(exp, dom, seed, w, h, Metric.ASTAR_DIFFICULTY.value, "", offset + i, None,
                                ev.difficulty))
            out.rows.append(Row(exp, dom, seed, w, h, Metric.LENIENCY.value, "", offset + i, None, ev.leniency))
            len_all.append(ev.leniency)
            diff_all.append(ev.difficulty)
        out.files.append(_write_levels(cfg, f"seed{seed}_{w}x{h}.txt", levels, [f"seed={seed}"]))
        offset += len(levels)
    _write_common(cfg, out)
    if len(len_all) < MIN_CORRELATION_LEVELS:
        raise InsufficientSolvable(f"need {MIN_CORRELATION_LEVELS} solvable levels, got {len(len_all)}")
    out.report = difficulty_correlation(len_all, diff_all)
    report = cfg.output_dir / "report.txt"
    report.write_text(
        f"test=pearson\nx=Leniency\ny=AStarDifficulty\nn={out.report.n1}\n"
        f"r={out.report.statistic!r}\np={out.report.p_value!r}\n", encoding="utf-8")
    out.files.append(report)
    return out


RECIPES = {
    Experiment.DIVERSITY_DISTRIBUTION: run_diversity_distribution,
    Experiment.SIZE_SWEEP: run_size_sweep,
    Experiment.VISUAL_VARIATION: run_visual_variation,
    Experiment.DIFFICULTY_ORDERING: run_difficulty_ordering,
    Experiment.DIFFICULTY_CORRELATION: run_difficulty_correlation,
}


def run_experiment(cfg: ExperimentConfig) -> Outcome:
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    return RECIPES[cfg.experiment](cfg)


__all__ = [
    "CSV_COLUMNS", "DegenerateInput", "Experiment", "ExperimentConfig", "MazeSource", "OrderingMatrix",
    "Outcome", "Row", "build_config", "collect_solvable", "difficulty_correlation", "load_config",
    "ordering_matrix", "pairwise_rows", "run_difficulty_correlation", "run_difficulty_ordering",
    "run_diversity_distribution", "run_experiment", "run_size_sweep", "run_visual_variation"
]
