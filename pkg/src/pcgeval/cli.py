"""Command-line entry point.

Relative paths, both inputs and outputs, are resolved against ``--output-dir``.
Exit codes: 0 success, 2 config or input error, 3 not enough solvable or
usable data, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .errors import (ConfigError, DegenerateInput, InsufficientSolvable, PCGEvalError, UnsolvableBase)
from .evaluate import evaluate_level
from .experiments import Experiment, MazeSource, build_config, parse_config_text, run_experiment
from .generators import (DEFAULT_PLATFORMER_PARAMS, derive_seed, gen_fixed_path_base,
                         gen_maze_with_difficulty, gen_platformer, gen_random_maze, gen_visual_variants)
from .level import Domain, read_level_set, serialize_level_set
from .metrics import (Metric, astar_diversity, compression_distance, leniency_maze, leniency_platformer,
                      manhattan_diversity)
from .representations import Repr, represent
from .stats import Alternative, mann_whitney_u, pearson

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INSUFFICIENT = 3
EXIT_IO = 4

PAIR_METRICS = {Metric.CD, Metric.ASTAR_DIVERSITY, Metric.MANHATTAN_DIVERSITY}
GENERATORS = ("random", "difficulty", "platformer", "fixed-path", "variants")

# experiment flags that override the config-file key of the same name
OVERRIDES = ("experiment", "domain", "sizes", "n_levels", "seeds", "reprs", "budget", "maze_source",
             "wall_prob", "difficulty", "threads")


def _resolve(base: Path, p: str | Path) -> Path:
    p = Path(p)
    return p if p.is_absolute() else base / p


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def cmd_generate(args) -> int:
    base = args.output_dir
    if args.generator == "random":
        levels = [gen_random_maze(args.width, args.height, args.wall_prob, derive_seed(args.seed, i))
                  for i in range(args.count)]
    elif args.generator == "difficulty":
        levels = [gen_maze_with_difficulty(args.width, args.height, args.difficulty, derive_seed(args.seed, i))
                  for i in range(args.count)]
    elif args.generator == "platformer":
        levels = [gen_platformer(args.width, args.height, seed=derive_seed(args.seed, i), **DEFAULT_PLATFORMER_PARAMS)
                  for i in range(args.count)]
    elif args.generator == "fixed-path":
        levels = [gen_fixed_path_base(args.width, args.height, args.seed)]
    else:
        levels = list(gen_visual_variants(gen_fixed_path_base(args.width, args.height, args.seed),
                                          args.count, args.seed))
    header = [f"generator={args.generator}", f"seed={args.seed}", f"size={args.width}x{args.height}"]
    text = serialize_level_set(levels, header)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        path = _resolve(base, args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        print(path)
    return EXIT_OK


def _load(args, path):
    return read_level_set(_resolve(args.output_dir, path), Domain(args.domain))


def cmd_solve(args) -> int:
    levels = _load(args, args.level_file)
    indices = [args.index] if args.index is not None else range(len(levels))
    for i in indices:
        ev = evaluate_level(levels[i], args.budget, with_leniency=args.leniency)
        _emit({
            "index": i,
            "solved": ev.solved,
            "reason": ev.reason,
            "length": len(ev.result.actions),
            "actions": [int(a) for a in ev.result.actions],
            "expanded": len(ev.result.expanded),
            "reachable": ev.reachable_count,
            "difficulty": ev.difficulty,
            "leniency": ev.leniency,
        })
    return EXIT_OK


def cmd_metric(args) -> int:
    metric = Metric(args.metric)
    first = _load(args, args.level_file)
    repr_ = Repr(args.repr)
    if metric in PAIR_METRICS:
        if args.other_file:
            a, b = first[args.ids[0]], _load(args, args.other_file)[args.ids[1]]
        else:
            a, b = first[args.ids[0]], first[args.ids[1]]
        if metric is Metric.CD:
            value = compression_distance(a, b, repr_).value
        else:
            ea, eb = evaluate_level(a, args.budget), evaluate_level(b, args.budget)
            fn = astar_diversity if metric is Metric.ASTAR_DIVERSITY else manhattan_diversity
            value = fn(ea.result, eb.result)
        _emit({"metric": metric.value, "repr": repr_.value if metric is Metric.CD else "",
               "id_a": args.ids[0], "id_b": args.ids[1], "value": value})
        return EXIT_OK
    grid = first[args.ids[0]]
    if metric is Metric.LENIENCY:
        value = leniency_maze(grid) if grid.domain is Domain.MAZE else leniency_platformer(grid)
    else:
        ev = evaluate_level(grid, args.budget)
        if not ev.solved:
            raise InsufficientSolvable(f"level {args.ids[0]} is not solvable ({ev.reason})")
        value = ev.difficulty
    _emit({"metric": metric.value, "id_a": args.ids[0], "value": value})
    return EXIT_OK


def cmd_repr(args) -> int:
    for grid in _load(args, args.level_file):
        print(represent(grid, Repr(args.repr)))
    return EXIT_OK


def cmd_experiment(args) -> int:
    overrides = {k: str(getattr(args, k)) for k in OVERRIDES if getattr(args, k) is not None}
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        overrides[key.strip().replace("-", "_")] = value.strip()
    raw = {}
    if args.config:
        raw = parse_config_text(_resolve(args.output_dir, args.config).read_text(encoding="utf-8"))
    raw.update(overrides)
    raw["output_dir"] = str(_resolve(args.output_dir, raw.get("output_dir", ".")))
    cfg = build_config(raw)
    out = run_experiment(cfg)
    for path in out.files:
        print(path)
    if out.report is not None:
        _emit({"r": out.report.statistic, "p": out.report.p_value, "n": out.report.n1})
    return EXIT_OK


def _column(rows: list[dict], name: str, where: list[str] | None = None) -> list[float]:
    if rows and name not in rows[0]:
        raise ConfigError(f"no column {name!r}")
    conds = []
    for item in where or []:
        key, sep, value = item.partition("=")
        if not sep or (rows and key not in rows[0]):
            raise ConfigError(f"bad filter {item!r}")
        conds.append((key, value))
    vals = []
    for row in rows:
        if any(row[k] != v for k, v in conds):
            continue
        cell = (row.get(name) or "").strip()
        if cell:
            try:
                vals.append(float(cell))
            except ValueError:
                raise ConfigError(f"column {name!r} holds non-numeric value {cell!r}") from None
    return vals


def cmd_stats(args) -> int:
    with open(_resolve(args.output_dir, args.csv_file), newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    x, y = _column(rows, args.x, args.x_where), _column(rows, args.y, args.y_where)
    if args.test == "pearson":
        rep = pearson(x, y)
    else:
        rep = mann_whitney_u(x, y, Alternative(args.alternative))
    _emit({"test": args.test, "statistic": rep.statistic, "p": rep.p_value, "n1": rep.n1, "n2": rep.n2,
           "alternative": rep.alternative.value})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcgeval", description="Tile-level generation and evaluation.")
    parser.add_argument("--output-dir", type=Path, default=Path("."),
                        help="base directory for every relative path (default: cwd)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a generated level set")
    g.add_argument("--generator", choices=GENERATORS, default="random")
    g.add_argument("--width", type=int, default=20)
    g.add_argument("--height", type=int, default=20)
    g.add_argument("-n", "--count", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--wall-prob", type=float, default=0.3)
    g.add_argument("--difficulty", type=int, default=3, choices=range(1, 6))
    g.add_argument("--out", default="levels.txt", help="output file, or '-' for stdout")
    g.set_defaults(func=cmd_generate)

    def add_level_args(p):
        p.add_argument("level_file")
        p.add_argument("--domain", choices=[d.value for d in Domain], default="maze")
        p.add_argument("--budget", type=int, default=1_000_000)

    s = sub.add_parser("solve", help="run A* on levels and print one JSON line each")
    add_level_args(s)
    s.add_argument("--index", type=int)
    s.add_argument("--leniency", action="store_true")
    s.set_defaults(func=cmd_solve)

    m = sub.add_parser("metric", help="one metric on one level or one pair")
    m.add_argument("metric", choices=[x.value for x in Metric])
    add_level_args(m)
    m.add_argument("other_file", nargs="?", help="second level set; id_b indexes into it")
    m.add_argument("--ids", type=int, nargs="+", default=[0, 1], metavar="ID")
    m.add_argument("--repr", choices=[r.value for r in Repr], default="flat")
    m.set_defaults(func=cmd_metric)

    r = sub.add_parser("repr", help="print the string representation of each level")
    add_level_args(r)
    r.add_argument("--repr", choices=[x.value for x in Repr], default="flat")
    r.set_defaults(func=cmd_repr)

    e = sub.add_parser("experiment", help="run a config-driven experiment")
    e.add_argument("--config")
    e.add_argument("--experiment", choices=[x.value for x in Experiment])
    e.add_argument("--domain", choices=[d.value for d in Domain])
    e.add_argument("--sizes", help="e.g. 10x10,20x20")
    e.add_argument("--n-levels", dest="n_levels", type=int)
    e.add_argument("--seeds", help="comma-separated")
    e.add_argument("--reprs", help="comma-separated")
    e.add_argument("--budget", type=int)
    e.add_argument("--maze-source", dest="maze_source", choices=[x.value for x in MazeSource])
    e.add_argument("--wall-prob", dest="wall_prob", type=float)
    e.add_argument("--difficulty")
    e.add_argument("--threads", type=int)
    e.add_argument("--set", action="append", metavar="KEY=VALUE", help="override any config key")
    e.set_defaults(func=cmd_experiment)

    t = sub.add_parser("stats", help="run a test on two CSV columns")
    t.add_argument("csv_file")
    t.add_argument("x")
    t.add_argument("y")
    t.add_argument("--x-where", action="append", metavar="COL=VALUE", help="row filter for the x column")
    t.add_argument("--y-where", action="append", metavar="COL=VALUE", help="row filter for the y column")
    t.add_argument("--test", choices=("pearson", "mann-whitney"), default="pearson")
    t.add_argument("--alternative", choices=[a.value for a in Alternative], default="two-sided")
    t.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "metric" and Metric(args.metric) in PAIR_METRICS and len(args.ids) != 2:
            raise ConfigError("pair metrics need --ids A B")
        return args.func(args)
    except (InsufficientSolvable, UnsolvableBase, DegenerateInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PCGEvalError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
