"""Command line entry point: ``momax gen|run|ablate|summarize``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import (
    ABLATION_DEFAULTS,
    ConfigError,
    ExperimentConfig,
    InstanceLoadError,
    ablation,
    ablation_config,
    format_summary,
    read_csv,
    run_experiment,
    summarize,
)
from .core import InputError
from .generators import GeneratorSpec, generate_graphs
from .objectives import write_edge_list

EXIT_OK, EXIT_CONFIG, EXIT_INSTANCE, EXIT_TIMEOUT = 0, 2, 3, 4


def _overrides(args) -> dict:
    return {
        "seeds": args.seed,
        "budgets": args.budget_list,
        "algorithms": args.algorithms,
        "time_limit_s": args.time_limit_s,
        "out": args.out,
    }


def _add_overrides(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", help="seed or comma-separated seeds")
    p.add_argument("--budget-list", help="comma-separated budgets, e.g. 5,10,20")
    p.add_argument("--algorithms", help="comma-separated algorithm names")
    p.add_argument("--time-limit-s", type=float)
    p.add_argument("--out", help="output CSV path")


def _log(row) -> None:
    print(f"{row.instance} {row.algorithm} B={row.B} seed={row.seed} "
          f"objective={row.objective:.6g} calls={row.oracle_calls} "
          f"time={row.wall_time_s:.3f}s", file=sys.stderr)


def cmd_gen(args) -> int:
    spec = GeneratorSpec(args.family, n=args.n, k=args.k, seed=args.seed, p=args.p, d=args.d,
                         power=args.power, hard=args.hard)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for c, g in enumerate(generate_graphs(spec)):
        path = out / f"{spec.family}-n{spec.n}-s{spec.seed}-c{c}.txt"
        write_edge_list(g, path)
        print(path)
    return EXIT_OK


def _finish(rows) -> int:
    return EXIT_TIMEOUT if any(r.timed_out for r in rows) else EXIT_OK


def cmd_run(args) -> int:
    cfg = ExperimentConfig.load(args.config).replace(**_overrides(args))
    return _finish(run_experiment(cfg, None if args.quiet else _log))


def cmd_ablate(args) -> int:
    base = ExperimentConfig.load(args.config) if args.config else ablation_config()
    cfg = base.replace(**_overrides(args))
    if args.values:
        values = [float(v) if args.axis == "phi" else int(v) for v in args.values.split(",")]
    else:
        values = ABLATION_DEFAULTS[args.axis]
    return _finish(ablation(cfg, args.axis, values, None if args.quiet else _log))


def cmd_summarize(args) -> int:
    rows = read_csv(args.csv)
    print(format_summary(summarize(rows, args.by)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="momax", description="Multiobjective submodular maximization")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write generated per-color edge lists")
    g.add_argument("--family", choices=["er", "ba", "kronecker"], default="er")
    g.add_argument("--n", type=int, default=64)
    g.add_argument("--k", type=int, default=20)
    g.add_argument("--p", type=float, default=0.1)
    g.add_argument("--d", type=int, default=5)
    g.add_argument("--power", type=int, default=6)
    g.add_argument("--hard", action="store_true", help="per-color parameter schedule")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="graphs")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run a budget sweep from a config file")
    r.add_argument("--config", required=True)
    _add_overrides(r)
    r.add_argument("--quiet", action="store_true")
    r.set_defaults(func=cmd_run)

    a = sub.add_parser("ablate", help="sweep repetitions or phi for LP Greedy")
    a.add_argument("--axis", choices=["reps", "phi"], required=True)
    a.add_argument("--values", help="comma-separated axis values")
    a.add_argument("--config", help="defaults to ER(64, 0.1), k=20, B=20, five seeds")
    _add_overrides(a)
    a.add_argument("--quiet", action="store_true")
    a.set_defaults(func=cmd_ablate)

    s = sub.add_parser("summarize", help="mean and std per algorithm and budget")
    s.add_argument("csv")
    s.add_argument("--by", help="extra column to split groups by, e.g. phi")
    s.set_defaults(func=cmd_summarize)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InputError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InstanceLoadError as exc:
        print(f"instance error: {exc}", file=sys.stderr)
        return EXIT_INSTANCE


if __name__ == "__main__":
    sys.exit(main())
