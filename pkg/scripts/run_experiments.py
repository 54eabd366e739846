#!/usr/bin/env python3
"""Run simulation experiments and write one CSV per experiment id.

Examples:
    python scripts/run_experiments.py sim1 sim3-type1
    python scripts/run_experiments.py sim1 --override n=200 --override k=2
    python scripts/run_experiments.py --all --replications 50 --out results/quick

Data-backed experiments (data-trade, data-polblogs) need their input files
passed as overrides, e.g.
    python scripts/run_experiments.py data-trade --override weights_path=data/trade_1995.txt
"""

import argparse
import ast
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from blockmodel_gof.harness import (
    EXPERIMENT_IDS,
    ExperimentSpec,
    run_experiment,
    write_experiment_csv,
)

# data-* need external files, so --all means "all simulations"
SIMULATION_IDS = tuple(i for i in EXPERIMENT_IDS if not i.startswith("data-"))


def parse_override(text: str):
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        value = ast.literal_eval(raw)
    except (ValueError, SyntaxError):
        value = raw  # e.g. file paths stay strings
    return key, value


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("ids", nargs="*", metavar="ID",
                        help=f"experiment ids to run (choose from: {', '.join(EXPERIMENT_IDS)})")
    parser.add_argument("--all", action="store_true",
                        help="run every simulation experiment (excludes data-*)")
    parser.add_argument("--replications", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--alpha", type=float, default=0.05)
    parser.add_argument("--out", type=Path, default=Path("results"))
    parser.add_argument("--override", action="append", type=parse_override,
                        default=[], metavar="KEY=VALUE",
                        help="experiment-specific override; repeatable, "
                             "only allowed when a single id is given")
    args = parser.parse_args(argv)

    ids = list(args.ids) + (list(SIMULATION_IDS) if args.all else [])
    if not ids:
        parser.error("no experiment ids given (pass ids or --all)")
    if args.override and len(ids) != 1:
        parser.error("--override requires exactly one experiment id")
    overrides = dict(args.override)

    args.out.mkdir(parents=True, exist_ok=True)
    for experiment_id in ids:
        try:
            spec = ExperimentSpec(
                id=experiment_id,
                replications=args.replications,
                base_seed=args.seed,
                alpha=args.alpha,
                overrides=overrides,
            )
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        result = run_experiment(spec)
        path = write_experiment_csv(result, args.out)
        print(f"{experiment_id}: {len(result.rows)} rows -> {path} "
              f"({result.runtime_seconds:.1f}s)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
