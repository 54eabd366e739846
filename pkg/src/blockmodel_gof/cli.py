"""Command-line surface: generate, detect, test, assess, simulate, ingest.

Decisions ride in the output payload, never in the exit code: 0 means the
command ran, 1 means it failed, 2 means the flags were wrong.  All randomness
flows from --seed, so identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from .detect import ClusteringConfig, score, spectral_clustering
from .graphs import (
    EdgeListParseError,
    largest_connected_component,
    load_edge_list,
    load_weighted_edge_list,
    symmetrize_and_threshold,
    write_edge_list,
)
from .gof import test_membership, test_num_communities
from .harness import ExperimentSpec, run_experiment, write_experiment_csv
from .models import (
    block_matrix_from_pattern,
    load_block_matrix,
    load_membership,
    sample_dcsbm,
    sample_degree_params_sim4,
    sample_membership_balanced,
    sample_membership_multinomial,
    sample_sbm,
    save_block_matrix,
    save_degree_params,
    save_membership,
    DegreeParams,
)
from .power import assess_alternative

_PATTERN_RE = re.compile(
    r"^\s*([0-9.eE+-]+)\s*\(\s*1\s*\+\s*([0-9.eE+-]+)\s*\*\s*diag\s*\)\s*$"
)


def parse_block_spec(text: str, k: int):
    """B mini-language: 'a(1+b*diag)' or a CSV path with k rows of k probabilities."""
    match = _PATTERN_RE.match(text)
    if match:
        return block_matrix_from_pattern(float(match.group(1)), float(match.group(2)), k)
    path = Path(text)
    if path.is_file():
        B = load_block_matrix(path)
        if B.k != k:
            raise ValueError(f"block matrix file is {B.k}x{B.k}, expected k={k}")
        return B
    raise ValueError(
        f"bad B spec {text!r}: expected the pattern 'a(1+b*diag)' or a CSV file path"
    )


def _emit_record(record: dict, fmt: str, out_path) -> None:
    if fmt == "json-lines":
        payload = json.dumps(record) + "\n"
    else:
        def cell(value):
            if isinstance(value, bool):
                return "true" if value else "false"
            if isinstance(value, float):
                return repr(value)
            return str(value)
        payload = ",".join(record) + "\n" + ",".join(cell(v) for v in record.values()) + "\n"
    if out_path:
        Path(out_path).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)


def _write_text(payload: str, out_path) -> None:
    if out_path:
        Path(out_path).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)


def cmd_generate(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.pi is not None:
        pi = np.asarray([float(v) for v in args.pi.split(",")], dtype=np.float64)
        if pi.size != args.k:
            raise ValueError(f"--pi needs {args.k} comma-separated entries")
        sigma = sample_membership_multinomial(args.n, pi, rng)
    elif args.membership == "multinomial":
        sigma = sample_membership_multinomial(args.n, np.full(args.k, 1.0 / args.k), rng)
    else:
        sigma = sample_membership_balanced(args.n, args.k, rng)
    B = parse_block_spec(args.B, args.k)

    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if args.model == "dcsbm":
        if args.omega == "sim4-mixture":
            omega = sample_degree_params_sim4(args.n, rng)
        elif args.omega == "unit":
            omega = DegreeParams(np.ones(args.n))
        else:
            values = np.loadtxt(args.omega, dtype=np.float64, ndmin=1)
            omega = DegreeParams(values)
        graph = sample_dcsbm(sigma, B, omega, rng)
        save_degree_params(omega, out / "degree_params.txt")
        written.append(out / "degree_params.txt")
    else:
        graph = sample_sbm(sigma, B, rng)
    write_edge_list(graph, out / "edges.txt")
    save_membership(sigma, out / "membership.txt")
    save_block_matrix(B, out / "block_matrix.csv")
    written = [out / "edges.txt", out / "membership.txt", out / "block_matrix.csv"] + written
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_detect(args) -> int:
    graph = load_edge_list(args.graph, args.n)
    cfg = ClusteringConfig(seed=args.seed)
    method = score if args.method == "score" else spectral_clustering
    sigma = method(graph, args.k, cfg)
    _write_text("".join(f"{int(v)}\n" for v in sigma.labels), args.out)
    return 0


def cmd_test(args) -> int:
    graph = load_edge_list(args.graph, args.n)
    if args.mode == "k":
        cfg = ClusteringConfig(seed=args.seed)
        report = test_num_communities(graph, args.k0, args.alpha, args.model, cfg)
    else:
        sigma0 = load_membership(args.sigma0)
        report = test_membership(graph, sigma0, args.alpha, args.model)
    _emit_record(report.to_record(), args.format, args.out)
    return 0


def cmd_assess(args) -> int:
    sigma = load_membership(args.sigma)
    sigma0 = load_membership(args.sigma0)
    B = load_block_matrix(args.B)
    verdict = assess_alternative(sigma, B, sigma0, args.gamma)
    _emit_record(verdict.to_record(), args.format, args.out)
    return 0


def cmd_simulate(args) -> int:
    overrides = {}
    for item in args.set or []:
        if "=" not in item:
            raise ValueError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            overrides[key] = json.loads(raw)
        except json.JSONDecodeError:
            overrides[key] = raw
    spec = ExperimentSpec(
        id=args.experiment,
        replications=args.replications,
        base_seed=args.seed,
        alpha=args.alpha,
        overrides=overrides,
    )
    result = run_experiment(spec)
    path = write_experiment_csv(result, args.out or ".")
    print(f"wrote {path} ({len(result.rows)} rows, {result.runtime_seconds:.1f}s)")
    return 0


def cmd_ingest(args) -> int:
    if args.weighted:
        weighted = load_weighted_edge_list(args.weighted, args.n)
        graph = symmetrize_and_threshold(weighted, args.percentile)
    else:
        graph = load_edge_list(args.edges, args.n)
    if args.lcc:
        graph, mapping = largest_connected_component(graph)
        if args.map_out:
            lines = "".join(f"{old} {new}\n" for old, new in sorted(mapping.items()))
            Path(args.map_out).write_text(lines, encoding="utf-8")
    if args.out:
        write_edge_list(graph, args.out)
    else:
        write_edge_list(graph, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockmodel-gof",
        description="Goodness-of-fit tests for (degree-corrected) stochastic block models",
    )
    parser.add_argument("--seed", type=int, default=0, help="base seed for all randomness")
    parser.add_argument("--out", default=None, help="output file or directory (command-dependent)")
    parser.add_argument("--format", choices=("csv", "json-lines"), default="csv",
                        help="record output format")
    parser.add_argument("--alpha", type=float, default=0.05, help="test level")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a graph and write its files")
    p.add_argument("--model", choices=("sbm", "dcsbm"), default="sbm")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--B", default="0.1(1+2*diag)",
                   help="block matrix: 'a(1+b*diag)' pattern or CSV path")
    p.add_argument("--membership", choices=("balanced", "multinomial"), default="balanced")
    p.add_argument("--pi", default=None, help="comma-separated multinomial weights")
    p.add_argument("--omega", default="unit",
                   help="dcsbm multipliers: 'unit', 'sim4-mixture', or a file path")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("detect", help="cluster a graph into k communities")
    p.add_argument("--graph", required=True)
    p.add_argument("--n", type=int, default=None, help="node-count hint for the edge list")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=("spectral", "score"), default="spectral")
    p.set_defaults(fn=cmd_detect)

    p = sub.add_parser("test", help="run a goodness-of-fit test")
    p.add_argument("--graph", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--mode", choices=("k", "membership"), default="k")
    p.add_argument("--k0", type=int, default=None)
    p.add_argument("--sigma0", default=None, help="membership file (mode=membership)")
    p.add_argument("--model", choices=("sbm", "dcsbm"), default="sbm")
    p.set_defaults(fn=cmd_test)

    p = sub.add_parser("assess", help="population-level alternative assessment")
    p.add_argument("--sigma", required=True, help="true membership file")
    p.add_argument("--B", required=True, help="true block matrix CSV")
    p.add_argument("--sigma0", required=True, help="hypothesized membership file")
    p.add_argument("--gamma", type=float, required=True)
    p.set_defaults(fn=cmd_assess)

    p = sub.add_parser("simulate", help="run a Monte Carlo experiment")
    p.add_argument("--experiment", required=True)
    p.add_argument("--replications", type=int, default=200)
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="experiment parameter override (JSON values)")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("ingest", help="turn raw data into a canonical edge list")
    p.add_argument("--weighted", default=None, help="directed 'i j weight' file")
    p.add_argument("--percentile", type=float, default=0.5)
    p.add_argument("--edges", default=None, help="plain edge-list file")
    p.add_argument("--lcc", action="store_true", help="keep the largest connected component")
    p.add_argument("--map-out", default=None, help="write the old->new index map here")
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(fn=cmd_ingest)

    return parser


def _validate_flags(parser: argparse.ArgumentParser, args) -> None:
    if args.command == "test":
        if args.mode == "k" and args.k0 is None:
            parser.error("--mode k requires --k0")
        if args.mode == "membership" and args.sigma0 is None:
            parser.error("--mode membership requires --sigma0")
    if args.command == "ingest":
        if (args.weighted is None) == (args.edges is None):
            parser.error("ingest needs exactly one of --weighted or --edges")
        if not 0.0 < args.percentile < 1.0:
            parser.error("--percentile must lie in (0, 1)")
        if args.map_out and not args.lcc:
            parser.error("--map-out requires --lcc")
    if not 0.0 < args.alpha < 1.0:
        parser.error("--alpha must lie in (0, 1)")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate_flags(parser, args)
    try:
        return args.fn(args)
    except (ValueError, OSError, RuntimeError, EdgeListParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
