"""Config-driven Monte Carlo experiments and their CSV emission.

Every experiment is deterministic given its base seed: replication r derives
its generator from (base_seed + r) plus the cell's own parameters, so cells
that share a true model also share graphs (common random numbers), verbatim
reruns are byte-identical, and the work pool cannot change results — workers
are mapped in replication order and reduced in replication order.

Degenerate replications (the clusterer cannot produce k0 usable communities,
which effectively only happens under strong misspecification) count as
rejections in grid experiments; sample experiments record the replication as
a rejection without a statistic.

Set BLOCKMODEL_GOF_THREADS to parallelize replications across processes;
the default of 1 runs everything in-process.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

import numpy as np

from .detect import ClusteringConfig, score, spectral_clustering
from .gof import (
    deviation_field_dcsbm,
    gumbel_cdf,
    gumbel_quantile,
    statistic_L,
    statistic_T,
    test_membership,
    test_num_communities,
)
from .graphs import largest_connected_component, load_edge_list, load_weighted_edge_list, symmetrize_and_threshold
from .models import (
    Membership,
    block_matrix_from_pattern,
    estimate_block_matrix,
    estimate_degree_params,
    load_membership,
    sample_dcsbm,
    sample_degree_params_sim4,
    sample_membership_balanced,
    sample_membership_multinomial,
    sample_sbm,
)

CSV_COLUMNS = (
    "experiment_id", "k", "k0", "n", "r", "z", "variant", "statistic",
    "rejection_rate", "stderr", "ks_stat", "clamp_total", "seed",
)

EXPERIMENT_IDS = (
    "sim1", "sim2-grid", "sim2-r-sweep", "sim3-type1", "sim3-power",
    "sim4", "sim5", "sim6", "supp-er-power", "data-trade", "data-polblogs",
)


@dataclass(frozen=True)
class ExperimentSpec:
    id: str
    replications: int = 200
    base_seed: int = 0
    alpha: float = 0.05
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.id not in _EXPERIMENTS:
            raise ValueError(
                f"unknown experiment id {self.id!r}; valid ids: {', '.join(EXPERIMENT_IDS)}"
            )
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        allowed = _EXPERIMENTS[self.id][1]
        unknown = set(self.overrides) - allowed
        if unknown:
            raise ValueError(
                f"overrides {sorted(unknown)} not valid for {self.id!r}; "
                f"allowed: {sorted(allowed)}"
            )


@dataclass(frozen=True)
class ExperimentResult:
    spec: ExperimentSpec
    rows: list
    runtime_seconds: float


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run one experiment id end to end and return its result rows."""
    started = time.perf_counter()
    rows = _EXPERIMENTS[spec.id][0](spec)
    return ExperimentResult(spec=spec, rows=rows, runtime_seconds=time.perf_counter() - started)


def ks_distance_to_gumbel(sample) -> float:
    """Exact sup-norm distance between the sample's empirical CDF and the
    limiting Gumbel CDF (both one-sided gaps, ties handled by sorting)."""
    values = np.sort(np.asarray(sample, dtype=np.float64))
    n = values.size
    if n < 2:
        raise ValueError("need at least 2 sample points")
    cdf = gumbel_cdf(values)
    upper = np.max(np.arange(1, n + 1) / n - cdf)
    lower = np.max(cdf - np.arange(0, n) / n)
    return float(max(upper, lower))


def corrupt_labels(sigma: Membership, z: float, rng: np.random.Generator) -> Membership:
    """Reassign exactly ceil(z*n) uniformly chosen nodes to uniformly chosen
    *different* communities; redraws the whole choice if a community would
    end up empty, so the result is a valid Membership."""
    if not 0.0 < z < 1.0:
        raise ValueError("z must lie in (0, 1)")
    if sigma.k < 2:
        raise ValueError("corruption needs k >= 2")
    count = math.ceil(z * sigma.n)
    for _ in range(100):
        chosen = rng.choice(sigma.n, size=count, replace=False)
        shift = rng.integers(1, sigma.k, size=count)
        labels = sigma.labels.copy()
        labels[chosen] = (labels[chosen] - 1 + shift) % sigma.k + 1
        if np.unique(labels).size == sigma.k:
            return Membership(labels, sigma.k)
    raise RuntimeError("could not corrupt labels without emptying a community")


def write_experiment_csv(result: ExperimentResult, out_dir) -> Path:
    """One CSV per experiment, fixed header, deterministic formatting."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{result.spec.id}.csv"
    lines = [",".join(CSV_COLUMNS)]
    for row in result.rows:
        lines.append(",".join(_format_cell(column, row.get(column)) for column in CSV_COLUMNS))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


_RATE_COLUMNS = {"rejection_rate", "stderr", "ks_stat"}
_INT_COLUMNS = {"k", "k0", "n", "clamp_total", "seed"}


def _format_cell(column: str, value) -> str:
    if value is None:
        return ""
    if column in _INT_COLUMNS:
        return str(int(value))
    if column in _RATE_COLUMNS:
        return f"{float(value):.4f}"
    if column == "statistic":
        return repr(float(value))
    if column in ("r", "z"):
        return str(int(value)) if float(value) == int(value) else repr(float(value))
    return str(value)


# ---------------------------------------------------------------------------
# shared plumbing


def _worker_count() -> int:
    raw = os.environ.get("BLOCKMODEL_GOF_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError("BLOCKMODEL_GOF_THREADS must be an integer") from None
    return max(1, value)


def _map_replications(fn, count: int) -> list:
    workers = _worker_count()
    if workers <= 1 or count <= 1:
        return [fn(r) for r in range(count)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, count // (workers * 4))
        return list(pool.map(fn, range(count), chunksize=chunk))


def _row(experiment_id: str, **cells) -> dict:
    row = dict.fromkeys(CSV_COLUMNS)
    row["experiment_id"] = experiment_id
    row.update(cells)
    return row


def _rate_cells(flags) -> dict:
    rate = float(np.mean(flags))
    return {
        "rejection_rate": rate,
        "stderr": math.sqrt(rate * (1.0 - rate) / len(flags)),
    }


def _two_sided_reject(statistic: float, alpha: float) -> bool:
    return statistic > gumbel_quantile(1.0 - alpha / 2.0) or statistic < gumbel_quantile(alpha / 2.0)


def _int_list(value, default) -> list:
    if value is None:
        return list(default)
    if isinstance(value, (int, np.integer)):
        return [int(value)]
    return [int(v) for v in value]


def _float_list(value, default) -> list:
    if value is None:
        return list(default)
    if isinstance(value, (int, float, np.floating, np.integer)):
        return [float(value)]
    return [float(v) for v in value]


# ---------------------------------------------------------------------------
# sim1 — null law of the plain-model statistic


def _sim1_replicate(params, r):
    n, k, alpha, base_seed = params
    seed = base_seed + r
    rng = np.random.default_rng(seed)
    sigma = sample_membership_multinomial(n, np.full(k, 1.0 / k), rng)
    graph = sample_sbm(sigma, block_matrix_from_pattern(0.1, 2.0, k), rng)
    report = test_num_communities(graph, k, alpha, "sbm", ClusteringConfig(seed=seed))
    return report.statistic, report.reject, report.clamp_events


def _run_sim1(spec: ExperimentSpec) -> list:
    n = int(spec.overrides.get("n", 500))
    k = int(spec.overrides.get("k", 3))
    outcomes = _map_replications(
        partial(_sim1_replicate, (n, k, spec.alpha, spec.base_seed)), spec.replications
    )
    rows = [
        _row("sim1", k=k, k0=k, n=n, variant="T_n", statistic=stat,
             clamp_total=clamps, seed=spec.base_seed + r)
        for r, (stat, _, clamps) in enumerate(outcomes)
    ]
    statistics = [stat for stat, _, _ in outcomes]
    rows.append(_row(
        "sim1", k=k, k0=k, n=n, variant="T_n",
        ks_stat=ks_distance_to_gumbel(statistics),
        clamp_total=sum(c for _, _, c in outcomes),
        seed=spec.base_seed,
        **_rate_cells([flag for _, flag, _ in outcomes]),
    ))
    return rows


# ---------------------------------------------------------------------------
# sim2 — community-count test grid and sparsity sweep (plain model)


def _sim2_grid_replicate(params, r):
    k_values, k0_values, block, alpha, base_seed = params
    outcomes = []
    for k in k_values:
        rng = np.random.default_rng((base_seed + r, k))
        sigma = sample_membership_balanced(block * k, k, rng)
        graph = sample_sbm(sigma, block_matrix_from_pattern(0.1, 4.0, k), rng)
        cfg = ClusteringConfig(seed=base_seed + r)
        for k0 in k0_values:
            try:
                report = test_num_communities(graph, k0, alpha, "sbm", cfg)
                outcomes.append((report.reject, report.clamp_events))
            except (ValueError, RuntimeError):
                outcomes.append((True, 0))  # degenerate clustering => reject
    return outcomes


def _run_sim2_grid(spec: ExperimentSpec) -> list:
    k_values = _int_list(spec.overrides.get("k_values"), (2, 4, 6, 8, 10, 20, 30, 40))
    k0_values = _int_list(spec.overrides.get("k0_values"), (2, 4, 6, 8, 10, 20, 30, 40))
    block = int(spec.overrides.get("block_size", 200))
    outcomes = _map_replications(
        partial(_sim2_grid_replicate, (k_values, k0_values, block, spec.alpha, spec.base_seed)),
        spec.replications,
    )
    rows = []
    for index, (k, k0) in enumerate((k, k0) for k in k_values for k0 in k0_values):
        cell = [rep[index] for rep in outcomes]
        rows.append(_row(
            "sim2-grid", k=k, k0=k0, n=block * k, variant="T_n",
            clamp_total=sum(c for _, c in cell), seed=spec.base_seed,
            **_rate_cells([flag for flag, _ in cell]),
        ))
    return rows


def _sim2_sweep_replicate(params, r):
    r_values, k, block, alpha, base_seed = params
    outcomes = []
    for rate in r_values:
        rng = np.random.default_rng((base_seed + r, round(rate * 10_000)))
        sigma = sample_membership_balanced(block * k, k, rng)
        graph = sample_sbm(sigma, block_matrix_from_pattern(rate, 2.0, k), rng)
        report = test_num_communities(graph, k, alpha, "sbm", ClusteringConfig(seed=base_seed + r))
        outcomes.append((report.reject, report.clamp_events))
    return outcomes


def _run_sim2_r_sweep(spec: ExperimentSpec) -> list:
    r_values = _float_list(
        spec.overrides.get("r_values"), (0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10)
    )
    k = int(spec.overrides.get("k", 3))
    block = int(spec.overrides.get("block_size", 200))
    outcomes = _map_replications(
        partial(_sim2_sweep_replicate, (r_values, k, block, spec.alpha, spec.base_seed)),
        spec.replications,
    )
    rows = []
    for index, rate in enumerate(r_values):
        cell = [rep[index] for rep in outcomes]
        rows.append(_row(
            "sim2-r-sweep", k=k, k0=k, n=block * k, r=rate, variant="T_n",
            clamp_total=sum(c for _, c in cell), seed=spec.base_seed,
            **_rate_cells([flag for flag, _ in cell]),
        ))
    return rows


# ---------------------------------------------------------------------------
# sim3 — membership test under the plain model: size, then power


def _sim3_type1_replicate(params, r):
    k_values, block, alpha, base_seed = params
    outcomes = []
    for k in k_values:
        rng = np.random.default_rng((base_seed + r, k))
        sigma = sample_membership_balanced(block * k, k, rng)
        graph = sample_sbm(sigma, block_matrix_from_pattern(0.1, 2.0, k), rng)
        try:
            sigma0 = spectral_clustering(graph, k, ClusteringConfig(seed=base_seed + r))
            report = test_membership(graph, sigma0, alpha, "sbm")
            outcomes.append((report.reject, report.clamp_events))
        except (ValueError, RuntimeError):
            outcomes.append((True, 0))
    return outcomes


def _run_sim3_type1(spec: ExperimentSpec) -> list:
    k_values = _int_list(spec.overrides.get("k_values"), (2, 3, 4, 5, 6, 7, 8))
    block = int(spec.overrides.get("block_size", 200))
    outcomes = _map_replications(
        partial(_sim3_type1_replicate, (k_values, block, spec.alpha, spec.base_seed)),
        spec.replications,
    )
    rows = []
    for index, k in enumerate(k_values):
        cell = [rep[index] for rep in outcomes]
        rows.append(_row(
            "sim3-type1", k=k, k0=k, n=block * k, variant="T_n",
            clamp_total=sum(c for _, c in cell), seed=spec.base_seed,
            **_rate_cells([flag for flag, _ in cell]),
        ))
    return rows


def _sim3_power_replicate(params, r):
    block_sizes, r_values, z_values, alpha, base_seed = params
    outcomes = []
    for block in block_sizes:
        for rate in r_values:
            rng = np.random.default_rng((base_seed + r, block, round(rate * 10_000)))
            sigma = sample_membership_balanced(2 * block, 2, rng)
            graph = sample_sbm(sigma, block_matrix_from_pattern(rate, 2.0, 2), rng)
            for z in z_values:
                corrupted = corrupt_labels(sigma, z, rng)
                report = test_membership(graph, corrupted, alpha, "sbm")
                outcomes.append((report.reject, report.clamp_events))
    return outcomes


def _run_sim3_power(spec: ExperimentSpec) -> list:
    block_sizes = _int_list(spec.overrides.get("block_sizes"), (100, 200))
    r_values = _float_list(spec.overrides.get("r_values"), (0.05, 0.10))
    z_values = _float_list(spec.overrides.get("z_values"), (0.01, 0.05, 0.10))
    outcomes = _map_replications(
        partial(_sim3_power_replicate,
                (block_sizes, r_values, z_values, spec.alpha, spec.base_seed)),
        spec.replications,
    )
    rows = []
    cells = [(b, rate, z) for b in block_sizes for rate in r_values for z in z_values]
    for index, (block, rate, z) in enumerate(cells):
        cell = [rep[index] for rep in outcomes]
        rows.append(_row(
            "sim3-power", k=2, k0=2, n=2 * block, r=rate, z=z, variant="T_n",
            clamp_total=sum(c for _, c in cell), seed=spec.base_seed,
            **_rate_cells([flag for flag, _ in cell]),
        ))
    return rows


# ---------------------------------------------------------------------------
# sim4/sim5/sim6 — degree-corrected experiments


def _sim4_replicate(params, r):
    n, k, alpha, base_seed = params
    seed = base_seed + r
    rng = np.random.default_rng(seed)
    sigma = sample_membership_multinomial(n, np.full(k, 1.0 / k), rng)
    omega_true = sample_degree_params_sim4(n, rng)
    block = block_matrix_from_pattern(0.1, 2.0, k)
    graph = sample_dcsbm(sigma, block, omega_true, rng)
    try:
        sigma_hat = score(graph, k, ClusteringConfig(seed=seed))
        if sigma_hat.sizes().min() < 2:
            raise ValueError("singleton community")
        block_hat = estimate_block_matrix(graph, sigma_hat)
        known = deviation_field_dcsbm(graph, sigma_hat, block_hat, omega_true,
                                      omega_is_estimated=False)
        omega_hat = estimate_degree_params(graph, sigma_hat)
        estimated = deviation_field_dcsbm(graph, sigma_hat, block_hat, omega_hat,
                                          omega_is_estimated=True)
    except (ValueError, RuntimeError):
        return None
    t1 = statistic_T(statistic_L(known), k, n, "T_n1")
    t2 = statistic_T(statistic_L(estimated), k, n, "T_n2")
    t3 = statistic_T(statistic_L(estimated), k, n, "T_n3")
    return (t1, t2, t3, known.clamp_events, estimated.clamp_events)


def _run_sim4(spec: ExperimentSpec) -> list:
    n = int(spec.overrides.get("n", 500))
    k = int(spec.overrides.get("k", 3))
    outcomes = _map_replications(
        partial(_sim4_replicate, (n, k, spec.alpha, spec.base_seed)), spec.replications
    )
    rows = []
    samples = {"T_n1": [], "T_n2": [], "T_n3": []}
    rejects = {"T_n1": [], "T_n2": [], "T_n3": []}
    clamp_totals = {"T_n1": 0, "T_n2": 0, "T_n3": 0}
    for r, outcome in enumerate(outcomes):
        if outcome is None:  # degenerate clustering: reject, no statistic
            for variant in samples:
                rejects[variant].append(True)
            continue
        t1, t2, t3, clamps_known, clamps_estimated = outcome
        per_variant = (("T_n1", t1, clamps_known), ("T_n2", t2, clamps_estimated),
                       ("T_n3", t3, clamps_estimated))
        for variant, statistic, clamps in per_variant:
            samples[variant].append(statistic)
            rejects[variant].append(_two_sided_reject(statistic, spec.alpha))
            clamp_totals[variant] += clamps
            rows.append(_row(
                "sim4", k=k, k0=k, n=n, variant=variant, statistic=statistic,
                clamp_total=clamps, seed=spec.base_seed + r,
            ))
    for variant in ("T_n1", "T_n2", "T_n3"):
        rows.append(_row(
            "sim4", k=k, k0=k, n=n, variant=variant,
            ks_stat=ks_distance_to_gumbel(samples[variant]),
            clamp_total=clamp_totals[variant], seed=spec.base_seed,
            **_rate_cells(rejects[variant]),
        ))
    return rows


def _dcsbm_grid_statistics(graph, k0, alpha, cfg):
    """SCORE at k0, fit, and return (reject2, reject3, clamps); degenerate
    clustering counts as rejection for both variants."""
    try:
        sigma_hat = score(graph, k0, cfg)
        if sigma_hat.sizes().min() < 2:
            raise ValueError("singleton community")
        block_hat = estimate_block_matrix(graph, sigma_hat)
        omega_hat = estimate_degree_params(graph, sigma_hat)
        dev = deviation_field_dcsbm(graph, sigma_hat, block_hat, omega_hat,
                                    omega_is_estimated=True)
    except (ValueError, RuntimeError):
        return True, True, 0
    L = statistic_L(dev)
    t2 = statistic_T(L, k0, graph.n, "T_n2")
    t3 = statistic_T(L, k0, graph.n, "T_n3")
    return _two_sided_reject(t2, alpha), _two_sided_reject(t3, alpha), dev.clamp_events


def _sim5_replicate(params, r):
    k_values, k0_values, block, alpha, base_seed = params
    outcomes = []
    for k in k_values:
        n = block * k
        rng = np.random.default_rng((base_seed + r, k))
        sigma = sample_membership_balanced(n, k, rng)
        omega = sample_degree_params_sim4(n, rng)
        graph = sample_dcsbm(sigma, block_matrix_from_pattern(0.1, 2.0, k), omega, rng)
        cfg = ClusteringConfig(seed=base_seed + r)
        for k0 in k0_values:
            outcomes.append(_dcsbm_grid_statistics(graph, k0, alpha, cfg))
    return outcomes


def _run_sim5(spec: ExperimentSpec) -> list:
    k_values = _int_list(spec.overrides.get("k_values"), (2, 3, 4, 5, 6, 7, 8))
    k0_values = _int_list(spec.overrides.get("k0_values"), (2, 3, 4, 5, 6, 7, 8))
    block = int(spec.overrides.get("block_size", 200))
    outcomes = _map_replications(
        partial(_sim5_replicate, (k_values, k0_values, block, spec.alpha, spec.base_seed)),
        spec.replications,
    )
    rows = []
    for index, (k, k0) in enumerate((k, k0) for k in k_values for k0 in k0_values):
        cell = [rep[index] for rep in outcomes]
        for variant, position in (("T_n2", 0), ("T_n3", 1)):
            rows.append(_row(
                "sim5", k=k, k0=k0, n=block * k, variant=variant,
                clamp_total=sum(c for _, _, c in cell), seed=spec.base_seed,
                **_rate_cells([flags[position] for flags in cell]),
            ))
    return rows


def _sim6_replicate(params, r):
    k_values, block, alpha, base_seed = params
    outcomes = []
    for k in k_values:
        n = block * k
        rng = np.random.default_rng((base_seed + r, k))
        sigma = sample_membership_balanced(n, k, rng)
        omega = sample_degree_params_sim4(n, rng)
        graph = sample_dcsbm(sigma, block_matrix_from_pattern(0.1, 2.0, k), omega, rng)
        try:
            sigma0 = score(graph, k, ClusteringConfig(seed=base_seed + r))
            report = test_membership(graph, sigma0, alpha, "dcsbm")
            reject3 = report.reject
            reject2 = _two_sided_reject(report.diagnostics["T_n2"], alpha)
            outcomes.append((reject2, reject3, report.clamp_events))
        except (ValueError, RuntimeError):
            outcomes.append((True, True, 0))
    return outcomes


def _run_sim6(spec: ExperimentSpec) -> list:
    k_values = _int_list(spec.overrides.get("k_values"), (2, 3, 4, 5, 6, 7, 8))
    block = int(spec.overrides.get("block_size", 200))
    outcomes = _map_replications(
        partial(_sim6_replicate, (k_values, block, spec.alpha, spec.base_seed)),
        spec.replications,
    )
    rows = []
    for index, k in enumerate(k_values):
        cell = [rep[index] for rep in outcomes]
        for variant, position in (("T_n2", 0), ("T_n3", 1)):
            rows.append(_row(
                "sim6", k=k, k0=k, n=block * k, variant=variant,
                clamp_total=sum(c for _, _, c in cell), seed=spec.base_seed,
                **_rate_cells([flags[position] for flags in cell]),
            ))
    return rows


# ---------------------------------------------------------------------------
# supp-er-power — testing a single merged community against 2-block truths


def _supp_er_replicate(params, r):
    block_sizes, r_values, alpha, base_seed = params
    outcomes = []
    for block in block_sizes:
        for boost in r_values:
            rng = np.random.default_rng((base_seed + r, block, round(boost * 10_000)))
            sigma = sample_membership_balanced(2 * block, 2, rng)
            graph = sample_sbm(sigma, block_matrix_from_pattern(0.1, boost, 2), rng)
            report = test_num_communities(graph, 1, alpha, "sbm")
            outcomes.append((report.reject, report.clamp_events))
    return outcomes


def _run_supp_er_power(spec: ExperimentSpec) -> list:
    block_sizes = _int_list(spec.overrides.get("block_sizes"), (200, 400, 800, 1600, 3200, 6400))
    r_values = _float_list(spec.overrides.get("r_values"), (3, 4, 5, 6, 7))
    outcomes = _map_replications(
        partial(_supp_er_replicate, (block_sizes, r_values, spec.alpha, spec.base_seed)),
        spec.replications,
    )
    rows = []
    cells = [(b, boost) for b in block_sizes for boost in r_values]
    for index, (block, boost) in enumerate(cells):
        cell = [rep[index] for rep in outcomes]
        rows.append(_row(
            "supp-er-power", k=2, k0=1, n=2 * block, r=boost, variant="T_n",
            clamp_total=sum(c for _, c in cell), seed=spec.base_seed,
            **_rate_cells([flag for flag, _ in cell]),
        ))
    return rows


# ---------------------------------------------------------------------------
# real-data pipelines


def _require_file(path, what: str) -> Path:
    resolved = Path(path)
    if not resolved.is_file():
        raise FileNotFoundError(
            f"{what} not found at {resolved}; see the README section "
            "'Real data' for the expected format and how to supply it"
        )
    return resolved


def _run_data_trade(spec: ExperimentSpec) -> list:
    weights_path = _require_file(
        spec.overrides.get("weights_path", "data/trade_1995.txt"), "trade weights file"
    )
    percentile = float(spec.overrides.get("percentile", 0.5))
    k0_values = _int_list(spec.overrides.get("k0_values"), (3, 7, 10))
    weighted = load_weighted_edge_list(weights_path)
    graph = symmetrize_and_threshold(weighted, percentile)
    rows = []
    for k0 in k0_values:
        report = test_num_communities(
            graph, k0, spec.alpha, "sbm", ClusteringConfig(seed=spec.base_seed)
        )
        rows.append(_row(
            "data-trade", k0=k0, n=graph.n, variant=report.variant,
            statistic=report.statistic, clamp_total=report.clamp_events,
            seed=spec.base_seed,
        ))
    return rows


def _run_data_polblogs(spec: ExperimentSpec) -> list:
    edges_path = _require_file(
        spec.overrides.get("edges_path", "data/polblogs_edges.txt"), "blog edge list"
    )
    stances_path = _require_file(
        spec.overrides.get("stances_path", "data/polblogs_stances.txt"), "blog stance labels"
    )
    k0_sbm = int(spec.overrides.get("k0_sbm", 10))
    k0_dcsbm = int(spec.overrides.get("k0_dcsbm", 2))
    raw = load_edge_list(edges_path)
    graph, index_map = largest_connected_component(raw)
    cfg = ClusteringConfig(seed=spec.base_seed)
    rows = []
    for model, k0 in (("sbm", k0_sbm), ("dcsbm", k0_dcsbm)):
        report = test_num_communities(graph, k0, spec.alpha, model, cfg)
        rows.append(_row(
            "data-polblogs", k0=k0, n=graph.n, variant=report.variant,
            statistic=report.statistic, clamp_total=report.clamp_events,
            seed=spec.base_seed,
        ))
    stances = load_membership(stances_path)
    if stances.n < raw.n:
        raise ValueError(
            f"stance file covers {stances.n} nodes but the edge list has {raw.n}"
        )
    kept = sorted(index_map, key=index_map.get)
    sigma0 = Membership(stances.labels[kept], stances.k)
    report = test_membership(graph, sigma0, spec.alpha, "dcsbm")
    rows.append(_row(
        "data-polblogs", k0=sigma0.k, n=graph.n, variant=report.variant,
        statistic=report.statistic, clamp_total=report.clamp_events,
        seed=spec.base_seed,
    ))
    return rows


_EXPERIMENTS = {
    "sim1": (_run_sim1, {"n", "k"}),
    "sim2-grid": (_run_sim2_grid, {"k_values", "k0_values", "block_size"}),
    "sim2-r-sweep": (_run_sim2_r_sweep, {"r_values", "k", "block_size"}),
    "sim3-type1": (_run_sim3_type1, {"k_values", "block_size"}),
    "sim3-power": (_run_sim3_power, {"block_sizes", "r_values", "z_values"}),
    "sim4": (_run_sim4, {"n", "k"}),
    "sim5": (_run_sim5, {"k_values", "k0_values", "block_size"}),
    "sim6": (_run_sim6, {"k_values", "block_size"}),
    "supp-er-power": (_run_supp_er_power, {"block_sizes", "r_values"}),
    "data-trade": (_run_data_trade, {"weights_path", "percentile", "k0_values"}),
    "data-polblogs": (_run_data_polblogs, {"edges_path", "stances_path", "k0_sbm", "k0_dcsbm"}),
}
