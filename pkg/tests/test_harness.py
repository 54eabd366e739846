"""Replication harness: specs, label corruption, KS summaries, CSV output."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from blockmodel_gof import (
    CSV_COLUMNS,
    EXPERIMENT_IDS,
    ExperimentSpec,
    Membership,
    corrupt_labels,
    gumbel_cdf,
    gumbel_quantile,
    ks_distance_to_gumbel,
    run_experiment,
    write_experiment_csv,
)


def _small_sim1(base_seed=11, replications=6):
    return ExperimentSpec(
        id="sim1",
        replications=replications,
        base_seed=base_seed,
        overrides={"n": 90, "k": 2},
    )


# ---------------------------------------------------------------------------
# ExperimentSpec validation


def test_unknown_experiment_id_lists_valid_ids():
    with pytest.raises(ValueError, match="sim2-grid"):
        ExperimentSpec(id="sim99", overrides={})


def test_spec_field_validation():
    with pytest.raises(ValueError, match="replications"):
        ExperimentSpec(id="sim1", replications=0, overrides={})
    with pytest.raises(ValueError, match="alpha"):
        ExperimentSpec(id="sim1", alpha=1.0, overrides={})
    with pytest.raises(ValueError, match="allowed"):
        ExperimentSpec(id="sim1", overrides={"block_size": 10})


def test_every_listed_experiment_accepts_a_spec():
    for experiment_id in EXPERIMENT_IDS:
        spec = ExperimentSpec(id=experiment_id, overrides={})
        assert spec.id == experiment_id


# ---------------------------------------------------------------------------
# label corruption


@given(
    st.integers(0, 2**32 - 1),
    st.integers(2, 5),
    st.floats(0.01, 0.6),
)
def test_corrupt_labels_changes_exactly_the_requested_share(seed, k, z):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4 * k, 60))
    labels = np.concatenate(
        [np.repeat(np.arange(1, k + 1), 2), rng.integers(1, k + 1, size=n - 2 * k)]
    )
    sigma = Membership(labels, k)
    corrupted = corrupt_labels(sigma, z, rng)
    assert corrupted.k == k and corrupted.n == n
    changed = int((corrupted.labels != sigma.labels).sum())
    assert changed == math.ceil(z * n)
    # every shifted label is still a real community and none went empty
    assert set(np.unique(corrupted.labels)) == set(range(1, k + 1))


def test_corrupt_labels_is_reproducible():
    sigma = Membership(np.repeat([1, 2, 3], 10), 3)
    a = corrupt_labels(sigma, 0.2, np.random.default_rng(5))
    b = corrupt_labels(sigma, 0.2, np.random.default_rng(5))
    assert np.array_equal(a.labels, b.labels)


def test_corrupt_labels_domain():
    sigma = Membership(np.repeat([1, 2], 5), 2)
    with pytest.raises(ValueError, match="z must lie in"):
        corrupt_labels(sigma, 0.0, np.random.default_rng(0))
    with pytest.raises(ValueError, match="z must lie in"):
        corrupt_labels(sigma, 1.0, np.random.default_rng(0))
    with pytest.raises(ValueError, match="k >= 2"):
        corrupt_labels(Membership(np.ones(6, dtype=np.int64), 1), 0.2, np.random.default_rng(0))


# ---------------------------------------------------------------------------
# KS distance against the null law


@given(st.lists(st.floats(-15.0, 25.0), min_size=2, max_size=60))
def test_ks_distance_matches_brute_force(values):
    sample = np.asarray(values)
    assert ks_distance_to_gumbel(sample) == pytest.approx(
        oracles.ks_brute(sample, oracles.gumbel_cdf_brute), rel=1e-12, abs=1e-12
    )


@given(st.floats(-5.0, 10.0))
def test_ks_distance_of_constant_sample(c):
    # empirical CDF jumps 0 -> 1 at c, so the gap is max(F(c), 1 - F(c))
    sample = np.full(8, c)
    expected = max(gumbel_cdf(c), 1.0 - gumbel_cdf(c))
    assert ks_distance_to_gumbel(sample) == pytest.approx(expected, rel=1e-12)


def test_ks_distance_needs_two_points():
    with pytest.raises(ValueError, match="at least 2"):
        ks_distance_to_gumbel(np.array([1.0]))


def test_ks_distance_calibrated_on_exact_null_draws():
    # inverse-CDF samples of size 200 should pass the 5% KS bar almost
    # always; 95-of-100 leaves generous room for the 5% of true positives
    rng = np.random.default_rng(321)
    bar = 1.36 / math.sqrt(200.0)
    hits = sum(
        ks_distance_to_gumbel(np.array([gumbel_quantile(u) for u in rng.uniform(size=200)])) < bar
        for _ in range(100)
    )
    assert hits >= 95


# ---------------------------------------------------------------------------
# experiment rows and CSV output


def test_sim1_row_structure():
    res = run_experiment(_small_sim1())
    assert res.spec.id == "sim1"
    assert len(res.rows) == 7
    assert res.runtime_seconds >= 0.0
    per_rep, summary = res.rows[:-1], res.rows[-1]
    for offset, row in enumerate(per_rep):
        assert row["variant"] == "T_n"
        assert isinstance(row["statistic"], float)
        assert row["rejection_rate"] is None
        assert row["seed"] == 11 + offset
        assert row["n"] == 90 and row["k"] == 2 and row["k0"] == 2
    assert summary["statistic"] is None
    assert summary["seed"] == 11
    assert summary["ks_stat"] is not None
    assert summary["stderr"] is not None


def test_sim1_summary_agrees_with_replicate_rows():
    res = run_experiment(_small_sim1(base_seed=23, replications=40))
    stats = np.array([r["statistic"] for r in res.rows[:-1]], dtype=float)
    summary = res.rows[-1]
    lo, hi = gumbel_quantile(0.025), gumbel_quantile(0.975)
    rate = float(np.mean((stats > hi) | (stats < lo)))
    assert summary["rejection_rate"] == pytest.approx(rate, abs=1e-15)
    assert summary["stderr"] == pytest.approx(math.sqrt(rate * (1 - rate) / 40), rel=1e-12)
    assert summary["ks_stat"] == pytest.approx(ks_distance_to_gumbel(stats), rel=1e-12)


def test_rows_are_deterministic_for_a_seed():
    assert run_experiment(_small_sim1()).rows == run_experiment(_small_sim1()).rows


def test_rows_do_not_depend_on_worker_count(monkeypatch):
    monkeypatch.setenv("BLOCKMODEL_GOF_THREADS", "1")
    serial = run_experiment(_small_sim1(base_seed=7)).rows
    monkeypatch.setenv("BLOCKMODEL_GOF_THREADS", "2")
    parallel = run_experiment(_small_sim1(base_seed=7)).rows
    assert serial == parallel


def test_csv_output_is_byte_identical_across_reruns(tmp_path):
    first = write_experiment_csv(run_experiment(_small_sim1()), tmp_path / "a")
    second = write_experiment_csv(run_experiment(_small_sim1()), tmp_path / "b")
    assert first.name == "sim1.csv"
    a, b = first.read_bytes(), second.read_bytes()
    assert a == b
    header = a.decode().splitlines()[0]
    assert header == ",".join(CSV_COLUMNS)
    assert len(a.decode().splitlines()) == 1 + 7


def test_csv_cells_round_trip_to_row_values(tmp_path):
    res = run_experiment(_small_sim1())
    path = write_experiment_csv(res, tmp_path)
    lines = path.read_text().splitlines()
    first_rep = dict(zip(CSV_COLUMNS, lines[1].split(",")))
    assert first_rep["experiment_id"] == "sim1"
    assert first_rep["r"] == "" and first_rep["z"] == ""
    # statistics are written with repr so reading them back is lossless
    assert float(first_rep["statistic"]) == res.rows[0]["statistic"]
    summary = dict(zip(CSV_COLUMNS, lines[-1].split(",")))
    assert summary["statistic"] == ""
    assert summary["rejection_rate"] == f"{res.rows[-1]['rejection_rate']:.4f}"
