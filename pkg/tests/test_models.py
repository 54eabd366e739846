"""Block-model containers, samplers, estimators, and parameter I/O.

The Monte Carlo checks here pin sampler moments at the sizes the simulation
designs use; each one states its own standard-error budget inline.
"""

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from blockmodel_gof import (
    BlockCounts,
    BlockMatrix,
    DegreeParams,
    Graph,
    Membership,
    block_counts,
    block_matrix_from_pattern,
    estimate_block_matrix,
    estimate_degree_params,
    load_block_matrix,
    load_degree_params,
    load_membership,
    sample_dcsbm,
    sample_degree_params_sim4,
    sample_membership_balanced,
    sample_membership_multinomial,
    sample_sbm,
    save_block_matrix,
    save_degree_params,
    save_membership,
)
from conftest import graph_from_edges, seeded_instance


# ---------------------------------------------------------------------------
# containers


def test_membership_accessors():
    sigma = Membership(np.array([2, 1, 2, 2]), 2)
    assert sigma.n == 4
    assert sigma.sizes().tolist() == [1, 3]
    assert sigma.indices(2).tolist() == [0, 2, 3]


@pytest.mark.parametrize(
    "labels, k",
    [
        ([1, 2, 3], 2),     # label out of range
        ([1, 1, 1], 2),     # community 2 empty
        ([1.5, 2.0], 2),    # non-integer labels
        ([], 1),            # empty vector
        ([1], 0),           # k < 1
    ],
)
def test_membership_rejects_invalid_input(labels, k):
    with pytest.raises(ValueError):
        Membership(np.array(labels), k)


def test_block_matrix_validation():
    with pytest.raises(ValueError, match="symmetric"):
        BlockMatrix(np.array([[0.1, 0.2], [0.3, 0.1]]))
    with pytest.raises(ValueError):
        BlockMatrix(np.array([[1.2]]))
    assert BlockMatrix(np.array([[0.5]])).k == 1


def test_degree_params_validation():
    with pytest.raises(ValueError, match="positive"):
        DegreeParams(np.array([1.0, 0.0]))
    with pytest.raises(ValueError, match="finite"):
        DegreeParams(np.array([np.nan]))


def test_normalization_gap():
    sigma = Membership(np.array([1, 1, 2, 2]), 2)
    assert DegreeParams(np.array([0.5, 1.5, 1.0, 1.0])).normalization_gap(sigma) == 0.0
    assert DegreeParams(np.ones(4) * 2.0).normalization_gap(sigma) == pytest.approx(1.0)
    with pytest.raises(ValueError, match="lengths"):
        DegreeParams(np.ones(3)).normalization_gap(sigma)


def test_block_counts_container_validation():
    with pytest.raises(ValueError, match="edge_counts <= pair_counts"):
        BlockCounts(np.array([[2]]), np.array([[3]]))


# ---------------------------------------------------------------------------
# membership samplers


@pytest.mark.parametrize(
    "n, k, expected_sizes",
    [
        (6, 3, [2, 2, 2]),
        (7, 3, [3, 2, 2]),
        (400, 2, [200, 200]),
    ],
)
def test_balanced_sizes(n, k, expected_sizes, rng):
    sigma = sample_membership_balanced(n, k, rng)
    assert sorted(sigma.sizes().tolist(), reverse=True) == expected_sizes


def test_balanced_rejects_bad_k(rng):
    with pytest.raises(ValueError):
        sample_membership_balanced(3, 4, rng)
    with pytest.raises(ValueError):
        sample_membership_balanced(3, 0, rng)


def test_multinomial_rejects_degenerate_pi(rng):
    with pytest.raises(ValueError, match="> 0"):
        sample_membership_multinomial(10, np.array([1.0, 0.0]), rng)
    with pytest.raises(ValueError, match="sum to 1"):
        sample_membership_multinomial(10, np.array([0.5, 0.6]), rng)


def test_multinomial_uniform_three_way(rng):
    sigma = sample_membership_multinomial(500, np.full(3, 1.0 / 3.0), rng)
    assert sigma.k == 3 and sigma.n == 500


def test_multinomial_reproducible_and_unbiased():
    first = sample_membership_multinomial(30, np.array([0.5, 0.5]), np.random.default_rng(7))
    second = sample_membership_multinomial(30, np.array([0.5, 0.5]), np.random.default_rng(7))
    assert np.array_equal(first.labels, second.labels)

    # pooled label-1 share over 10^4 resamples of n=30; SE = sqrt(.25/(30*1e4))
    rng = np.random.default_rng(11)
    ones = sum(
        int(np.sum(sample_membership_multinomial(30, np.array([0.5, 0.5]), rng).labels == 1))
        for _ in range(10_000)
    )
    share = ones / (30 * 10_000)
    assert abs(share - 0.5) < 3.0 * np.sqrt(0.25 / (30 * 10_000))


# ---------------------------------------------------------------------------
# graph samplers


def test_sbm_degenerate_probabilities(rng):
    sigma = sample_membership_balanced(8, 2, rng)
    empty = sample_sbm(sigma, BlockMatrix(np.zeros((2, 2))), rng)
    assert empty.num_edges == 0
    complete = sample_sbm(sigma, BlockMatrix(np.ones((2, 2))), rng)
    assert complete.num_edges == 8 * 7 // 2


def test_sbm_rejects_size_mismatch(rng):
    sigma = sample_membership_balanced(6, 3, rng)
    with pytest.raises(ValueError, match="k=3"):
        sample_sbm(sigma, BlockMatrix(np.full((2, 2), 0.5)), rng)


def test_sbm_density_moments():
    # n=600, k=3 balanced, B = 0.1(1+4*diag): within-block density 0.5 and
    # between-block 0.1, pooled over 100 replicates, 3 SE budget
    rng = np.random.default_rng(101)
    sigma = sample_membership_balanced(600, 3, rng)
    B = block_matrix_from_pattern(0.1, 4.0, 3)
    within_edges = within_pairs = between_edges = between_pairs = 0
    for _ in range(100):
        counts = block_counts(sample_sbm(sigma, B, rng), sigma)
        diag = np.diag_indices(3)
        within_edges += counts.edge_counts[diag].sum()
        within_pairs += counts.pair_counts[diag].sum()
        between_edges += counts.edge_counts.sum() - counts.edge_counts[diag].sum()
        between_pairs += counts.pair_counts.sum() - counts.pair_counts[diag].sum()
    # ordered counts double every unordered Bernoulli, so halve for the SE
    within_se = np.sqrt(0.5 * 0.5 / (within_pairs / 2))
    between_se = np.sqrt(0.1 * 0.9 / (between_pairs / 2))
    assert abs(within_edges / within_pairs - 0.5) < 3 * within_se
    assert abs(between_edges / between_pairs - 0.1) < 3 * between_se


def test_dcsbm_with_unit_multipliers_matches_sbm_stream():
    sigma = sample_membership_balanced(40, 2, np.random.default_rng(3))
    B = block_matrix_from_pattern(0.2, 1.0, 2)
    plain = sample_sbm(sigma, B, np.random.default_rng(99))
    corrected = sample_dcsbm(sigma, B, DegreeParams(np.ones(40)), np.random.default_rng(99))
    assert np.array_equal(plain.adjacency, corrected.adjacency)


def test_dcsbm_rejects_pair_probability_above_one(rng):
    sigma = Membership(np.array([1, 1]), 1)
    omega = DegreeParams(np.array([1.2, 1.2]))
    with pytest.raises(ValueError) as err:
        sample_dcsbm(sigma, BlockMatrix(np.array([[0.9]])), omega, rng)
    assert "1.296" in str(err.value)
    assert "(0, 1)" in str(err.value)


def test_dcsbm_mixture_mean_is_one():
    # mixture mean 0.8*1 + 0.1*(9/11) + 0.1*(13/11) = 1, 3 empirical SE
    rng = np.random.default_rng(5)
    draws = sample_degree_params_sim4(10_000, rng).omega
    assert abs(draws.mean() - 1.0) < 3.0 * draws.std() / np.sqrt(draws.size)


def test_sim4_mixture_support_and_mean():
    rng = np.random.default_rng(17)
    draws = sample_degree_params_sim4(100_000, rng).omega
    assert draws.min() >= 0.8 and draws.max() <= 1.2
    assert abs(draws.mean() - 1.0) < 0.01


def test_sim4_mixture_deterministic():
    a = sample_degree_params_sim4(50, np.random.default_rng(23)).omega
    b = sample_degree_params_sim4(50, np.random.default_rng(23)).omega
    assert np.array_equal(a, b)


# ---------------------------------------------------------------------------
# estimators


def test_block_counts_single_edge_in_community():
    # frozen by scripts/derive_frozen_values.py, section B
    g = graph_from_edges(5, [(1, 2), (4, 5)])
    counts = block_counts(g, Membership(np.array([1, 1, 1, 2, 2]), 2))
    assert counts.pair_counts[0, 0] == 6
    assert counts.edge_counts[0, 0] == 2


def test_block_counts_empty_and_complete():
    sigma = Membership(np.array([1, 1, 2, 2, 2]), 2)
    empty = block_counts(graph_from_edges(5, []), sigma)
    assert empty.edge_counts.sum() == 0
    assert empty.pair_counts[0, 1] == 2 * 3
    complete = graph_from_edges(5, [(i, j) for i in range(1, 6) for j in range(i + 1, 6)])
    counts = block_counts(complete, sigma)
    assert np.array_equal(counts.edge_counts, counts.pair_counts)


@given(seeded_instance())
def test_block_counts_match_oracle_and_conserve_edges(instance):
    g, sigma, _ = instance
    counts = block_counts(g, sigma)
    pair, edge = oracles.block_counts_brute(g.adjacency, sigma.labels, sigma.k)
    assert np.array_equal(counts.pair_counts, pair)
    assert np.array_equal(counts.edge_counts, edge)
    assert counts.edge_counts.sum() == 2 * g.num_edges


def test_block_matrix_mle_hand_example():
    # frozen by scripts/derive_frozen_values.py, section C
    g = graph_from_edges(4, [(1, 2), (1, 3), (3, 4)])
    B = estimate_block_matrix(g, Membership(np.array([1, 1, 2, 2]), 2))
    assert np.array_equal(B.probs, np.array([[1.0, 0.25], [0.25, 1.0]]))


def test_block_matrix_mle_saturation():
    complete = graph_from_edges(4, [(i, j) for i in range(1, 5) for j in range(i + 1, 5)])
    one = Membership(np.array([1, 1, 1, 1]), 1)
    assert estimate_block_matrix(complete, one).probs[0, 0] == 1.0
    assert estimate_block_matrix(graph_from_edges(4, []), one).probs[0, 0] == 0.0


def test_block_matrix_mle_needs_pairs():
    g = graph_from_edges(3, [(1, 2)])
    with pytest.raises(ValueError, match="size 1"):
        estimate_block_matrix(g, Membership(np.array([1, 1, 2]), 2))


def test_block_matrix_mle_consistency():
    # n=1200, k=2 balanced: max|Bhat - B| < 0.02 in >= 95% of 200 replicates
    rng = np.random.default_rng(401)
    B = block_matrix_from_pattern(0.1, 2.0, 2)
    sigma = sample_membership_balanced(1200, 2, rng)
    hits = 0
    for _ in range(200):
        estimate = estimate_block_matrix(sample_sbm(sigma, B, rng), sigma)
        hits += np.abs(estimate.probs - B.probs).max() < 0.02
    assert hits >= 190


@given(seeded_instance(), st.randoms(use_true_random=False))
def test_block_matrix_mle_relabeling_equivariance(instance, pyrandom):
    g, sigma, _ = instance
    assume(sigma.sizes().min() >= 2)
    tau = list(range(1, sigma.k + 1))
    pyrandom.shuffle(tau)
    tau = np.asarray(tau)
    relabeled = Membership(tau[sigma.labels - 1], sigma.k)
    base = estimate_block_matrix(g, sigma).probs
    moved = estimate_block_matrix(g, relabeled).probs
    # entry (u, v) of the base must sit at (tau(u), tau(v)) afterwards
    assert np.array_equal(moved[np.ix_(tau - 1, tau - 1)], base)


@given(seeded_instance(), st.integers(0, 2**32 - 1))
def test_block_matrix_mle_node_permutation_invariance(instance, seed):
    g, sigma, _ = instance
    assume(sigma.sizes().min() >= 2)
    perm = np.random.default_rng(seed).permutation(g.n)
    permuted_graph = Graph(g.adjacency[np.ix_(perm, perm)])
    permuted_sigma = Membership(sigma.labels[perm], sigma.k)
    assert np.array_equal(
        estimate_block_matrix(permuted_graph, permuted_sigma).probs,
        estimate_block_matrix(g, sigma).probs,
    )


def test_degree_params_hand_example():
    # frozen by scripts/derive_frozen_values.py, section D
    g = graph_from_edges(6, [(1, 3), (1, 4), (1, 5), (2, 6)])
    omega = estimate_degree_params(g, Membership(np.array([1, 1, 2, 2, 2, 2]), 2))
    assert np.array_equal(omega.omega, np.array([1.5, 0.5, 1.0, 1.0, 1.0, 1.0]))


def test_degree_params_regular_graph_gives_unit_multipliers():
    cycle = graph_from_edges(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)])
    omega = estimate_degree_params(cycle, Membership(np.ones(6, dtype=np.int64), 1))
    assert np.array_equal(omega.omega, np.ones(6))


def test_degree_params_zero_degree_community():
    g = graph_from_edges(4, [(1, 2)])
    with pytest.raises(ValueError, match="zero total degree"):
        estimate_degree_params(g, Membership(np.array([1, 1, 2, 2]), 2))


def test_degree_params_zero_degree_node():
    g = graph_from_edges(3, [(1, 2)])
    with pytest.raises(ValueError, match="node 2 has degree 0"):
        estimate_degree_params(g, Membership(np.array([1, 1, 1]), 1))


@given(seeded_instance())
def test_degree_params_normalization_identity(instance):
    g, sigma, _ = instance
    assume(g.degrees().min() > 0)
    omega = estimate_degree_params(g, sigma)
    assert omega.normalization_gap(sigma) < 1e-9
    expected = oracles.degree_params_brute(g.adjacency, sigma.labels)
    assert np.allclose(omega.omega, expected, rtol=1e-12, atol=0)


# ---------------------------------------------------------------------------
# parameter construction and file I/O


def test_pattern_builder():
    B = block_matrix_from_pattern(0.1, 2.0, 3)
    assert np.array_equal(B.probs, 0.1 * (1.0 + 2.0 * np.eye(3)))
    with pytest.raises(ValueError):
        block_matrix_from_pattern(0.1, 2.0, 0)


@given(st.lists(st.integers(1, 4), min_size=4, max_size=20))
def test_membership_save_load_round_trip(tmp_path_factory, raw):
    labels = np.asarray(raw + [1, 2, 3, 4])  # force every label present
    sigma = Membership(labels, 4)
    path = tmp_path_factory.mktemp("io") / "membership.txt"
    save_membership(sigma, path)
    back = load_membership(path)
    assert back.k == sigma.k
    assert np.array_equal(back.labels, sigma.labels)


def test_load_membership_edge_cases(tmp_path):
    path = tmp_path / "sigma.txt"
    path.write_text("# comment\n1\n\n2\n", encoding="utf-8")
    assert load_membership(path).labels.tolist() == [1, 2]
    path.write_text("1\nx\n", encoding="utf-8")
    with pytest.raises(ValueError, match="line 2"):
        load_membership(path)
    path.write_text("", encoding="utf-8")
    with pytest.raises(ValueError, match="empty"):
        load_membership(path)


def test_float_parameter_files_round_trip_exactly(tmp_path, rng):
    half = rng.uniform(0.01, 0.99, size=(3, 3))
    B = BlockMatrix((half + half.T) / 2.0)
    save_block_matrix(B, tmp_path / "B.csv")
    assert np.array_equal(load_block_matrix(tmp_path / "B.csv").probs, B.probs)

    omega = DegreeParams(rng.uniform(0.5, 1.5, size=7))
    save_degree_params(omega, tmp_path / "omega.txt")
    assert np.array_equal(load_degree_params(tmp_path / "omega.txt").omega, omega.omega)
