"""Shared test helpers and hypothesis configuration."""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from blockmodel_gof import Graph, Membership

# Monte Carlo and matmul-heavy properties blow the default 200ms deadline on
# a one-core box; statistical assertions carry their own tolerances instead.
settings.register_profile(
    "desk",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("desk")


def graph_from_edges(n, edges):
    """Dense Graph from 1-based undirected edge pairs."""
    a = np.zeros((n, n), dtype=np.uint8)
    for i, j in edges:
        a[i - 1, j - 1] = 1
        a[j - 1, i - 1] = 1
    return Graph(a)


def random_instance(rng, n_max=40, k_max=4, dcsbm=False, min_size=1):
    """Random (graph, membership, block matrix[, omega]) tuple for oracle
    comparisons.  Every community gets at least min_size nodes; the block
    matrix stays well inside (0, 1) so clamping stays off unless a test
    wants it."""
    n = int(rng.integers(4, n_max + 1))
    k = int(rng.integers(1, min(k_max, n // (2 * min_size)) + 1))
    planted = np.repeat(np.arange(1, k + 1), min_size)
    labels = np.concatenate([planted, rng.integers(1, k + 1, size=n - planted.size)])
    rng.shuffle(labels)
    sigma = Membership(labels, k)
    half = rng.uniform(0.05, 0.95, size=(k, k))
    probs = (half + half.T) / 2.0
    adjacency = (rng.random((n, n)) < 0.4).astype(np.uint8)
    adjacency = np.triu(adjacency, 1)
    adjacency = adjacency + adjacency.T
    graph = Graph(adjacency)
    if not dcsbm:
        return graph, sigma, probs
    omega = rng.uniform(0.5, 1.4, size=n)
    return graph, sigma, probs, omega


@st.composite
def seeded_instance(draw, n_max=20, k_max=4, dcsbm=False, min_size=1):
    """Hypothesis wrapper over random_instance (shrinks on the seed only)."""
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    return random_instance(rng, n_max=n_max, k_max=k_max, dcsbm=dcsbm, min_size=min_size)


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)
