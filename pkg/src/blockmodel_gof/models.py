"""Parameter containers, samplers, and maximum-likelihood estimators for
stochastic block models, with and without degree correction.

Conventions used throughout the package:

* community labels are 1-based integers ``1..k``;
* node indices are 0-based;
* block-pair counts follow the ordered-pair convention, i.e. an edge inside
  a community contributes twice to that diagonal count.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graphs import Graph

logger = logging.getLogger(__name__)

# Row-chunked operations cap their temporaries at roughly this many floats.
_CHUNK_ELEMENTS = 4_000_000


@dataclass(frozen=True, eq=False)
class Membership:
    """Community assignment: 1-based labels with every label 1..k present."""

    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = np.asarray(self.labels)
        if labels.ndim != 1:
            raise ValueError("labels must be a vector")
        if not np.issubdtype(labels.dtype, np.integer):
            if not np.all(labels == labels.astype(np.int64)):
                raise ValueError("labels must be integers")
        labels = labels.astype(np.int64)
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if labels.size == 0:
            raise ValueError("labels must be non-empty")
        if labels.min() < 1 or labels.max() > self.k:
            raise ValueError(f"labels must lie in 1..{self.k}")
        present = np.unique(labels)
        if present.size != self.k:
            missing = sorted(set(range(1, self.k + 1)) - set(present.tolist()))
            raise ValueError(f"every community must be non-empty; missing {missing}")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.labels.size

    def sizes(self) -> np.ndarray:
        """Community sizes indexed 0..k-1 (community u at position u-1)."""
        return np.bincount(self.labels, minlength=self.k + 1)[1:]

    def indices(self, u: int) -> np.ndarray:
        return np.flatnonzero(self.labels == u)


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    """Symmetric k x k matrix of block connection probabilities."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError("probs must be a square matrix")
        if not np.array_equal(p, p.T):
            raise ValueError("probs must be symmetric")
        if p.min() < 0.0 or p.max() > 1.0:
            raise ValueError("probabilities must lie in [0, 1]")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def k(self) -> int:
        return self.probs.shape[0]


@dataclass(frozen=True, eq=False)
class DegreeParams:
    """Per-node positive degree multipliers."""

    omega: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=np.float64)
        if w.ndim != 1:
            raise ValueError("omega must be a vector")
        if not np.all(np.isfinite(w)):
            raise ValueError("omega entries must be finite")
        if w.size and w.min() <= 0.0:
            raise ValueError("omega entries must be positive")
        w.setflags(write=False)
        object.__setattr__(self, "omega", w)

    @property
    def n(self) -> int:
        return self.omega.size

    def normalization_gap(self, membership: Membership) -> float:
        """Max relative gap of per-community sums from community sizes.

        Zero (to float precision) means the multipliers satisfy the
        sum-to-community-size identifiability constraint.
        """
        if membership.n != self.n:
            raise ValueError("membership and omega lengths differ")
        sums = np.bincount(
            membership.labels, weights=self.omega, minlength=membership.k + 1
        )[1:]
        sizes = membership.sizes().astype(np.float64)
        return float(np.max(np.abs(sums - sizes) / sizes))


@dataclass(frozen=True, eq=False)
class BlockCounts:
    """Ordered-pair counts per block pair.

    ``pair_counts[u-1, v-1]`` is the number of ordered node pairs (i, j),
    i != j, with labels (u, v); ``edge_counts`` counts the adjacent ones.
    """

    pair_counts: np.ndarray
    edge_counts: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pair_counts, dtype=np.int64)
        m = np.asarray(self.edge_counts, dtype=np.int64)
        if p.shape != m.shape or p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError("pair_counts and edge_counts must be square and congruent")
        if not (np.array_equal(p, p.T) and np.array_equal(m, m.T)):
            raise ValueError("count matrices must be symmetric")
        if m.min() < 0 or np.any(m > p):
            raise ValueError("need 0 <= edge_counts <= pair_counts")
        p.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "pair_counts", p)
        object.__setattr__(self, "edge_counts", m)


# ---------------------------------------------------------------------------
# samplers


def sample_membership_balanced(n: int, k: int, rng: np.random.Generator) -> Membership:
    """Random assignment with community sizes as equal as possible."""
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")
    if k < 1:
        raise ValueError("k must be >= 1")
    sizes = np.full(k, n // k, dtype=np.int64)
    sizes[: n % k] += 1
    labels = np.repeat(np.arange(1, k + 1), sizes)
    rng.shuffle(labels)
    return Membership(labels, k)


def sample_membership_multinomial(
    n: int, pi: np.ndarray, rng: np.random.Generator
) -> Membership:
    """Labels drawn i.i.d. from pi; resamples whole vector while any
    community is empty so the Membership invariant holds."""
    pi = np.asarray(pi, dtype=np.float64)
    k = pi.size
    if k < 1 or pi.ndim != 1:
        raise ValueError("pi must be a non-empty vector")
    if pi.min() <= 0.0:
        raise ValueError("all pi entries must be > 0")
    if abs(pi.sum() - 1.0) > 1e-12:
        raise ValueError("pi must sum to 1")
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")
    for attempt in range(1000):
        labels = rng.choice(k, size=n, p=pi) + 1
        if np.unique(labels).size == k:
            if attempt:
                logger.info("multinomial membership resampled %d time(s)", attempt)
            return Membership(labels, k)
    raise RuntimeError("could not draw a membership with all communities non-empty")


def _sample_symmetric_bernoulli(n, pair_prob_rows, rng) -> np.ndarray:
    """Symmetric 0/1 matrix with independent upper-triangle Bernoulli draws.

    ``pair_prob_rows(start, stop)`` returns the probability rows for that
    chunk.  Full rows of uniforms are drawn so the stream layout does not
    depend on the chunk size.
    """
    adjacency = np.zeros((n, n), dtype=np.uint8)
    step = max(1, _CHUNK_ELEMENTS // max(n, 1))
    cols = np.arange(n)[None, :]
    for start in range(0, n, step):
        stop = min(start + step, n)
        probs = pair_prob_rows(start, stop)
        draws = rng.random((stop - start, n))
        hit = draws < probs
        hit &= cols > np.arange(start, stop)[:, None]  # strict upper triangle
        adjacency[start:stop] = hit
    return adjacency | adjacency.T


def sample_sbm(sigma: Membership, B: BlockMatrix, rng: np.random.Generator) -> Graph:
    """Graph with independent edges at probability B[sigma(i), sigma(j)]."""
    if B.k != sigma.k:
        raise ValueError(f"block matrix is {B.k}x{B.k} but membership has k={sigma.k}")
    lab = sigma.labels - 1
    probs = B.probs

    def rows(start, stop):
        return probs[lab[start:stop, None], lab[None, :]]

    return Graph(_sample_symmetric_bernoulli(sigma.n, rows, rng))


def _max_pair_product(sigma: Membership, B: BlockMatrix, omega: DegreeParams):
    """Exact max over i != j of omega_i * omega_j * B[sigma(i), sigma(j)].

    Only the top two multipliers per community matter, so this is O(n + k^2).
    Returns (value, i, j).
    """
    top: list[list[tuple[float, int]]] = [[] for _ in range(sigma.k)]
    for u in range(1, sigma.k + 1):
        idx = sigma.indices(u)
        order = idx[np.argsort(-omega.omega[idx], kind="stable")[:2]]
        top[u - 1] = [(float(omega.omega[i]), int(i)) for i in order]
    best = (-np.inf, -1, -1)
    for u in range(sigma.k):
        for v in range(u, sigma.k):
            if u == v:
                if len(top[u]) < 2:
                    continue
                (w1, i), (w2, j) = top[u][0], top[u][1]
            else:
                (w1, i), (w2, j) = top[u][0], top[v][0]
            value = w1 * w2 * B.probs[u, v]
            if value > best[0]:
                best = (value, i, j)
    return best


def sample_dcsbm(
    sigma: Membership, B: BlockMatrix, omega: DegreeParams, rng: np.random.Generator
) -> Graph:
    """Graph with independent edges at probability omega_i*omega_j*B[...].

    Every pair probability must lie in [0, 1]; the check is exact and the
    error names the worst offending pair.
    """
    if B.k != sigma.k:
        raise ValueError(f"block matrix is {B.k}x{B.k} but membership has k={sigma.k}")
    if omega.n != sigma.n:
        raise ValueError("omega length must match membership length")
    worst, i, j = _max_pair_product(sigma, B, omega)
    if worst > 1.0:
        raise ValueError(
            f"pair probability omega_i*omega_j*B = {worst:.6g} > 1 "
            f"for nodes ({i}, {j})"
        )
    lab = sigma.labels - 1
    probs = B.probs
    w = omega.omega

    def rows(start, stop):
        return (w[start:stop, None] * w[None, :]) * probs[lab[start:stop, None], lab[None, :]]

    return Graph(_sample_symmetric_bernoulli(sigma.n, rows, rng))


def sample_degree_params_sim4(n: int, rng: np.random.Generator) -> DegreeParams:
    """Unit-mean degree-multiplier mixture used by the DCSBM experiments:
    Uniform[4/5, 6/5] w.p. 0.8, the constant 9/11 w.p. 0.1, 13/11 w.p. 0.1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    component = rng.choice(3, size=n, p=[0.8, 0.1, 0.1])
    uniform = rng.uniform(4.0 / 5.0, 6.0 / 5.0, size=n)
    omega = np.where(component == 0, uniform, np.where(component == 1, 9.0 / 11.0, 13.0 / 11.0))
    return DegreeParams(omega)


# ---------------------------------------------------------------------------
# estimators


def block_counts(g: Graph, sigma: Membership) -> BlockCounts:
    """Ordered-pair and ordered-adjacent-pair counts per block pair."""
    if sigma.n != g.n:
        raise ValueError("membership length must match node count")
    sizes = sigma.sizes()
    pair_counts = np.outer(sizes, sizes) - np.diag(sizes)
    indicator = np.zeros((g.n, sigma.k), dtype=np.int64)
    indicator[np.arange(g.n), sigma.labels - 1] = 1
    partial = np.zeros((g.n, sigma.k), dtype=np.int64)
    step = max(1, _CHUNK_ELEMENTS // max(g.n, 1))
    for start in range(0, g.n, step):
        stop = min(start + step, g.n)
        partial[start:stop] = g.adjacency[start:stop].astype(np.int64) @ indicator
    edge_counts = indicator.T @ partial
    return BlockCounts(pair_counts, edge_counts)


def estimate_block_matrix(g: Graph, sigma0: Membership) -> BlockMatrix:
    """Maximum-likelihood block probabilities under the given membership:
    edge count over pair count for every ordered block pair."""
    sizes = sigma0.sizes()
    if sizes.min() < 2:
        u = int(np.argmin(sizes)) + 1
        raise ValueError(
            f"community {u} has size {int(sizes.min())}; diagonal estimates need size >= 2"
        )
    counts = block_counts(g, sigma0)
    return BlockMatrix(counts.edge_counts / counts.pair_counts)


def estimate_degree_params(g: Graph, sigma0: Membership) -> DegreeParams:
    """Maximum-likelihood degree multipliers under the given membership:
    community size times degree share within the community.  The output sums
    to the community size within each community by construction."""
    if sigma0.n != g.n:
        raise ValueError("membership length must match node count")
    degrees = g.degrees().astype(np.float64)
    totals = np.bincount(sigma0.labels, weights=degrees, minlength=sigma0.k + 1)[1:]
    if totals.min() <= 0.0:
        u = int(np.argmin(totals)) + 1
        raise ValueError(f"community {u} has zero total degree")
    if degrees.min() <= 0.0:
        i = int(np.argmin(degrees))
        raise ValueError(
            f"node {i} has degree 0; degree multipliers must be positive"
        )
    sizes = sigma0.sizes().astype(np.float64)
    lab = sigma0.labels - 1
    omega = sizes[lab] * degrees / totals[lab]
    return DegreeParams(omega)


# ---------------------------------------------------------------------------
# parameter construction and file I/O


def block_matrix_from_pattern(base: float, diag_boost: float, k: int) -> BlockMatrix:
    """The two-parameter family base*(1 + diag_boost*1{u==v}) covering all
    the simulation designs."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return BlockMatrix(base * (1.0 + diag_boost * np.eye(k)))


def save_membership(sigma: Membership, path) -> None:
    Path(path).write_text(
        "".join(f"{int(v)}\n" for v in sigma.labels), encoding="utf-8"
    )


def load_membership(path) -> Membership:
    labels = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            labels.append(int(text))
        except ValueError:
            raise ValueError(f"line {lineno}: membership entries must be integers") from None
    if not labels:
        raise ValueError("empty membership file")
    arr = np.asarray(labels, dtype=np.int64)
    return Membership(arr, int(arr.max()))


def save_block_matrix(B: BlockMatrix, path) -> None:
    np.savetxt(path, B.probs, delimiter=",", fmt="%.17g")


def load_block_matrix(path) -> BlockMatrix:
    probs = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    return BlockMatrix(probs)


def save_degree_params(omega: DegreeParams, path) -> None:
    np.savetxt(path, omega.omega, fmt="%.17g")


def load_degree_params(path) -> DegreeParams:
    values = np.loadtxt(path, dtype=np.float64, ndmin=1)
    return DegreeParams(values)
