"""Community-label front-ends: adjacency spectral clustering and SCORE.

Variant choices, recorded here because the method names alone underdetermine
them: eigenvectors are selected by largest |eigenvalue| of the plain
adjacency matrix (no Laplacian normalization), and SCORE clamps its
eigenvector ratios at +/- log n.  Both choices are configuration, not tuning:
every run is deterministic given (graph, k, config).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import ArpackNoConvergence, eigsh
from sklearn.cluster import KMeans
from sklearn.exceptions import ConvergenceWarning

from .graphs import Graph
from .models import Membership

# Dense solves are faster and free of iteration noise up to this size; ARPACK
# also requires k < n, so near-full spectra go dense as well.
_DENSE_EIG_MAX_N = 500
_KMEANS_ATTEMPTS = 5


@dataclass(frozen=True)
class ClusteringConfig:
    restarts: int = 20
    max_iterations: int = 300
    tolerance: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tolerance < 0:
            raise ValueError("tolerance must be >= 0")


def _leading_eigenvectors(adjacency: np.ndarray, k: int, seed: int) -> np.ndarray:
    """First k eigenvectors by |eigenvalue|, with deterministic signs.

    ARPACK gets a fixed seeded start vector; each eigenvector's
    largest-magnitude coordinate is made positive so reruns and the dense
    fallback agree on orientation.
    """
    n = adjacency.shape[0]
    if n <= _DENSE_EIG_MAX_N or k >= n - 2:
        values, vectors = np.linalg.eigh(adjacency.astype(np.float64))
    else:
        start = np.random.default_rng(seed).standard_normal(n)
        try:
            values, vectors = eigsh(
                csr_matrix(adjacency).astype(np.float64), k=k, which="LM", v0=start
            )
        except ArpackNoConvergence:
            values, vectors = np.linalg.eigh(adjacency.astype(np.float64))
    order = np.argsort(-np.abs(values), kind="stable")[:k]
    chosen = vectors[:, order]
    for c in range(chosen.shape[1]):
        pivot = int(np.argmax(np.abs(chosen[:, c])))
        if chosen[pivot, c] < 0:
            chosen[:, c] = -chosen[:, c]
    return chosen


def _kmeans_labels(points: np.ndarray, k: int, cfg: ClusteringConfig) -> np.ndarray:
    """Lloyd's k-means with k-means++ restarts; retries with a shifted seed
    until all k labels are used, then gives up loudly."""
    for attempt in range(_KMEANS_ATTEMPTS):
        km = KMeans(
            n_clusters=k,
            init="k-means++",
            n_init=cfg.restarts,
            max_iter=cfg.max_iterations,
            tol=cfg.tolerance,
            algorithm="lloyd",
            random_state=(cfg.seed + attempt) % 2**32,
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConvergenceWarning)
            raw = km.fit_predict(points)
        if np.unique(raw).size == k:
            return raw
    raise RuntimeError(f"k-means could not produce {k} non-empty clusters")


def _renumber_first_occurrence(raw: np.ndarray, k: int) -> Membership:
    mapping: dict[int, int] = {}
    out = np.empty(raw.size, dtype=np.int64)
    for pos, value in enumerate(raw.tolist()):
        if value not in mapping:
            mapping[value] = len(mapping) + 1
        out[pos] = mapping[value]
    return Membership(out, k)


def _validate(g: Graph, k: int) -> None:
    if not 1 <= k <= g.n:
        raise ValueError(f"k must lie in 1..{g.n}, got {k}")


def spectral_clustering(g: Graph, k: int, cfg: ClusteringConfig | None = None) -> Membership:
    """Cluster nodes by k-means on the rows of the top-k adjacency
    eigenvector matrix.  Labels are renumbered so first occurrences increase.
    """
    _validate(g, k)
    if k == 1:
        return Membership(np.ones(g.n, dtype=np.int64), 1)
    if g.num_edges < 1:
        raise ValueError("graph must have at least one edge")
    cfg = cfg or ClusteringConfig()
    vectors = _leading_eigenvectors(g.adjacency, k, cfg.seed)
    raw = _kmeans_labels(vectors, k, cfg)
    return _renumber_first_occurrence(raw, k)


def score(g: Graph, k: int, cfg: ClusteringConfig | None = None) -> Membership:
    """Degree-robust clustering on entrywise eigenvector ratios.

    Rows of the ratio matrix R[i, l] = v_{l+1}[i] / v_1[i] are clustered by
    k-means after clamping to [-log n, log n].  Rows where |v_1[i]| falls
    below 1e-12 are pinned to the clamp boundary (sign taken from the
    numerator) and reported via a warning.
    """
    _validate(g, k)
    if k == 1:
        return Membership(np.ones(g.n, dtype=np.int64), 1)
    if g.num_edges < 1:
        raise ValueError("graph must have at least one edge")
    cfg = cfg or ClusteringConfig()
    vectors = _leading_eigenvectors(g.adjacency, k, cfg.seed)
    leading = vectors[:, 0]
    others = vectors[:, 1:]
    bound = np.log(g.n)
    degenerate = np.abs(leading) < 1e-12
    safe = np.where(degenerate, 1.0, leading)
    ratios = others / safe[:, None]
    if degenerate.any():
        warnings.warn(
            f"{int(degenerate.sum())} leading-eigenvector entries below 1e-12; "
            "their ratio rows were pinned to +/- log n",
            stacklevel=2,
        )
        pinned = np.where(others[degenerate] >= 0, bound, -bound)
        ratios[degenerate] = pinned
    np.clip(ratios, -bound, bound, out=ratios)
    raw = _kmeans_labels(ratios, k, cfg)
    return _renumber_first_occurrence(raw, k)
