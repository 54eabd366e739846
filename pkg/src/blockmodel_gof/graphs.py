"""Dense graph containers and text I/O.

Everything here is desk-scale (n up to a few thousand), so graphs are stored
as dense symmetric 0/1 matrices.  Containers are immutable after construction
and all operations are pure functions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components


class EdgeListParseError(ValueError):
    """Malformed or out-of-range edge-list input."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph held as a dense 0/1 adjacency matrix.

    Invariants (checked at construction): the matrix is square, symmetric,
    binary, and has a zero diagonal.
    """

    adjacency: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.adjacency)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be a square matrix")
        if a.size:
            if a.min() < 0 or a.max() > 1:
                raise ValueError("adjacency entries must be 0 or 1")
        a = a.astype(np.uint8)
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diagonal(a) != 0):
            raise ValueError("adjacency diagonal must be zero (no self-loops)")
        a.setflags(write=False)
        object.__setattr__(self, "adjacency", a)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def num_edges(self) -> int:
        return int(self.adjacency.sum(dtype=np.int64)) // 2

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class WeightedDigraph:
    """Directed weighted graph: nonnegative finite weights, zero diagonal."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weights must be a square matrix")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if w.size and w.min() < 0:
            raise ValueError("weights must be nonnegative")
        if np.any(np.diagonal(w) != 0):
            raise ValueError("weight diagonal must be zero")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.shape[0]


def _iter_lines(source):
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            yield from fh
    else:
        yield from source


def _parse_pairs(source, want_weight: bool):
    """Shared edge-list scanner.

    Yields (lineno, i, j, weight).  Comments ('#' to end of line) and blank
    lines are skipped.  Node ids must be nonnegative integers; the 0-/1-based
    convention is the caller's problem (detected over the whole file).
    """
    for lineno, raw in enumerate(_iter_lines(source), start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        parts = text.split()
        if want_weight:
            if len(parts) != 3:
                raise EdgeListParseError(
                    f"line {lineno}: expected 'i j weight', got {raw.strip()!r}"
                )
        elif len(parts) not in (2, 3):
            raise EdgeListParseError(
                f"line {lineno}: expected 'i j' or 'i j weight', got {raw.strip()!r}"
            )
        try:
            i = int(parts[0])
            j = int(parts[1])
        except ValueError:
            raise EdgeListParseError(
                f"line {lineno}: non-integer node id in {raw.strip()!r}"
            ) from None
        if i < 0 or j < 0:
            raise EdgeListParseError(f"line {lineno}: negative node id")
        weight = None
        if want_weight:
            try:
                weight = float(parts[2])
            except ValueError:
                raise EdgeListParseError(
                    f"line {lineno}: non-numeric weight in {raw.strip()!r}"
                ) from None
            if not np.isfinite(weight) or weight < 0:
                raise EdgeListParseError(
                    f"line {lineno}: weight must be finite and nonnegative"
                )
        yield lineno, i, j, weight


def load_edge_list(source, n_hint: int | None = None) -> Graph:
    """Read a whitespace-separated edge list into a :class:`Graph`.

    Parameters
    ----------
    source:
        Path or open text iterable.  Each data line holds two integer node
    	ids and optionally a trailing weight, which is ignored.  ``#`` starts
        a comment; blank lines are skipped.
    n_hint:
        Node count to use.  Without it, the graph spans ids up to the largest
        one seen.

    Node ids may be 0- or 1-based; the convention is auto-detected from the
    minimum id in the file.  Duplicate lines (in either order) collapse to a
    single edge.  Self-loop lines are dropped, with one warning counting them,
    because real edge lists contain them.
    """
    rows: list[tuple[int, int, int]] = []
    for lineno, i, j, _ in _parse_pairs(source, want_weight=False):
        rows.append((lineno, i, j))

    base = 0
    if rows:
        base = 0 if min(min(i, j) for _, i, j in rows) == 0 else 1
    n = n_hint if n_hint is not None else 0
    if n_hint is None and rows:
        n = max(max(i, j) for _, i, j in rows) - base + 1

    adjacency = np.zeros((n, n), dtype=np.uint8)
    dropped_loops = 0
    for lineno, i, j in rows:
        a, b = i - base, j - base
        if a >= n or b >= n:
            raise EdgeListParseError(
                f"line {lineno}: node id {max(i, j)} out of range for n={n}"
            )
        if a == b:
            dropped_loops += 1
            continue
        adjacency[a, b] = 1
        adjacency[b, a] = 1
    if dropped_loops:
        warnings.warn(f"dropped {dropped_loops} self-loop line(s)", stacklevel=2)
    return Graph(adjacency)


def load_weighted_edge_list(source, n_hint: int | None = None) -> WeightedDigraph:
    """Read a directed 'i j weight' list into a :class:`WeightedDigraph`.

    Same id conventions as :func:`load_edge_list`.  Duplicate (i, j) lines
    accumulate.  Self-loop lines are dropped with a counted warning.
    """
    rows: list[tuple[int, int, int, float]] = []
    for lineno, i, j, w in _parse_pairs(source, want_weight=True):
        rows.append((lineno, i, j, w))

    base = 0
    if rows:
        base = 0 if min(min(i, j) for _, i, j, _ in rows) == 0 else 1
    n = n_hint if n_hint is not None else 0
    if n_hint is None and rows:
        n = max(max(i, j) for _, i, j, _ in rows) - base + 1

    weights = np.zeros((n, n), dtype=np.float64)
    dropped_loops = 0
    for lineno, i, j, w in rows:
        a, b = i - base, j - base
        if a >= n or b >= n:
            raise EdgeListParseError(
                f"line {lineno}: node id {max(i, j)} out of range for n={n}"
            )
        if a == b:
            dropped_loops += 1
            continue
        weights[a, b] += w
    if dropped_loops:
        warnings.warn(f"dropped {dropped_loops} self-loop line(s)", stacklevel=2)
    return WeightedDigraph(weights)


def write_edge_list(g: Graph, sink) -> None:
    """Write the canonical edge-list form: 1-based ids, i<j, sorted lines.

    1-based output keeps the loader's base auto-detection stable on reload
    (a 0-based file whose node 0 is isolated would be misread as 1-based).
    """
    iu, ju = np.nonzero(np.triu(g.adjacency, k=1))
    lines = [f"{i + 1} {j + 1}\n" for i, j in zip(iu.tolist(), ju.tolist())]
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8") as fh:
            fh.writelines(lines)
    else:
        sink.writelines(lines)


def largest_connected_component(g: Graph) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on the largest component, plus the old->new index map.

    Ties between equal-size components go to the one containing the smallest
    original node index, so the result is deterministic.
    """
    if g.n < 1:
        raise ValueError("graph must have at least one node")
    num, labels = connected_components(csr_matrix(g.adjacency), directed=False)
    sizes = np.bincount(labels, minlength=num)
    best = sizes.max()
    # smallest first-node index among the maximal components wins
    winner = next(int(labels[i]) for i in range(g.n) if sizes[labels[i]] == best)
    keep = np.flatnonzero(labels == winner)
    sub = Graph(g.adjacency[np.ix_(keep, keep)])
    mapping = {int(old): new for new, old in enumerate(keep.tolist())}
    return sub, mapping


def symmetrize_and_threshold(w: WeightedDigraph, percentile: float) -> Graph:
    """Binarize a weighted digraph by thresholding pairwise symmetrized weights.

    Computes W_ij = w_ij + w_ji for i<j and keeps the pairs whose W_ij is >=
    the lower empirical `percentile`-quantile of the multiset {W_ij : i<j}
    (smallest value whose empirical CDF reaches `percentile`; ties included).
    """
    if not 0.0 < percentile < 1.0:
        raise ValueError("percentile must lie in (0, 1)")
    if w.n < 2:
        raise ValueError("need at least 2 nodes to threshold pair weights")
    sums = w.weights + w.weights.T
    iu, ju = np.triu_indices(w.n, k=1)
    values = np.sort(sums[iu, ju])
    idx = int(np.ceil(percentile * values.size)) - 1
    threshold = values[max(idx, 0)]
    adjacency = (sums >= threshold).astype(np.uint8)
    np.fill_diagonal(adjacency, 0)
    return Graph(adjacency)
