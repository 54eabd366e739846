"""Goodness-of-fit statistics for block models and their exact Gumbel null.

The machinery below tests a hypothesized community structure against an
observed graph through the largest standardized deviation between observed
and fitted edge counts.

For a hypothesized membership sigma0 with k0 communities, every node i and
community v get a standardized deviation

    rho[i, v] = (1 / sqrt(|members of v, excluding i|))
                * sum over members j of v, j != i, of
                  (A[i, j] - p[i, j]) / sqrt(p[i, j] * (1 - p[i, j]))

where p[i, j] is the fitted pair probability: the estimated block probability
for the plain model, or the degree-multiplier product times the block
probability for the degree-corrected one.  Writing L for the largest |rho|
entry, the centered statistic

    T = L^2 - 2*log(2*k0*n) + log(log(2*k0*n))

follows, in the large-n limit under the null, a Gumbel law with location
-2*log(2*sqrt(pi)) and scale 2, which supplies exact critical values and
p-values.  The degree-corrected variant with estimated multipliers needs the
additional scale factor sqrt((k0+1)/k0) on L before centering; that variant
is "T_n3" below, and uncorrected "T_n2" is kept only as a diagnostic.

Both hypothesis tests reduce to this machinery:

* number-of-communities test: cluster the graph into k0 groups, then test
  the clustered membership;
* membership test: test the supplied membership directly.

Decisions are two-sided: reject when T falls outside the (alpha/2, 1-alpha/2)
Gumbel quantile interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .detect import ClusteringConfig, score, spectral_clustering
from .graphs import Graph
from .models import (
    BlockMatrix,
    DegreeParams,
    Membership,
    estimate_block_matrix,
    estimate_degree_params,
)

#: Location of the limiting Gumbel law: -2*log(2*sqrt(pi)).
GUMBEL_LOCATION = -2.0 * math.log(2.0 * math.sqrt(math.pi))
#: Scale of the limiting Gumbel law.
GUMBEL_SCALE = 2.0

VARIANT_SBM = "sbm"
VARIANT_DCSBM_KNOWN = "dcsbm-known-omega"
VARIANT_DCSBM_ESTIMATED = "dcsbm-estimated-omega"

#: Statistic ids accepted by :func:`statistic_T`.
STATISTIC_IDS = ("T_n", "T_n1", "T_n2", "T_n3")

_CHUNK_ELEMENTS = 4_000_000

#: Relative window below the largest |rho| whose entries are recomputed as
#: exactly rounded sums; must sit far above float64 accumulation noise
#: (~1e-13 relative) for the maximum to be numbering-independent.
_TOP_WINDOW = 1e-9


@dataclass(frozen=True)
class GumbelNull:
    """The limiting null law; fixed, so the constructor takes no arguments."""

    location: float = field(default=GUMBEL_LOCATION, init=False)
    scale: float = field(default=GUMBEL_SCALE, init=False)

    def cdf(self, y):
        return gumbel_cdf(y)

    def quantile(self, p):
        return gumbel_quantile(p)


def gumbel_cdf(y):
    """CDF of the null law: exp(-exp(-y/2) / (2*sqrt(pi))).

    Accepts scalars or arrays; returns the matching shape.
    """
    arr = np.asarray(y, dtype=np.float64)
    # far-left tail: inner exp overflows to inf, outer exp(-inf) is exactly 0
    with np.errstate(over="ignore"):
        out = np.exp(-np.exp(-arr / 2.0) / (2.0 * math.sqrt(math.pi)))
    return float(out) if np.isscalar(y) or arr.ndim == 0 else out


def gumbel_quantile(p: float) -> float:
    """Exact inverse of :func:`gumbel_cdf` on (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile level must lie in (0, 1), got {p}")
    return GUMBEL_LOCATION - 2.0 * math.log(-math.log(p))


@dataclass(frozen=True, eq=False)
class DeviationField:
    """Standardized deviations rho (n x k0), the scaling variant that produced
    them, and the count of fitted pair probabilities clamped away from {0, 1}."""

    rho: np.ndarray
    variant: str
    clamp_events: int = 0

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=np.float64)
        if rho.ndim != 2 or rho.size == 0:
            raise ValueError("rho must be a non-empty n x k0 matrix")
        if not np.all(np.isfinite(rho)):
            raise ValueError("rho entries must be finite")
        if self.variant not in (VARIANT_SBM, VARIANT_DCSBM_KNOWN, VARIANT_DCSBM_ESTIMATED):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.clamp_events < 0:
            raise ValueError("clamp_events must be >= 0")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)


def _standardized_row_sums(adjacency, labels0, k0, pair_prob_rows):
    """Row-chunked core shared by every model variant.

    ``pair_prob_rows(start, stop)`` must return a fresh, writable float64
    block of fitted pair probabilities for those rows.  Sharing this kernel
    is what makes the degree-corrected run with all multipliers equal to one
    bit-identical to the plain run: the probability blocks are then equal
    arrays and every downstream operation is the same.

    Returns (rho, clamp_events), where clamp_events counts the ordered
    off-diagonal pairs whose probability fell outside [eps, 1-eps],
    eps = 1/(2n^2).
    """
    n = adjacency.shape[0]
    eps = 1.0 / (2.0 * n * n)
    high = 1.0 - eps
    indicator = np.zeros((n, k0), dtype=np.float64)
    indicator[np.arange(n), labels0] = 1.0
    sums = np.empty((n, k0), dtype=np.float64)
    clamped = 0
    step = max(1, _CHUNK_ELEMENTS // n)
    for start in range(0, n, step):
        stop = min(start + step, n)
        probs = pair_prob_rows(start, stop)
        rows = np.arange(start, stop)
        # the diagonal never enters any sum; park it mid-range so it cannot
        # trip the clamp counter
        probs[rows - start, rows] = 0.5
        clamped += int(np.count_nonzero((probs < eps) | (probs > high)))
        np.clip(probs, eps, high, out=probs)
        residual = (adjacency[start:stop] - probs) / np.sqrt(probs * (1.0 - probs))
        residual[rows - start, rows] = 0.0
        sums[start:stop] = residual @ indicator
    counts = indicator.sum(axis=0)[None, :] - indicator  # |sigma0^-1(v) \ {i}|
    if counts.min() < 1.0:
        raise ValueError("every hypothesized community needs size >= 2")
    rho = sums / np.sqrt(counts)
    _canonicalize_top_entries(rho, adjacency, labels0, pair_prob_rows, counts)
    return rho, clamped


def _canonicalize_top_entries(rho, adjacency, labels0, pair_prob_rows, counts):
    """Recompute every near-maximal |rho| entry as an exactly rounded sum.

    The chunked pass accumulates in node order, so the last bits of each
    entry depend on the node numbering.  The max-deviation statistic must be
    invariant under joint node permutations, exactly; rewriting all entries
    within a relative window of the maximum with math.fsum (exactly rounded
    whatever the term order) pins the maximum to a numbering-independent
    value.  Entries below the window cannot contend: the fast pass is
    accurate to ~1e-13 relative, orders of magnitude inside the window.
    """
    n = adjacency.shape[0]
    eps = 1.0 / (2.0 * n * n)
    abs_rho = np.abs(rho)
    top = float(abs_rho.max())
    if top == 0.0:
        return
    for i, v in zip(*np.nonzero(abs_rho >= top * (1.0 - _TOP_WINDOW))):
        probs = pair_prob_rows(int(i), int(i) + 1)[0]
        np.clip(probs, eps, 1.0 - eps, out=probs)
        members = np.flatnonzero(labels0 == v)
        members = members[members != i]
        p = probs[members]
        terms = (adjacency[i, members] - p) / np.sqrt(p * (1.0 - p))
        rho[i, v] = math.fsum(terms) / math.sqrt(counts[i, v])


def _check_field_inputs(g: Graph, sigma0: Membership, block_matrix: BlockMatrix):
    if sigma0.n != g.n:
        raise ValueError("membership length must match node count")
    if block_matrix.k != sigma0.k:
        raise ValueError(
            f"block matrix is {block_matrix.k}x{block_matrix.k} "
            f"but membership has k={sigma0.k}"
        )
    sizes = sigma0.sizes()
    if sizes.min() < 2:
        u = int(np.argmin(sizes)) + 1
        raise ValueError(f"community {u} has size {int(sizes.min())}; need >= 2")


def deviation_field_sbm(
    g: Graph, sigma0: Membership, block_matrix: BlockMatrix
) -> DeviationField:
    """Standardized deviations under the plain block model.

    ``block_matrix`` is normally the maximum-likelihood estimate under
    ``sigma0`` but may be supplied explicitly (e.g. the true matrix, for
    calibration studies).
    """
    _check_field_inputs(g, sigma0, block_matrix)
    lab0 = sigma0.labels - 1
    probs = block_matrix.probs

    def rows(start, stop):
        return probs[lab0[start:stop, None], lab0[None, :]]

    rho, clamped = _standardized_row_sums(g.adjacency, lab0, sigma0.k, rows)
    return DeviationField(rho, VARIANT_SBM, clamped)


def deviation_field_dcsbm(
    g: Graph,
    sigma0: Membership,
    block_matrix: BlockMatrix,
    omega: DegreeParams,
    omega_is_estimated: bool = False,
) -> DeviationField:
    """Standardized deviations under the degree-corrected block model.

    The fitted pair probability is omega_i*omega_j*B[...]; set
    ``omega_is_estimated`` when the multipliers came from the graph itself,
    because that changes which centered statistic is asymptotically valid
    (see :func:`statistic_T`).
    """
    _check_field_inputs(g, sigma0, block_matrix)
    if omega.n != g.n:
        raise ValueError("omega length must match node count")
    lab0 = sigma0.labels - 1
    probs = block_matrix.probs
    w = omega.omega

    def rows(start, stop):
        return (w[start:stop, None] * w[None, :]) * probs[lab0[start:stop, None], lab0[None, :]]

    rho, clamped = _standardized_row_sums(g.adjacency, lab0, sigma0.k, rows)
    variant = VARIANT_DCSBM_ESTIMATED if omega_is_estimated else VARIANT_DCSBM_KNOWN
    return DeviationField(rho, variant, clamped)


def statistic_L(field: DeviationField) -> float:
    """Largest absolute standardized deviation."""
    return float(np.max(np.abs(field.rho)))


def statistic_T(L: float, k0: int, n: int, variant: str = "T_n") -> float:
    """Center and scale the max deviation into its limiting-Gumbel form.

    Variants "T_n", "T_n1", "T_n2" all return L^2 - 2*log(2*k0*n) +
    log(log(2*k0*n)); "T_n3" first inflates L by sqrt((k0+1)/k0), the
    correction needed when the degree multipliers were estimated.
    """
    if variant not in STATISTIC_IDS:
        raise ValueError(f"variant must be one of {STATISTIC_IDS}, got {variant!r}")
    if n < 2 or k0 < 1:
        raise ValueError("need n >= 2 and k0 >= 1")
    if L < 0:
        raise ValueError("L must be >= 0")
    if variant == "T_n3":
        L = math.sqrt((k0 + 1.0) / k0) * L
    grid = 2.0 * k0 * n
    return L * L - 2.0 * math.log(grid) + math.log(math.log(grid))


@dataclass(frozen=True)
class TestReport:
    """Outcome of one two-sided test, with everything needed to audit it."""

    statistic: float
    max_deviation: float
    variant: str
    k0: int
    n: int
    alpha: float
    lower_critical: float
    upper_critical: float
    reject: bool
    p_value: float
    clamp_events: int
    sigma0_source: str = "supplied"
    diagnostics: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        """Flat key->value form; diagnostics are inlined at the end."""
        record = {
            "statistic": self.statistic,
            "max_deviation": self.max_deviation,
            "variant": self.variant,
            "k0": self.k0,
            "n": self.n,
            "alpha": self.alpha,
            "lower_critical": self.lower_critical,
            "upper_critical": self.upper_critical,
            "reject": self.reject,
            "p_value": self.p_value,
            "clamp_events": self.clamp_events,
            "sigma0_source": self.sigma0_source,
        }
        for key in sorted(self.diagnostics):
            record[key] = self.diagnostics[key]
        return record


def _decide(statistic, max_deviation, variant, k0, n, alpha, clamp_events,
            sigma0_source, diagnostics=None) -> TestReport:
    lower = gumbel_quantile(alpha / 2.0)
    upper = gumbel_quantile(1.0 - alpha / 2.0)
    cdf = gumbel_cdf(statistic)
    p_value = 2.0 * min(cdf, 1.0 - cdf)
    return TestReport(
        statistic=statistic,
        max_deviation=max_deviation,
        variant=variant,
        k0=k0,
        n=n,
        alpha=alpha,
        lower_critical=lower,
        upper_critical=upper,
        reject=bool(statistic > upper or statistic < lower),
        p_value=p_value,
        clamp_events=clamp_events,
        sigma0_source=sigma0_source,
        diagnostics=diagnostics or {},
    )


def _singleton_guard(sigma_hat: Membership, k0: int) -> None:
    sizes = sigma_hat.sizes()
    if sizes.min() < 2:
        u = int(np.argmin(sizes)) + 1
        raise ValueError(
            f"clustering produced a singleton community (community {u} of {k0}); "
            "the hypothesized community count is likely misspecified for this graph"
        )


def _validate_test_args(alpha: float, model: str) -> str:
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    model = model.lower()
    if model not in ("sbm", "dcsbm"):
        raise ValueError(f"model must be 'sbm' or 'dcsbm', got {model!r}")
    return model


def _report_for_membership(
    g: Graph, sigma0: Membership, alpha: float, model: str, sigma0_source: str
) -> TestReport:
    """Shared back-end: fit under sigma0, build the field, decide."""
    block_hat = estimate_block_matrix(g, sigma0)
    k0 = sigma0.k
    if model == "sbm":
        dev = deviation_field_sbm(g, sigma0, block_hat)
        L = statistic_L(dev)
        t = statistic_T(L, k0, g.n, "T_n")
        return _decide(t, L, "T_n", k0, g.n, alpha, dev.clamp_events, sigma0_source)
    omega_hat = estimate_degree_params(g, sigma0)
    dev = deviation_field_dcsbm(g, sigma0, block_hat, omega_hat, omega_is_estimated=True)
    L = statistic_L(dev)
    t3 = statistic_T(L, k0, g.n, "T_n3")
    t2 = statistic_T(L, k0, g.n, "T_n2")
    return _decide(
        t3, L, "T_n3", k0, g.n, alpha, dev.clamp_events, sigma0_source,
        diagnostics={"T_n2": t2},
    )


def test_num_communities(
    g: Graph,
    k0: int,
    alpha: float = 0.05,
    model: str = "sbm",
    cfg: ClusteringConfig | None = None,
) -> TestReport:
    """Two-sided test of "the graph has exactly k0 communities".

    The membership is first recovered at k0 (spectral clustering for the
    plain model, SCORE for the degree-corrected one), then the fitted model
    is scored by the max-deviation statistic against its Gumbel null.
    """
    model = _validate_test_args(alpha, model)
    if k0 < 1:
        raise ValueError("k0 must be >= 1")
    if g.num_edges < 1:
        raise ValueError("graph must have at least one edge")
    cfg = cfg or ClusteringConfig()
    if model == "sbm":
        sigma_hat = spectral_clustering(g, k0, cfg)
        source = "spectral-clustering"
    else:
        sigma_hat = score(g, k0, cfg)
        source = "score"
    _singleton_guard(sigma_hat, k0)
    return _report_for_membership(g, sigma_hat, alpha, model, source)


def test_membership(
    g: Graph, sigma0: Membership, alpha: float = 0.05, model: str = "sbm"
) -> TestReport:
    """Two-sided test of "the communities are exactly sigma0"."""
    model = _validate_test_args(alpha, model)
    if sigma0.n != g.n:
        raise ValueError("membership length must match node count")
    if g.num_edges < 1:
        raise ValueError("graph must have at least one edge")
    sizes = sigma0.sizes()
    if sizes.min() < 2:
        u = int(np.argmin(sizes)) + 1
        raise ValueError(f"community {u} has size {int(sizes.min())}; need >= 2")
    return _report_for_membership(g, sigma0, alpha, model, "supplied")
