"""Population-level separation computations for alternatives to a
hypothesized membership.

Given a true block model (sigma, B) and a hypothesized membership sigma0,
these operations quantify how detectable the misfit is, with no sampling
involved:

* :func:`blockwise_average` — the probability matrix a fitted model would
  converge to: entries of B averaged over the node pairs of each
  sigma0-block pair (diagonal blocks exclude i == j);
* :func:`separation_ell` — the largest standardized row-sum gap between the
  true pair probabilities and their blockwise averages, the quantity that
  must beat sqrt(2*log(2*k0*n)) for the max-deviation test to have power;
* :func:`assess_alternative` — packages the separation, the worst
  variance-ratio r_max, and the threshold sqrt(2*log(2*k0*n))*(1+gamma*r_max)
  into an in/out verdict for the detectable class at margin gamma.

Averages are computed by exact integer regrouping (cell counts of the
sigma0 x sigma crosstab), not by floating-point pair enumeration, so that
structural identities hold exactly: averaging B under its own membership
returns B bit-for-bit, and refinements with constant B across merged blocks
give a separation of exactly zero.  The brute-force pair enumeration lives in
the test suite as an oracle and must agree to 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .models import BlockMatrix, Membership

_CHUNK_ELEMENTS = 4_000_000


def _crosstab(sigma0: Membership, sigma: Membership) -> np.ndarray:
    """counts[u0-1, a-1] = number of nodes with sigma0 = u0 and sigma = a."""
    joint = (sigma0.labels - 1) * sigma.k + (sigma.labels - 1)
    flat = np.bincount(joint, minlength=sigma0.k * sigma.k)
    return flat.reshape(sigma0.k, sigma.k)


def _check_pair(sigma: Membership, B: BlockMatrix, sigma0: Membership) -> None:
    if sigma.n != sigma0.n:
        raise ValueError("sigma and sigma0 must cover the same nodes")
    if B.k != sigma.k:
        raise ValueError(f"block matrix is {B.k}x{B.k} but sigma has k={sigma.k}")
    sizes = sigma0.sizes()
    if sizes.min() < 2:
        u = int(np.argmin(sizes)) + 1
        raise ValueError(f"sigma0 community {u} has size {int(sizes.min())}; need >= 2")


def blockwise_average(
    sigma: Membership, B: BlockMatrix, sigma0: Membership
) -> BlockMatrix:
    """Average the true pair probabilities over each sigma0-block pair.

    Off-diagonal entries average B over all size_u0 * size_v0 cross pairs;
    diagonal entries average over the size*(size-1) ordered pairs with
    i != j.  When every contributing entry of B is the same value, that value
    is returned exactly (no float summation), which is what makes
    ``blockwise_average(sigma, B, sigma)`` the identity.
    """
    _check_pair(sigma, B, sigma0)
    counts = _crosstab(sigma0, sigma).astype(np.float64)
    sizes = sigma0.sizes().astype(np.float64)
    k0 = sigma0.k
    out = np.empty((k0, k0), dtype=np.float64)
    for u0 in range(k0):
        for v0 in range(u0, k0):
            weights = np.outer(counts[u0], counts[v0])
            if u0 == v0:
                weights -= np.diag(counts[u0])  # exclude i == j
                total = sizes[u0] * (sizes[u0] - 1.0)
            else:
                total = sizes[u0] * sizes[v0]
            support = B.probs[weights > 0]
            if support.size and support.min() == support.max():
                value = float(support[0])
            else:
                value = float(np.sum(weights * B.probs) / total)
            out[u0, v0] = value
            out[v0, u0] = value
    return BlockMatrix(out)


def _max_standardized_gap(sigma, B, B0, sigma0) -> float:
    """Row-chunked max over (i, v) of the standardized grouped difference
    between true probabilities and their sigma0-blockwise averages."""
    n = sigma.n
    lab = sigma.labels - 1
    lab0 = sigma0.labels - 1
    k0 = sigma0.k
    indicator = np.zeros((n, k0), dtype=np.float64)
    indicator[np.arange(n), lab0] = 1.0
    counts = indicator.sum(axis=0)[None, :] - indicator
    best = 0.0
    step = max(1, _CHUNK_ELEMENTS // n)
    for start in range(0, n, step):
        stop = min(start + step, n)
        true_probs = B.probs[lab[start:stop, None], lab[None, :]]
        fitted = B0.probs[lab0[start:stop, None], lab0[None, :]]
        diff = (true_probs - fitted) / np.sqrt(true_probs * (1.0 - true_probs))
        rows = np.arange(start, stop)
        diff[rows - start, rows] = 0.0
        grouped = np.abs(diff @ indicator) / np.sqrt(counts[start:stop])
        best = max(best, float(grouped.max()))
    return best


def separation_ell(sigma: Membership, B: BlockMatrix, sigma0: Membership) -> float:
    """Largest standardized deviation the model fitted under sigma0 leaves
    behind, at the population level.  Requires B strictly inside (0, 1);
    this is a parameter computation, so nothing is clamped."""
    _check_pair(sigma, B, sigma0)
    if B.probs.min() <= 0.0 or B.probs.max() >= 1.0:
        raise ValueError("separation needs block probabilities strictly inside (0, 1)")
    fitted = blockwise_average(sigma, B, sigma0)
    return _max_standardized_gap(sigma, B, fitted, sigma0)


@dataclass(frozen=True)
class AlternativeAssessment:
    """Verdict on whether (sigma0, k0) is a detectable alternative for the
    true model, at margin gamma."""

    ell: float
    r_max: float
    threshold: float
    gamma: float
    in_class: bool

    def to_record(self) -> dict:
        return {
            "ell": self.ell,
            "r_max": self.r_max,
            "threshold": self.threshold,
            "gamma": self.gamma,
            "in_class": self.in_class,
        }


def assess_alternative(
    sigma: Membership, B: BlockMatrix, sigma0: Membership, gamma: float
) -> AlternativeAssessment:
    """Compare the separation against sqrt(2*log(2*k0*n))*(1 + gamma*r_max).

    r_max is the largest ratio, over node pairs i != j, of the fitted
    standard deviation to the true one; only the occupied cells of the
    sigma0 x sigma crosstab can realize it, so the search is over joint
    classes, not pairs.
    """
    if not gamma > 1.0:
        raise ValueError("gamma must exceed 1")
    _check_pair(sigma, B, sigma0)
    if B.probs.min() <= 0.0 or B.probs.max() >= 1.0:
        raise ValueError("assessment needs block probabilities strictly inside (0, 1)")
    fitted = blockwise_average(sigma, B, sigma0)
    ell = _max_standardized_gap(sigma, B, fitted, sigma0)

    counts = _crosstab(sigma0, sigma)
    cells = [(u0, a, counts[u0, a]) for u0 in range(sigma0.k) for a in range(sigma.k)
             if counts[u0, a] > 0]
    r_max = 0.0
    for idx, (u0, a, c_first) in enumerate(cells):
        for v0, b, c_second in cells[idx:]:
            if (u0, a) == (v0, b) and c_first < 2:
                continue  # a same-class pair needs two distinct nodes
            fitted_var = fitted.probs[u0, v0] * (1.0 - fitted.probs[u0, v0])
            true_var = B.probs[a, b] * (1.0 - B.probs[a, b])
            r_max = max(r_max, math.sqrt(fitted_var / true_var))
    threshold = math.sqrt(2.0 * math.log(2.0 * sigma0.k * sigma.n)) * (1.0 + gamma * r_max)
    return AlternativeAssessment(
        ell=ell, r_max=r_max, threshold=threshold, gamma=gamma,
        in_class=bool(ell >= threshold),
    )


def er_separation_asymptotic(p: float, q: float, n: int) -> float:
    """Large-n closed form of the separation when a balanced two-block model
    (within p, between q) is tested against a single merged community:
    (sqrt(n)*|p-q|/4) * |1/sqrt(q(1-q)) - 1/sqrt(p(1-p))|.

    The exact finite-n value from :func:`separation_ell` differs by an
    O(1/sqrt(n)) correction coming from the i == j exclusion; both are
    useful, so both are exposed.
    """
    for name, value in (("p", p), ("q", q)):
        if not 0.0 < value < 1.0:
            raise ValueError(f"{name} must lie in (0, 1)")
    return (
        math.sqrt(n) * abs(p - q) / 4.0
        * abs(1.0 / math.sqrt(q * (1.0 - q)) - 1.0 / math.sqrt(p * (1.0 - p)))
    )
