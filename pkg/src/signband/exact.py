"""Exact band boundaries: the upper roof and the lower floor under it.

The upper boundary is the pointwise max over all accepted candidate lines;
the lower boundary is the pointwise min over all accepted tangent pairs
below the roof. Acceptance always means the one-sided multiscale statistic
of the residual signs stays below kappa.
"""

import time
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .core import t_naught_batch
from .geometry import (
    SortedDataset,
    candidate_j_set,
    enumerate_candidates,
    eval_candidate,
    tangent_params_all,
)

__all__ = [
    "BandResult",
    "InfeasibleError",
    "upper_exact",
    "feasibility_check",
    "lower_exact",
    "band_exact",
    "finite_range",
]

_CHUNK = 1024


class InfeasibleError(RuntimeError):
    """The confidence set is empty: convexity of the median is not plausible."""


@dataclass
class BandResult:
    lower: np.ndarray | None
    upper: np.ndarray
    kappa: float
    alpha: float
    feasible: bool
    x_min: float
    x_max: float
    mode: str


def finite_range(data: SortedDataset, U) -> tuple:
    """(x_min, x_max): abscissa range on which the roof is finite.

    (inf, -inf) when no finite value exists.
    """
    U = np.asarray(U)
    finite = np.isfinite(U)
    if not finite.any():
        return np.inf, -np.inf
    xs = data.x[finite]
    return float(xs.min()), float(xs.max())


def upper_exact(data: SortedDataset, kappa: float) -> np.ndarray:
    """Pointwise max over accepted candidate lines at the design points."""
    y = data.y
    n = data.n
    candidates = enumerate_candidates(data)
    upper = np.full(n, -np.inf)
    for start in range(0, len(candidates), _CHUNK):
        block = candidates[start:start + _CHUNK]
        vals = np.empty((len(block), n))
        for r, line in enumerate(block):
            vals[r] = eval_candidate(line, data)
        sigmas = np.where(vals > y[None, :], 1, -1).astype(np.int8)
        stats = t_naught_batch(sigmas)
        acc = stats <= kappa
        if acc.any():
            upper = np.maximum(upper, vals[acc].max(axis=0))
    return upper


def feasibility_check(data: SortedDataset, U, kappa: float) -> bool:
    """True iff the roof itself passes the sign test from below."""
    U = np.asarray(U, dtype=np.float64)
    sigma = np.where(data.y > U, 1, -1).astype(np.int8)
    return float(t_naught_batch(sigma[None, :])[0]) <= kappa


def _ordered_tangent_rows(data: SortedDataset, U):
    """Tangent parameter rows for the j set, plus the k order for chains.

    k candidates are sorted by right slope descending (steepest first, i.e.
    smallest pair functions first), ties by anchor then index.
    """
    U = np.ascontiguousarray(U, dtype=np.float64)
    j_set = candidate_j_set(data, U).astype(np.int64)
    sl, al, sr, ar = tangent_params_all(data, U, j_set)
    order = np.lexsort((j_set, ar, -sr))
    return j_set, sl, al, sr, ar, order


def lower_exact(data: SortedDataset, U, kappa: float) -> np.ndarray:
    """Pointwise min over accepted tangent pairs below the roof U.

    Each fixed left part walks the right parts along a sign-vector chain
    processed by the incremental scan; chain breaks fall back to a fresh
    scan, so the result matches brute-force enumeration exactly.
    """
    if not feasibility_check(data, U, kappa):
        raise InfeasibleError("empty confidence set at this level")
    U = np.ascontiguousarray(U, dtype=np.float64)
    j_set, sl, al, sr, ar, order = _ordered_tangent_rows(data, U)

    # left rows: -inf sentinel first, then every j; right rows: -inf
    # sentinel (k = n+1) first, then the ordered js
    j_data = np.concatenate(([-1], j_set))
    j_sl = np.concatenate(([0.0], sl))
    j_al = np.concatenate(([0.0], al))
    j_sr = np.concatenate(([0.0], sr))
    j_ar = np.concatenate(([0.0], ar))
    k_data = np.concatenate(([-1], j_set[order]))
    k_sl = np.concatenate(([0.0], sl[order]))
    k_al = np.concatenate(([0.0], al[order]))
    k_sr = np.concatenate(([0.0], sr[order]))
    k_ar = np.concatenate(([0.0], ar[order]))

    thresholds = _k.threshold_table(data.n, kappa)
    lower, n_acc = _k.min_accepted_pairs(
        data.x, data.y, U, j_data, j_sl, j_al, j_sr, j_ar,
        k_data, k_sl, k_al, k_sr, k_ar, kappa, thresholds,
    )
    if n_acc == 0:
        raise InfeasibleError("no tangent pair accepted")
    return lower


def band_exact(data: SortedDataset, alpha: float, kappa: float) -> BandResult:
    """Upper roof, feasibility check, then the lower floor."""
    upper = upper_exact(data, kappa)
    x_min, x_max = finite_range(data, upper)
    if not feasibility_check(data, upper, kappa):
        return BandResult(lower=None, upper=upper, kappa=kappa, alpha=alpha,
                          feasible=False, x_min=x_min, x_max=x_max, mode="exact")
    try:
        lower = lower_exact(data, upper, kappa)
    except InfeasibleError:
        return BandResult(lower=None, upper=upper, kappa=kappa, alpha=alpha,
                          feasible=False, x_min=x_min, x_max=x_max, mode="exact")
    return BandResult(lower=lower, upper=upper, kappa=kappa, alpha=alpha,
                      feasible=True, x_min=x_min, x_max=x_max, mode="exact")
