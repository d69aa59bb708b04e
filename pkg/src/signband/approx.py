"""Fast approximation of the band via a finite grid of slopes.

The upper roof is bracketed between U_* (max over accepted straight lines
at the grid slopes, optionally convex-hull augmented) and U^* (adding least
concave majorants of the per-slope constraint sets). The lower floor is
bracketed between a relaxed-acceptance bound L_* and a subset-of-indices
bound L^*. The pair (L_*, U^*) is conservative: it always contains the
exact band.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as _k
from .exact import BandResult, InfeasibleError, feasibility_check, finite_range
from .geometry import (
    CandidateLine,
    SortedDataset,
    candidate_j_set,
    eval_candidate,
    greatest_convex_minorant,
    least_concave_majorant,
)

__all__ = [
    "SlopeGrid",
    "ApproxBand",
    "default_slope_grid",
    "default_j_subset",
    "step1_left_degenerate",
    "step2_max_intercept",
    "step3_right_degenerate",
    "approx_upper",
    "approx_lower",
    "band_approx",
]


@dataclass(frozen=True)
class SlopeGrid:
    """Strictly increasing interior slopes s_1 < ... < s_{M-1}."""

    slopes: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.slopes, dtype=np.float64)
        if s.size and (not np.isfinite(s).all() or np.any(np.diff(s) <= 0)):
            raise ValueError("slopes must be finite and strictly increasing")
        object.__setattr__(self, "slopes", s)

    @property
    def m(self):
        """Segment count M (interior slope count + 1)."""
        return self.slopes.size + 1


@dataclass
class ApproxBand:
    u_lower: np.ndarray
    u_upper: np.ndarray
    l_lower: np.ndarray | None
    l_upper: np.ndarray | None
    grid: SlopeGrid
    j_subset: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))


def default_slope_grid(data: SortedDataset, m: int, seed: int = 0,
                       n_pairs: int = 20000) -> SlopeGrid:
    """Empirical quantile grid of chord slopes over well-separated pairs.

    Pairs closer than a tenth of the design span are skipped; the slope
    sample is symmetrized before taking the m-quantiles.
    """
    if m < 1:
        raise ValueError("segment count must be >= 1")
    if m == 1 or data.n < 2:
        return SlopeGrid(np.empty(0))
    x, y = data.x, data.y
    span = x[-1] - x[0]
    if span <= 0:
        return SlopeGrid(np.empty(0))
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1,)))
    jj = rng.integers(0, data.n, size=n_pairs)
    kk = rng.integers(0, data.n, size=n_pairs)
    lo = np.minimum(jj, kk)
    hi = np.maximum(jj, kk)
    keep = (x[hi] - x[lo]) >= span / 10.0
    if not keep.any():
        keep = x[hi] > x[lo]
        if not keep.any():
            return SlopeGrid(np.empty(0))
    slopes = (y[hi[keep]] - y[lo[keep]]) / (x[hi[keep]] - x[lo[keep]])
    pooled = np.unique(np.concatenate([slopes, -slopes]))
    levels = np.arange(1, m) / m
    grid = np.unique(np.quantile(pooled, levels))
    return SlopeGrid(grid)


def default_j_subset(data: SortedDataset, U) -> np.ndarray:
    """Every max(1, floor(n/100))-th candidate index plus both extremes."""
    j_set = candidate_j_set(data, U)
    if j_set.size == 0:
        return j_set
    step = max(1, data.n // 100)
    picked = set(j_set[::step].tolist())
    picked.add(int(j_set[0]))
    picked.add(int(j_set[-1]))
    return np.asarray(sorted(picked), dtype=np.int64)


def _degenerate_sigma_rows(data: SortedDataset, order, left: bool):
    """Sign rows of degenerate candidates along a descending-value chain."""
    x, y = data.x, data.y
    rows = np.empty((order.size, data.n), dtype=np.int8)
    for r, idx in enumerate(order):
        xi, yi = x[idx], y[idx]
        if left:
            sig = np.where(x < xi, 1, np.where(x > xi, -1, np.where(yi > y, 1, -1)))
        else:
            sig = np.where(x > xi, 1, np.where(x < xi, -1, np.where(yi > y, 1, -1)))
        rows[r] = sig
    return rows


def step1_left_degenerate(data: SortedDataset, kappa: float):
    """Largest accepted left hockey stick and the abscissa where the roof
    starts being finite. (None, None) when nothing is accepted."""
    # ascending candidate value order is (x, y) lexicographic; scan descends
    order_desc = np.lexsort((data.y, data.x))[::-1]
    rows = _degenerate_sigma_rows(data, order_desc, left=True)
    thresholds = _k.threshold_table(data.n, kappa)
    r = _k.scan_rows(rows, kappa, thresholds)
    if r == _k.NOT_FOUND:
        return None, None
    idx = int(order_desc[r])
    return CandidateLine.left_degenerate(idx), float(data.x[idx])


def step3_right_degenerate(data: SortedDataset, kappa: float):
    """Mirror of step 1 for the right hockey sticks; yields x_max."""
    order_desc = np.lexsort((data.y, -data.x))[::-1]
    rows = _degenerate_sigma_rows(data, order_desc, left=False)
    thresholds = _k.threshold_table(data.n, kappa)
    r = _k.scan_rows(rows, kappa, thresholds)
    if r == _k.NOT_FOUND:
        return None, None
    idx = int(order_desc[r])
    return CandidateLine.right_degenerate(idx), float(data.x[idx])


def step2_max_intercept(data: SortedDataset, kappa: float, s: float) -> float:
    """Largest intercept a such that the line a + s*x is still accepted.

    +inf when every intercept is accepted, -inf when none is. Equals the
    ell*-th largest residual y_i - s*x_i, where ell* comes from a single
    scan over the flip chain in decreasing residual order.
    """
    resid = data.y - s * data.x
    order = np.lexsort((np.arange(data.n), -resid))  # descending, stable
    sigma0 = np.ones(data.n, dtype=np.int8)
    thresholds = _k.threshold_table(data.n, kappa)
    ell, _ = _k.scan_flips(sigma0, order.astype(np.int64), kappa, thresholds)
    if ell == _k.NOT_FOUND:
        return -np.inf
    if ell == 0:
        return np.inf
    return float(resid[order[ell - 1]])


def _augmented(data: SortedDataset, g_vals: np.ndarray) -> np.ndarray:
    """max of an accepted line and its convex-hull augmentation."""
    mask = g_vals <= data.y
    if not mask.any():
        return g_vals
    return np.maximum(g_vals, greatest_convex_minorant(data, mask))


def approx_upper(data: SortedDataset, kappa: float, grid: SlopeGrid,
                 augment: bool = True):
    """(U_*, U^*, x_min, x_max): bracketing envelopes for the exact roof."""
    n = data.n
    g0_line, x_min = step1_left_degenerate(data, kappa)
    gm_line, x_max = step3_right_degenerate(data, kappa)

    g_vals = []
    if g0_line is not None:
        g_vals.append(eval_candidate(g0_line, data))
    else:
        g_vals.append(np.full(n, -np.inf))
    for s in grid.slopes:
        a = step2_max_intercept(data, kappa, float(s))
        if np.isneginf(a):
            g_vals.append(np.full(n, -np.inf))
        else:
            # pin points whose residual ties the intercept exactly, so
            # rounding cannot push the line above its defining point
            resid = data.y - s * data.x
            g_vals.append(np.where(resid == a, data.y, a + s * data.x))
    if gm_line is not None:
        g_vals.append(eval_candidate(gm_line, data))
    else:
        g_vals.append(np.full(n, -np.inf))

    u_lower = np.full(n, -np.inf)
    for vals in g_vals:
        if augment and not np.isneginf(vals).all():
            u_lower = np.maximum(u_lower, _augmented(data, vals))
        else:
            u_lower = np.maximum(u_lower, vals)

    u_upper = u_lower.copy()
    for prev, cur in zip(g_vals[:-1], g_vals[1:]):
        mask = np.maximum(prev, cur) >= data.y
        if mask.any():
            u_upper = np.maximum(u_upper, least_concave_majorant(data, mask))

    if x_min is None:
        x_min, x_max = finite_range(data, u_upper)
        x_min = x_min if np.isfinite(x_min) else None
        x_max = x_max if np.isfinite(x_max) else None
    return u_lower, u_upper, x_min, x_max


def approx_lower(data: SortedDataset, U, kappa: float, j_subset=None):
    """(L_*, L^*): bracketing envelopes for the exact floor under roof U."""
    if not feasibility_check(data, U, kappa):
        raise InfeasibleError("empty confidence set at this level")
    U = np.ascontiguousarray(U, dtype=np.float64)
    from .exact import _ordered_tangent_rows

    j_set, sl, al, sr, ar, order = _ordered_tangent_rows(data, U)
    if j_subset is None:
        j_subset = default_j_subset(data, U)
    j_subset = np.asarray(j_subset, dtype=np.int64)

    # L^*: per-j exact minimum over all k, j restricted to the subset; the
    # -1 sentinels are the identically -inf left part and k = n+1
    thresholds = _k.threshold_table(data.n, kappa)
    if j_subset.size == 0:
        l_upper = np.full(data.n, np.inf)
        n_acc = 1  # vacuous min over the empty subset, not infeasibility
    else:
        pos = {int(j): t for t, j in enumerate(j_set)}
        sub = np.asarray([pos[int(j)] for j in j_subset], dtype=np.int64)
        j_data = np.concatenate(([-1], j_set[sub]))
        j_par = [np.concatenate(([0.0], arr[sub])) for arr in (sl, al, sr, ar)]
        k_data = np.concatenate(([-1], j_set[order]))
        k_par = [np.concatenate(([0.0], arr[order])) for arr in (sl, al, sr, ar)]
        l_upper, n_acc = _k.min_accepted_pairs(
            data.x, data.y, U, j_data, *j_par, k_data, *k_par, kappa, thresholds
        )

    # L_*: block the left parts and replace each block by its pointwise
    # max (acceptance test) and min (reported value). Every accepted exact
    # pair dominates an accepted block pair of no larger value, so the
    # result bounds the exact floor from below; singleton blocks are exact.
    n = data.n
    nj = j_set.size
    step = max(1, -(-nj // 800))
    # block in left-slope order so grouped tangent lines stay close
    by_slope = np.lexsort((j_set, sl))
    blocks = [by_slope[b:b + step] for b in range(0, nj, step)]
    W = np.full((len(blocks) + 1, n), -np.inf)
    V = np.full((len(blocks) + 1, n), np.inf)
    V[0] = -np.inf  # sentinel block: the identically -inf left part
    buf = np.empty(n)
    for t, block in enumerate(blocks, start=1):
        for r in block:
            _k._eval_left_tangent(data.x, data.y, U, j_set[r], sl[r], al[r],
                                  sr[r], ar[r], buf)
            np.maximum(W[t], buf, out=W[t])
            np.minimum(V[t], buf, out=V[t])
    k_data = np.concatenate(([-1], j_set[order]))
    k_par = [np.concatenate(([0.0], arr[order])) for arr in (sl, al, sr, ar)]
    l_lower, _ = _k.min_accepted_grouped(
        data.x, data.y, U, W, V, k_data, *k_par, kappa, thresholds
    )
    if n_acc == 0:
        l_upper = np.full(n, np.inf)
    return l_lower, l_upper


def band_approx(data: SortedDataset, alpha: float, kappa: float,
                grid: SlopeGrid | None = None, m: int = 100,
                j_subset=None, seed: int = 0):
    """Conservative band (L_*, U^*) plus the full bracketing detail."""
    if grid is None:
        grid = default_slope_grid(data, m, seed=seed)
    u_lower, u_upper, x_min, x_max = approx_upper(data, kappa, grid)
    xm = x_min if x_min is not None else np.inf
    xM = x_max if x_max is not None else -np.inf
    detail = ApproxBand(u_lower=u_lower, u_upper=u_upper, l_lower=None,
                        l_upper=None, grid=grid)
    if not feasibility_check(data, u_upper, kappa):
        result = BandResult(lower=None, upper=u_upper, kappa=kappa, alpha=alpha,
                            feasible=False, x_min=xm, x_max=xM, mode="approximate")
        return result, detail
    try:
        l_lower, l_upper = approx_lower(data, u_upper, kappa, j_subset=j_subset)
    except InfeasibleError:
        result = BandResult(lower=None, upper=u_upper, kappa=kappa, alpha=alpha,
                            feasible=False, x_min=xm, x_max=xM, mode="approximate")
        return result, detail
    detail.l_lower = l_lower
    detail.l_upper = l_upper
    if j_subset is not None:
        detail.j_subset = np.asarray(j_subset, dtype=np.int64)
    result = BandResult(lower=l_lower, upper=u_upper, kappa=kappa, alpha=alpha,
                        feasible=True, x_min=xm, x_max=xM, mode="approximate")
    return result, detail
