"""Extended-real geometry of candidate functions.

Candidate lines are chords between data points plus degenerate "hockey
sticks" that are +-infinity away from a single abscissa. Envelope helpers
(greatest convex minorant / least concave majorant) work on subsets of the
design points and report values at every design point; outside the abscissa
range of the selected points both envelopes are -inf by the empty-constraint
convention. Tangent parameters and pair functions realize the class used by
the lower band boundary.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels as _k

__all__ = [
    "SortedDataset",
    "CandidateLine",
    "TangentParams",
    "eval_candidate",
    "enumerate_candidates",
    "greatest_convex_minorant",
    "least_concave_majorant",
    "tangent_params",
    "eval_tangent_pair",
    "eval_left_tangent",
    "eval_right_tangent",
]


@dataclass(frozen=True)
class SortedDataset:
    """Fixed design x_1 <= ... <= x_n with responses y."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.ascontiguousarray(self.x, dtype=np.float64)
        y = np.ascontiguousarray(self.y, dtype=np.float64)
        if x.ndim != 1 or x.shape != y.shape:
            raise ValueError("x and y must be 1-d arrays of equal length")
        if x.size < 1:
            raise ValueError("dataset must contain at least one point")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise ValueError("x and y must be finite")
        if np.any(np.diff(x) < 0):
            raise ValueError("x must be sorted nondecreasing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self):
        return self.x.size

    @classmethod
    def from_unsorted(cls, x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        order = np.argsort(x, kind="stable")
        return cls(x[order], y[order])


CHORD = "chord"
LEFT_DEGENERATE = "left_degenerate"
RIGHT_DEGENERATE = "right_degenerate"


@dataclass(frozen=True)
class CandidateLine:
    """A chord chord(j, k) with x_j < x_k, or a one-point hockey stick.

    Indices are 0-based positions in the dataset. left_degenerate(k) is
    +inf left of x_k, y_k at x_k and -inf right of it; right_degenerate(j)
    is the mirror image.
    """

    kind: str
    j: int = -1
    k: int = -1

    @classmethod
    def chord(cls, j, k):
        return cls(CHORD, j=j, k=k)

    @classmethod
    def left_degenerate(cls, k):
        return cls(LEFT_DEGENERATE, k=k)

    @classmethod
    def right_degenerate(cls, j):
        return cls(RIGHT_DEGENERATE, j=j)


def eval_candidate(line: CandidateLine, data: SortedDataset, i=None) -> np.ndarray:
    """Values of a candidate at design point i, or at all points if i=None."""
    x, y = data.x, data.y
    xs = x if i is None else np.asarray([x[i]])
    if line.kind == CHORD:
        xj, xk = x[line.j], x[line.k]
        if xj == xk:
            raise ValueError("chord endpoints must have distinct abscissae")
        slope = (y[line.k] - y[line.j]) / (xk - xj)
        out = y[line.j] + slope * (xs - xj)
        # pin the defining points so rounding cannot flip their signs
        out = np.where(xs == xj, y[line.j], np.where(xs == xk, y[line.k], out))
    elif line.kind == LEFT_DEGENERATE:
        xk = x[line.k]
        out = np.where(xs < xk, np.inf, np.where(xs == xk, y[line.k], -np.inf))
    elif line.kind == RIGHT_DEGENERATE:
        xj = x[line.j]
        out = np.where(xs > xj, np.inf, np.where(xs == xj, y[line.j], -np.inf))
    else:
        raise ValueError(f"unknown candidate kind {line.kind!r}")
    return out if i is None else float(out[0])


def enumerate_candidates(data: SortedDataset):
    """All chords with strictly increasing abscissae plus all hockey sticks.

    Deterministic order: left degenerates, right degenerates, then chords by
    (j, k).
    """
    n = data.n
    out = [CandidateLine.left_degenerate(k) for k in range(n)]
    out += [CandidateLine.right_degenerate(j) for j in range(n)]
    x = data.x
    for j in range(n - 1):
        for k in range(j + 1, n):
            if x[j] < x[k]:
                out.append(CandidateLine.chord(j, k))
    return out


def _lower_hull(px, py):
    """Vertices of the lower convex hull of points sorted by x (distinct x)."""
    hx, hy = [], []
    for xx, yy in zip(px, py):
        while len(hx) >= 2:
            cross = (hx[-1] - hx[-2]) * (yy - hy[-2]) - (hy[-1] - hy[-2]) * (xx - hx[-2])
            if cross <= 0.0:
                hx.pop()
                hy.pop()
            else:
                break
        hx.append(xx)
        hy.append(yy)
    return np.asarray(hx), np.asarray(hy)


def greatest_convex_minorant(data: SortedDataset, selected) -> np.ndarray:
    """Largest convex function lying <= y on the selected points.

    Returns its values at all design points; -inf outside the abscissa range
    of the selection. selected is a boolean mask or an index array.
    """
    mask = _as_mask(selected, data.n)
    if not mask.any():
        return np.full(data.n, -np.inf)
    px = data.x[mask]
    py = data.y[mask]
    # at a repeated abscissa only the smallest response binds
    ux, inv = np.unique(px, return_inverse=True)
    uy = np.full(ux.size, np.inf)
    np.minimum.at(uy, inv, py)
    hx, hy = _lower_hull(ux, uy)
    out = np.full(data.n, -np.inf)
    inside = (data.x >= hx[0]) & (data.x <= hx[-1])
    out[inside] = np.interp(data.x[inside], hx, hy)
    return out


def least_concave_majorant(data: SortedDataset, selected) -> np.ndarray:
    """Smallest concave function lying >= y on the selected points.

    Mirror of the minorant; also -inf outside the selected abscissa range
    (a concave function may drop off arbitrarily there).
    """
    mask = _as_mask(selected, data.n)
    if not mask.any():
        return np.full(data.n, -np.inf)
    neg = SortedDataset(data.x, -data.y)
    vals = greatest_convex_minorant(neg, mask)
    out = np.where(np.isfinite(vals), -vals, -np.inf)
    return out


def _as_mask(selected, n):
    selected = np.asarray(selected)
    if selected.dtype == bool:
        if selected.size != n:
            raise ValueError("boolean mask length mismatch")
        return selected
    mask = np.zeros(n, dtype=bool)
    mask[selected] = True
    return mask


@dataclass(frozen=True)
class TangentParams:
    """Left/right tangent slope and anchor abscissa for one index j."""

    j: int
    s_l: float
    a_l: float
    s_r: float
    a_r: float


def candidate_j_set(data: SortedDataset, U: np.ndarray) -> np.ndarray:
    """Indices j with U_j >= y_j (+inf counts); the roof touches or clears y."""
    return np.flatnonzero(np.asarray(U) >= data.y)


def tangent_params(data: SortedDataset, U, j: int) -> TangentParams:
    """Tangent parameters of index j below the roof U.

    Left slope is the steepest chord from (x_j, y_j) back to the roof, right
    slope the flattest chord forward; anchors break ties toward the longest
    coincidence with the roof.
    """
    U = np.asarray(U, dtype=np.float64)
    if not U[j] >= data.y[j]:
        raise ValueError(f"index {j} is not below the roof (U_j < y_j)")
    sl, al, sr, ar = _k.tangent_param_arrays(
        data.x, data.y, U, np.asarray([j], dtype=np.int64)
    )
    return TangentParams(j=j, s_l=float(sl[0]), a_l=float(al[0]),
                         s_r=float(sr[0]), a_r=float(ar[0]))


def tangent_params_all(data: SortedDataset, U, j_idx) -> tuple:
    """Vectorized tangent parameters for many indices at once."""
    U = np.ascontiguousarray(U, dtype=np.float64)
    j_idx = np.ascontiguousarray(j_idx, dtype=np.int64)
    return _k.tangent_param_arrays(data.x, data.y, U, j_idx)


def eval_left_tangent(data: SortedDataset, U, params: TangentParams) -> np.ndarray:
    """h_j^l at all design points: the roof left of the anchor, then the tangent."""
    U = np.ascontiguousarray(U, dtype=np.float64)
    out = np.empty(data.n)
    _k._eval_left_tangent(data.x, data.y, U, params.j, params.s_l, params.a_l,
                          params.s_r, params.a_r, out)
    return out


def eval_right_tangent(data: SortedDataset, U, params: TangentParams) -> np.ndarray:
    """h_k^r at all design points: the tangent up to the anchor, then the roof."""
    U = np.ascontiguousarray(U, dtype=np.float64)
    out = np.empty(data.n)
    _k._eval_right_tangent(data.x, data.y, U, params.j, params.s_l, params.a_l,
                           params.s_r, params.a_r, out)
    return out


def eval_tangent_pair(data: SortedDataset, U, left: TangentParams | None,
                      right: TangentParams | None, i=None):
    """max(h_j^l, h_k^r) with None encoding the identically -inf ends."""
    if left is None and right is None:
        vals = np.full(data.n, -np.inf)
    elif left is None:
        vals = eval_right_tangent(data, U, right)
    elif right is None:
        vals = eval_left_tangent(data, U, left)
    else:
        vals = np.maximum(eval_left_tangent(data, U, left),
                          eval_right_tangent(data, U, right))
    return vals if i is None else float(vals[i])
