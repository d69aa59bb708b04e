"""Numba-jitted inner loops for the multiscale sign statistic.

Everything here works on plain numpy arrays; the public API lives in the
sibling modules. The incremental S0/S1 recursion is the workhorse: S0 holds
running window sums of the sign vector, S1 the triangular-weighted sums, and
advancing the scale d costs O(n). The local statistic at scale d satisfies
T[d, j] = beta_d / d * S1[j].
"""

import numpy as np
from numba import njit

NOT_FOUND = -1


def max_scale(n: int) -> int:
    return (n + 1) // 2


def beta_table(n: int) -> np.ndarray:
    """beta_d for d = 1..max_scale(n), stored at index d-1."""
    d = np.arange(1, max_scale(n) + 1, dtype=np.float64)
    return np.sqrt(3.0 * d / (2.0 * d * d + 1.0))


def gamma_table(n: int) -> np.ndarray:
    """Additive penalty at scale d: sqrt(2 log(e n / (2d - 1)))."""
    d = np.arange(1, max_scale(n) + 1, dtype=np.float64)
    u = (2.0 * d - 1.0) / n
    return np.sqrt(2.0 * (1.0 - np.log(u)))


def threshold_table(n: int, kappa: float) -> np.ndarray:
    """Scale-d bound on max S1: sqrt((2d^2+1)d/3) * (penalty_d + kappa)."""
    d = np.arange(1, max_scale(n) + 1, dtype=np.float64)
    return np.sqrt((2.0 * d * d + 1.0) * d / 3.0) * (gamma_table(n) + kappa)


@njit(cache=True)
def _advance_scale(S, S0, S1, d_new):
    """Grow the window radius to d_new - 1 and refresh S1. 0-based indices."""
    n = S.shape[0]
    r = d_new - 1
    for i in range(n):
        acc = S0[i]
        if i + r < n:
            acc += S[i + r]
        if i - r >= 0:
            acc += S[i - r]
        S0[i] = acc
    for i in range(n):
        S1[i] += S0[i]


@njit(cache=True)
def _stat_one(sigma, betas, gammas):
    """T_o of a single sign vector via the scale recursion."""
    n = sigma.shape[0]
    D = (n + 1) // 2
    S = sigma.astype(np.int64)
    S0 = S.copy()
    S1 = S.copy()
    best = -np.inf
    for d in range(1, D + 1):
        if d > 1:
            _advance_scale(S, S0, S1, d)
        m = S1[0]
        for i in range(1, n):
            if S1[i] > m:
                m = S1[i]
        val = betas[d - 1] / d * m - gammas[d - 1]
        if val > best:
            best = val
    return best


@njit(cache=True)
def _stat_two_sided_rademacher(sigma, betas, gammas):
    """max(T_o(sigma), T_o(-sigma)) in one recursion (no zero entries)."""
    n = sigma.shape[0]
    D = (n + 1) // 2
    S = sigma.astype(np.int64)
    S0 = S.copy()
    S1 = S.copy()
    best = -np.inf
    for d in range(1, D + 1):
        if d > 1:
            _advance_scale(S, S0, S1, d)
        hi = S1[0]
        lo = S1[0]
        for i in range(1, n):
            if S1[i] > hi:
                hi = S1[i]
            if S1[i] < lo:
                lo = S1[i]
        c = betas[d - 1] / d
        val = c * hi - gammas[d - 1]
        if val > best:
            best = val
        val = c * (-lo) - gammas[d - 1]
        if val > best:
            best = val
    return best


@njit(cache=True)
def batch_stat(sigmas, betas, gammas):
    """T_o for every row of an (m, n) sign matrix."""
    m = sigmas.shape[0]
    out = np.empty(m, dtype=np.float64)
    for r in range(m):
        out[r] = _stat_one(sigmas[r], betas, gammas)
    return out


@njit(cache=True)
def batch_two_sided_rademacher(sigmas, betas, gammas):
    m = sigmas.shape[0]
    out = np.empty(m, dtype=np.float64)
    for r in range(m):
        out[r] = _stat_two_sided_rademacher(sigmas[r], betas, gammas)
    return out


@njit(cache=True)
def scan_flips(sigma0, flips, kappa, thresholds):
    """First position ell in the flip chain with T_o(sigma^(ell)) <= kappa.

    sigma0 is the initial {-1,+1} vector, flips the 0-based indices turned
    from +1 to -1, one per chain step. Returns (ell_star, steps) with
    ell_star == NOT_FOUND when even the final vector is above kappa.
    """
    n = sigma0.shape[0]
    q = flips.shape[0]
    D = (n + 1) // 2
    S = sigma0.astype(np.int64)
    S0 = S.copy()
    S1 = S.copy()
    d = 1
    ell = 0
    steps = 0
    while True:
        steps += 1
        m = S1[0]
        for i in range(1, n):
            if S1[i] > m:
                m = S1[i]
        if m <= thresholds[d - 1]:
            if d < D:
                d += 1
                _advance_scale(S, S0, S1, d)
            else:
                return ell, steps
        else:
            if ell < q:
                w = flips[ell]
                ell += 1
                S[w] = -1
                lo = w - d + 1
                if lo < 0:
                    lo = 0
                hi = w + d - 1
                if hi > n - 1:
                    hi = n - 1
                for i in range(lo, hi + 1):
                    S0[i] -= 2
                    S1[i] -= 2 * (d - abs(i - w))
            else:
                return NOT_FOUND, steps


@njit(cache=True)
def scan_rows(rows, kappa, thresholds):
    """First row of a componentwise-nonincreasing (K, n) sign matrix whose
    statistic is <= kappa, found with one incremental scan.

    Returns NOT_FOUND when even the last row is above kappa.
    """
    K = rows.shape[0]
    n = rows.shape[1]
    D = (n + 1) // 2
    S = rows[0].astype(np.int64)
    S0 = S.copy()
    S1 = S.copy()
    d = 1
    r = 0
    while True:
        m = S1[0]
        for i in range(1, n):
            if S1[i] > m:
                m = S1[i]
        if m <= thresholds[d - 1]:
            if d < D:
                d += 1
                _advance_scale(S, S0, S1, d)
            else:
                return r
        else:
            if r + 1 < K:
                r += 1
                for i in range(n):
                    if rows[r, i] != S[i]:
                        _apply_flip(S, S0, S1, d, i, rows[r, i])
            else:
                return NOT_FOUND


@njit(cache=True)
def _condition_holds(S1, d, thresholds):
    n = S1.shape[0]
    m = S1[0]
    for i in range(1, n):
        if S1[i] > m:
            m = S1[i]
    return m <= thresholds[d - 1]


@njit(cache=True)
def _apply_flip(S, S0, S1, d, w, new_val):
    """Flip component w to new_val (+-1) and patch the running sums."""
    n = S.shape[0]
    delta = new_val - S[w]
    if delta == 0:
        return
    S[w] = new_val
    lo = w - d + 1
    if lo < 0:
        lo = 0
    hi = w + d - 1
    if hi > n - 1:
        hi = n - 1
    for i in range(lo, hi + 1):
        S0[i] += delta
        S1[i] += delta * (d - abs(i - w))


@njit(cache=True)
def min_accepted_pairs(x, y, u, j_data, j_sl, j_al, j_sr, j_ar,
                       k_data, k_sl, k_al, k_sr, k_ar,
                       kappa, thresholds):
    """Pointwise minimum of accepted tangent-pair functions.

    Rows of (j_*) describe the left tangent parts (j_data == -1 encodes the
    identically -inf left part), columns of (k_*) the right parts ordered so
    that the pair values are roughly nondecreasing in k. Acceptance is exact:
    within componentwise-monotone stretches the incremental scan decides, and
    every monotonicity break restarts the scan from scratch.

    Returns (min_vector, n_accepted_pairs).
    """
    n = x.shape[0]
    D = (n + 1) // 2
    nj = j_data.shape[0]
    nk = k_data.shape[0]

    out = np.full(n, np.inf, dtype=np.float64)
    n_acc = 0

    hl = np.empty(n, dtype=np.float64)
    h = np.empty(n, dtype=np.float64)
    sig = np.empty(n, dtype=np.int8)
    prev = np.empty(n, dtype=np.int8)
    S = np.empty(n, dtype=np.int64)
    S0 = np.empty(n, dtype=np.int64)
    S1 = np.empty(n, dtype=np.int64)

    for jj in range(nj):
        _eval_left_tangent(x, y, u, j_data[jj], j_sl[jj], j_al[jj],
                           j_sr[jj], j_ar[jj], hl)
        accepted = False
        have_state = False
        d = 1
        for kk in range(nk):
            _eval_right_tangent(x, y, u, k_data[kk], k_sl[kk], k_al[kk],
                                k_sr[kk], k_ar[kk], h)
            for i in range(n):
                if hl[i] > h[i]:
                    h[i] = hl[i]
                sig[i] = 1 if y[i] > h[i] else -1

            if have_state:
                monotone = True
                for i in range(n):
                    if sig[i] > prev[i]:
                        monotone = False
                        break
            else:
                monotone = False

            if monotone:
                if accepted:
                    # smaller sign vector, statistic can only drop
                    pass
                else:
                    for i in range(n):
                        if sig[i] != prev[i]:
                            _apply_flip(S, S0, S1, d, i, sig[i])
                    accepted, d = _resume_scan(S, S0, S1, d, D, thresholds)
            else:
                for i in range(n):
                    S[i] = sig[i]
                    S0[i] = sig[i]
                    S1[i] = sig[i]
                d = 1
                accepted, d = _resume_scan(S, S0, S1, d, D, thresholds)
                have_state = True

            for i in range(n):
                prev[i] = sig[i]

            if accepted:
                n_acc += 1
                for i in range(n):
                    if h[i] < out[i]:
                        out[i] = h[i]
    return out, n_acc


@njit(cache=True)
def min_accepted_grouped(x, y, u, W, V, k_data, k_sl, k_al, k_sr, k_ar,
                         kappa, thresholds):
    """Pointwise minimum over grouped left parts and all right parts.

    Row t of W is a pointwise upper envelope of a block of left tangent
    functions (used for the acceptance test) and row t of V the matching
    lower envelope (used for the reported value). A pair accepted for any
    block member is then accepted for the block, and the block value is no
    larger, so the result is a lower bound for the exact floor; with
    singleton blocks both envelopes coincide and the bound is exact.

    Returns (min_vector, n_accepted).
    """
    n = x.shape[0]
    D = (n + 1) // 2
    m = W.shape[0]
    nk = k_data.shape[0]

    out = np.full(n, np.inf, dtype=np.float64)
    n_acc = 0

    h = np.empty(n, dtype=np.float64)
    sig = np.empty(n, dtype=np.int8)
    prev = np.empty(n, dtype=np.int8)
    S = np.empty(n, dtype=np.int64)
    S0 = np.empty(n, dtype=np.int64)
    S1 = np.empty(n, dtype=np.int64)

    for t in range(m):
        accepted = False
        have_state = False
        d = 1
        for kk in range(nk):
            _eval_right_tangent(x, y, u, k_data[kk], k_sl[kk], k_al[kk],
                                k_sr[kk], k_ar[kk], h)
            for i in range(n):
                test = h[i] if h[i] > W[t, i] else W[t, i]
                sig[i] = 1 if y[i] > test else -1

            if have_state:
                monotone = True
                for i in range(n):
                    if sig[i] > prev[i]:
                        monotone = False
                        break
            else:
                monotone = False

            if monotone:
                if not accepted:
                    for i in range(n):
                        if sig[i] != prev[i]:
                            _apply_flip(S, S0, S1, d, i, sig[i])
                    accepted, d = _resume_scan(S, S0, S1, d, D, thresholds)
            else:
                for i in range(n):
                    S[i] = sig[i]
                    S0[i] = sig[i]
                    S1[i] = sig[i]
                d = 1
                accepted, d = _resume_scan(S, S0, S1, d, D, thresholds)
                have_state = True

            for i in range(n):
                prev[i] = sig[i]

            if accepted:
                n_acc += 1
                for i in range(n):
                    val = h[i] if h[i] > V[t, i] else V[t, i]
                    if val < out[i]:
                        out[i] = val
    return out, n_acc


@njit(cache=True)
def _resume_scan(S, S0, S1, d, D, thresholds):
    """Advance scales from d while condition (6) holds; no flips available.

    Returns (accepted, d): accepted means the condition held through the top
    scale; otherwise d marks the scale at which it failed.
    """
    while True:
        if _condition_holds(S1, d, thresholds):
            if d < D:
                d += 1
                _advance_scale(S, S0, S1, d)
            else:
                return True, d
        else:
            return False, d


@njit(cache=True)
def _eval_left_tangent(x, y, u, jd, sl, al, sr, ar, out):
    """Values of the left tangent function h_j^l at the design points."""
    n = x.shape[0]
    if jd < 0:
        for i in range(n):
            out[i] = -np.inf
        return
    xj = x[jd]
    yj = y[jd]
    for i in range(n):
        if x[i] < al:
            out[i] = u[i]
        elif sl == -np.inf:
            out[i] = yj if x[i] == xj else -np.inf
        elif sl == np.inf:
            out[i] = yj if x[i] == xj else np.inf
        else:
            out[i] = yj + sl * (x[i] - xj)


@njit(cache=True)
def _eval_right_tangent(x, y, u, kd, sl, al, sr, ar, out):
    """Values of the right tangent function h_k^r at the design points."""
    n = x.shape[0]
    if kd < 0:
        for i in range(n):
            out[i] = -np.inf
        return
    xk = x[kd]
    yk = y[kd]
    for i in range(n):
        if x[i] > ar:
            out[i] = u[i]
        elif sr == np.inf:
            out[i] = yk if x[i] == xk else -np.inf
        elif sr == -np.inf:
            out[i] = yk if x[i] == xk else np.inf
        else:
            out[i] = yk + sr * (x[i] - xk)


@njit(cache=True)
def tangent_param_arrays(x, y, u, j_idx):
    """(s_l, a_l, s_r, a_r) for every index in j_idx, given the roof u.

    x_min/x_max are the extreme abscissae where u is finite. Argmax ties on
    the left keep the largest x_i, argmin ties on the right the smallest x_k.
    """
    m = j_idx.shape[0]
    n = x.shape[0]
    sl = np.empty(m, dtype=np.float64)
    al = np.empty(m, dtype=np.float64)
    sr = np.empty(m, dtype=np.float64)
    ar = np.empty(m, dtype=np.float64)

    x_min = np.inf
    x_max = -np.inf
    for i in range(n):
        if np.isfinite(u[i]):
            if x[i] < x_min:
                x_min = x[i]
            if x[i] > x_max:
                x_max = x[i]

    for t in range(m):
        j = j_idx[t]
        xj = x[j]
        yj = y[j]
        if xj <= x_min:
            sl[t] = -np.inf
            al[t] = xj
        else:
            best = -np.inf
            arg = xj
            for i in range(n):
                if x[i] >= xj:
                    break
                if u[i] == np.inf:
                    continue
                if u[i] == -np.inf:
                    s = np.inf
                else:
                    s = (yj - u[i]) / (xj - x[i])
                if s >= best:
                    best = s
                    arg = x[i]
            if best == -np.inf:
                arg = xj
            sl[t] = best
            al[t] = arg
        if xj >= x_max:
            sr[t] = np.inf
            ar[t] = xj
        else:
            best = np.inf
            arg = xj
            for k in range(n - 1, -1, -1):
                if x[k] <= xj:
                    break
                if u[k] == np.inf:
                    continue
                if u[k] == -np.inf:
                    s = -np.inf
                else:
                    s = (u[k] - yj) / (x[k] - xj)
                if s <= best:
                    best = s
                    arg = x[k]
            if best == np.inf:
                arg = xj
            sr[t] = best
            ar[t] = arg
    return sl, al, sr, ar
