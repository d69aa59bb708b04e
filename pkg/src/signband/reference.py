"""Slow, direct-formula implementations used as independent oracles.

Everything here evaluates the defining formulas head-on with no incremental
tricks, so the optimized paths can be validated against it exactly. Only
suitable for small n.
"""

import math

import numpy as np

from .core import max_scale
from .geometry import (
    SortedDataset,
    candidate_j_set,
    enumerate_candidates,
    eval_candidate,
    eval_tangent_pair,
    tangent_params,
)

__all__ = [
    "t_naught_direct",
    "t_naught_direct_np",
    "t_two_sided_direct",
    "upper_bruteforce",
    "lower_bruteforce",
]


def t_naught_direct(sigma) -> float:
    """t_naught by direct summation over every scale and location."""
    sigma = np.asarray(sigma, dtype=np.float64)
    n = sigma.size
    best = -math.inf
    for d in range(1, max_scale(n) + 1):
        beta = sum((1.0 - abs(i) / d) ** 2 for i in range(1 - d, d)) ** -0.5
        gamma = math.sqrt(2.0 * math.log(math.e * n / (2 * d - 1)))
        local_max = -math.inf
        for j in range(1, n + 1):
            s = 0.0
            for i in range(1, n + 1):
                w = max(1.0 - abs(i - j) / d, 0.0)
                s += w * sigma[i - 1]
            local_max = max(local_max, beta * s)
        best = max(best, local_max - gamma)
    return best


def t_naught_direct_np(sigma) -> float:
    """Same direct evaluation, with the location loop as a convolution."""
    sigma = np.asarray(sigma, dtype=np.float64)
    n = sigma.size
    best = -math.inf
    for d in range(1, max_scale(n) + 1):
        w = 1.0 - np.abs(np.arange(1 - d, d)) / d
        beta = float(np.sum(w * w)) ** -0.5
        gamma = math.sqrt(2.0 * math.log(math.e * n / (2 * d - 1)))
        local = np.convolve(sigma, w, mode="same") if d > 1 else sigma
        best = max(best, beta * float(local.max()) - gamma)
    return best


def t_two_sided_direct(v) -> float:
    v = np.asarray(v, dtype=np.float64)
    sp = np.where(v > 0, 1.0, -1.0)
    sm = np.where(-v > 0, 1.0, -1.0)
    return max(t_naught_direct(sp), t_naught_direct(sm))


def upper_bruteforce(data: SortedDataset, kappa: float) -> np.ndarray:
    """Pointwise max over every accepted candidate line, by direct evaluation."""
    upper = np.full(data.n, -np.inf)
    for line in enumerate_candidates(data):
        g = eval_candidate(line, data)
        sigma = np.where(g > data.y, 1.0, -1.0)
        if t_naught_direct_np(sigma) <= kappa:
            upper = np.maximum(upper, g)
    return upper


def lower_bruteforce(data: SortedDataset, U, kappa: float) -> np.ndarray:
    """Pointwise min over every accepted tangent pair, by direct evaluation."""
    U = np.asarray(U, dtype=np.float64)
    j_set = candidate_j_set(data, U)
    params = {j: tangent_params(data, U, j) for j in j_set}
    lefts = [None] + [params[j] for j in j_set]
    rights = [params[k] for k in j_set] + [None]
    lower = np.full(data.n, np.inf)
    for left in lefts:
        for right in rights:
            h = eval_tangent_pair(data, U, left, right)
            sigma = np.where(data.y > h, 1.0, -1.0)
            if t_naught_direct_np(sigma) <= kappa:
                lower = np.minimum(lower, h)
    return lower
