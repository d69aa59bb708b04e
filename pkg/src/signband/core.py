"""Multiscale sign-test statistic and its ingredients.

The statistic scans a {-1,+1} vector over all scales d and locations j,
weighting nearby entries with a triangular kernel and penalizing each scale
so that no single scale dominates. All functions are pure.
"""

import math

import numpy as np

from . import _kernels as _k

__all__ = [
    "underline_sign",
    "sign_vector",
    "kernel_psi",
    "beta_coeff",
    "gamma_penalty",
    "local_stat",
    "t_naught",
    "t_two_sided",
    "max_scale",
]


def max_scale(n: int) -> int:
    """Largest scale considered for a sample of size n: floor((n+1)/2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (n + 1) // 2


def underline_sign(v: float) -> int:
    """Asymmetric sign: +1 for v > 0, -1 for v <= 0 (zero counts as -1)."""
    if math.isnan(v):
        raise ValueError("sign of NaN is undefined")
    return 1 if v > 0 else -1


def sign_vector(v) -> np.ndarray:
    """Componentwise asymmetric sign of an extended-real vector, as int8."""
    v = np.asarray(v, dtype=np.float64)
    if np.isnan(v).any():
        raise ValueError("sign of NaN is undefined")
    return np.where(v > 0, 1, -1).astype(np.int8)


def kernel_psi(x: float) -> float:
    """Triangular kernel max(1 - |x|, 0)."""
    return max(1.0 - abs(x), 0.0)


def beta_coeff(d: int) -> float:
    """Normalizer for scale d, equal to (sum of squared kernel weights)^(-1/2).

    Closed form sqrt(3d / (2d^2 + 1)); the weight identity is checked in the
    test suite by direct summation.
    """
    if d < 1:
        raise ValueError("scale d must be >= 1")
    return math.sqrt(3.0 * d / (2.0 * d * d + 1.0))


def gamma_penalty(u: float) -> float:
    """Scale penalty sqrt(2 log(e/u)) for u in (0, 1]."""
    if not 0.0 < u <= 1.0:
        raise ValueError("penalty argument must lie in (0, 1]")
    return math.sqrt(2.0 * (1.0 - math.log(u)))


def _check_sigma(sigma) -> np.ndarray:
    sigma = np.asarray(sigma)
    if sigma.ndim != 1 or sigma.size < 1:
        raise ValueError("sign vector must be 1-d and nonempty")
    if not np.isin(sigma, (-1, 1)).all():
        raise ValueError("sign vector entries must be -1 or +1")
    return sigma.astype(np.int8)


def local_stat(sigma, d: int, j: int) -> float:
    """Weighted local sign sum beta_d * sum_i psi((i-j)/d) * sigma_i.

    j is 1-based, matching the location convention used throughout.
    """
    sigma = _check_sigma(sigma)
    n = sigma.size
    if not 1 <= d <= max_scale(n):
        raise ValueError(f"scale d={d} out of range for n={n}")
    if not 1 <= j <= n:
        raise ValueError(f"location j={j} out of range for n={n}")
    lo = max(1, j - d + 1)
    hi = min(n, j + d - 1)
    i = np.arange(lo, hi + 1)
    w = 1.0 - np.abs(i - j) / d
    return beta_coeff(d) * float(w @ sigma[lo - 1:hi])


def t_naught(sigma) -> float:
    """max over scales d and locations j of local_stat minus the penalty."""
    sigma = _check_sigma(sigma)
    n = sigma.size
    return float(
        _k.batch_stat(sigma[None, :], _k.beta_table(n), _k.gamma_table(n))[0]
    )


def t_naught_batch(sigmas: np.ndarray) -> np.ndarray:
    """t_naught for every row of an (m, n) sign matrix."""
    sigmas = np.ascontiguousarray(sigmas, dtype=np.int8)
    n = sigmas.shape[1]
    return _k.batch_stat(sigmas, _k.beta_table(n), _k.gamma_table(n))


def t_two_sided(v) -> float:
    """max(t_naught(sign(v)), t_naught(sign(-v))) for extended-real v."""
    v = np.asarray(v, dtype=np.float64)
    return max(t_naught(sign_vector(v)), t_naught(sign_vector(-v)))
