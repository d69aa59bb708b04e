"""Monte-Carlo calibration of the critical value kappa(n, alpha).

kappa is the smallest (1-alpha)-quantile of the two-sided statistic under
independent Rademacher signs. It depends only on (n, alpha) and the
simulation settings, never on the data. Values are cached in a plain-text
table file, one "n,alpha,kappa,n_sims,seed" record per line, append-only
with last-record-wins on duplicate keys.
"""

import math
import os
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k

__all__ = [
    "KappaRequest",
    "KappaTable",
    "simulate_null_sample",
    "kappa_from_sample",
    "get_kappa",
    "DEFAULT_N_SIMS",
]

DEFAULT_N_SIMS = 19999
_CHUNK = 4096


@dataclass(frozen=True)
class KappaRequest:
    n: int
    alpha: float
    n_sims: int = DEFAULT_N_SIMS
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.n_sims < 1:
            raise ValueError("n_sims must be >= 1")


def simulate_null_sample(n: int, n_sims: int, seed: int) -> np.ndarray:
    """Sorted sample of the two-sided statistic of n_sims Rademacher vectors.

    Replicate r draws its signs from the substream (seed, r), so the sample
    does not depend on evaluation order.
    """
    if n < 1 or n_sims < 1:
        raise ValueError("n and n_sims must be >= 1")
    betas = _k.beta_table(n)
    gammas = _k.gamma_table(n)
    out = np.empty(n_sims, dtype=np.float64)
    for start in range(0, n_sims, _CHUNK):
        stop = min(start + _CHUNK, n_sims)
        sigs = np.empty((stop - start, n), dtype=np.int8)
        for r in range(start, stop):
            rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(r,)))
            sigs[r - start] = rng.integers(0, 2, size=n, dtype=np.int8) * 2 - 1
        out[start:stop] = _k.batch_two_sided_rademacher(sigs, betas, gammas)
    out.sort()
    return out


def kappa_from_sample(sample: np.ndarray, alpha: float) -> float:
    """Order statistic at rank ceil((1-alpha) * len(sample)), 1-based.

    This is the smallest sample point whose empirical CDF reaches 1 - alpha.
    """
    sample = np.asarray(sample, dtype=np.float64)
    if sample.size == 0:
        raise ValueError("sample must be nonempty")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    # tiny guard so that exactly-integer products do not get bumped a rank
    rank = math.ceil((1.0 - alpha) * sample.size - 1e-9)
    rank = min(max(rank, 1), sample.size)
    return float(sample[rank - 1])


class KappaTable:
    """File-backed cache of critical values keyed by (n, alpha, n_sims, seed).

    path=None keeps the table in memory only.
    """

    def __init__(self, path=None):
        self.path = os.fspath(path) if path is not None else None
        self._entries = {}
        if self.path is not None and os.path.exists(self.path):
            self._load()

    def _load(self):
        with open(self.path) as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split(",")
                if len(parts) != 5:
                    raise ValueError(
                        f"{self.path}:{lineno}: expected 5 comma-separated fields"
                    )
                n, alpha, kappa, n_sims, seed = parts
                key = (int(n), float(alpha), int(n_sims), int(seed))
                self._entries[key] = float(kappa)

    def _append(self, key, kappa):
        if self.path is None:
            return
        n, alpha, n_sims, seed = key
        with open(self.path, "a") as fh:
            fh.write(f"{n},{alpha!r},{kappa:.6f},{n_sims},{seed}\n")

    def lookup(self, req: KappaRequest):
        return self._entries.get((req.n, req.alpha, req.n_sims, req.seed))

    def store(self, req: KappaRequest, kappa: float):
        key = (req.n, req.alpha, req.n_sims, req.seed)
        self._entries[key] = kappa
        self._append(key, kappa)

    def entries(self):
        return dict(self._entries)


def get_kappa(table: KappaTable, req: KappaRequest) -> float:
    """Cached critical value; simulates, stores and returns it on a miss."""
    cached = table.lookup(req)
    if cached is not None:
        return cached
    sample = simulate_null_sample(req.n, req.n_sims, req.seed)
    kappa = kappa_from_sample(sample, req.alpha)
    table.store(req, kappa)
    return kappa


def interpolated_kappa(table: KappaTable, req: KappaRequest) -> float:
    """kappa linearly interpolated in log(n) between cached sample sizes.

    Requires cached entries with the same (alpha, n_sims, seed) bracketing n.
    Falls back to direct simulation when no bracket exists.
    """
    hits = sorted(
        (n, kappa)
        for (n, alpha, n_sims, seed), kappa in table.entries().items()
        if alpha == req.alpha and n_sims == req.n_sims and seed == req.seed
    )
    below = [(n, k) for n, k in hits if n <= req.n]
    above = [(n, k) for n, k in hits if n >= req.n]
    if not below or not above:
        return get_kappa(table, req)
    n0, k0 = below[-1]
    n1, k1 = above[0]
    if n0 == n1:
        return k0
    w = (math.log(req.n) - math.log(n0)) / (math.log(n1) - math.log(n0))
    return k0 + w * (k1 - k0)
