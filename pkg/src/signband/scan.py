"""Incremental scan over a componentwise-decreasing chain of sign vectors.

Given sigma^(0) >= sigma^(1) >= ... >= sigma^(q), where step ell flips one
+1 entry to -1, the scan finds the first ell with t_naught(sigma^(ell)) <=
kappa using at most n + q + 1 induction steps of O(n) work each. The trick
is condition (6): at scale d the statistic is below the penalized threshold
iff max_j S1[j] stays below a closed-form bound, and S0/S1 update in O(n)
when either the scale grows or one component flips.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as _k
from .core import gamma_penalty, max_scale

__all__ = ["FlipChain", "ScanState", "ScanResult", "scan", "scale_condition", "NOT_FOUND"]

NOT_FOUND = None


@dataclass(frozen=True)
class FlipChain:
    """Initial sign vector plus the 0-based indices flipped +1 -> -1."""

    sigma0: np.ndarray
    flips: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    def __post_init__(self):
        sigma0 = np.asarray(self.sigma0, dtype=np.int8)
        flips = np.asarray(self.flips, dtype=np.int64)
        if not np.isin(sigma0, (-1, 1)).all():
            raise ValueError("sigma0 entries must be -1 or +1")
        if flips.size != np.unique(flips).size:
            raise ValueError("flip indices must be distinct")
        if flips.size and (flips.min() < 0 or flips.max() >= sigma0.size):
            raise ValueError("flip index out of range")
        if not np.all(sigma0[flips] == 1):
            raise ValueError("every flip must turn a +1 entry into -1")
        object.__setattr__(self, "sigma0", sigma0)
        object.__setattr__(self, "flips", flips)

    @property
    def n(self):
        return self.sigma0.size

    @property
    def q(self):
        return self.flips.size


@dataclass
class ScanState:
    """Running state: current signs S, window sums S0, weighted sums S1."""

    S: np.ndarray
    S0: np.ndarray
    S1: np.ndarray
    d: int
    ell: int

    @classmethod
    def initial(cls, sigma0):
        s = np.asarray(sigma0, dtype=np.int64)
        return cls(S=s.copy(), S0=s.copy(), S1=s.copy(), d=1, ell=0)

    def advance_scale(self):
        self.d += 1
        _k._advance_scale(self.S, self.S0, self.S1, self.d)

    def apply_flip(self, w: int):
        if self.S[w] != 1:
            raise ValueError(f"flip of a non-positive entry at index {w}")
        _k._apply_flip(self.S, self.S0, self.S1, self.d, w, -1)
        self.ell += 1


def scale_condition(state: ScanState, kappa: float) -> bool:
    """Condition (6): max_j S1[j] <= sqrt((2d^2+1)d/3) * (penalty + kappa)."""
    if math.isinf(kappa) and kappa > 0:
        return True
    n = state.S.size
    d = state.d
    bound = math.sqrt((2.0 * d * d + 1.0) * d / 3.0) * (
        gamma_penalty((2.0 * d - 1.0) / n) + kappa
    )
    return int(state.S1.max()) <= bound


def _scan_python(chain: FlipChain, kappa: float, on_step=None):
    n = chain.n
    D = max_scale(n)
    state = ScanState.initial(chain.sigma0)
    steps = 0
    while True:
        steps += 1
        ok = scale_condition(state, kappa)
        if on_step is not None:
            on_step(state, ok)
        if ok:
            if state.d < D:
                state.advance_scale()
            else:
                return state.ell, steps, state
        else:
            if state.ell < chain.q:
                state.apply_flip(int(chain.flips[state.ell]))
            else:
                return NOT_FOUND, steps, state


@dataclass
class ScanResult:
    ell_star: object  # int or NOT_FOUND
    steps: int
    state: ScanState


def scan(chain: FlipChain, kappa: float, *, return_state: bool = False,
         on_step=None):
    """First chain position whose statistic is <= kappa, or NOT_FOUND.

    on_step, when given, is called with (state, condition_ok) after every
    condition check; this forces the instrumented pure-Python path. With
    return_state the full ScanResult comes back instead of just ell_star.
    """
    if on_step is not None or return_state:
        ell, steps, state = _scan_python(chain, kappa, on_step)
        result = ScanResult(ell, steps, state)
        return result if return_state else result.ell_star
    thresholds = _k.threshold_table(chain.n, kappa)
    ell, _steps = _k.scan_flips(chain.sigma0, chain.flips, kappa, thresholds)
    return NOT_FOUND if ell == _k.NOT_FOUND else int(ell)
