"""Simulation experiments: coverage studies and width scaling.

The default design places x_i = (i - 1/2)/n on the unit interval; the
default truth is a convex piecewise curve, linear with slope -12 left of
1/3 and quadratic to the right, with scaled Student-t noise.
"""

from dataclasses import dataclass, field

import numpy as np

from .approx import band_approx
from .calibration import DEFAULT_N_SIMS, KappaRequest, KappaTable, get_kappa
from .exact import band_exact
from .geometry import SortedDataset

__all__ = [
    "SimConfig",
    "CoverageReport",
    "true_curve",
    "gen_sim_data",
    "coverage_study",
    "median_central_width",
    "width_scaling_study",
]


@dataclass(frozen=True)
class SimConfig:
    n: int
    alpha: float = 0.05
    sigma: float = 0.5
    error_df: float = 5.0
    error_dist: str = "student_t"
    truth: str = "piecewise"
    mode: str = "approximate"
    replications: int = 200
    seed: int = 0
    m: int = 100
    n_sims: int = DEFAULT_N_SIMS

    def __post_init__(self):
        if self.error_dist not in ("student_t", "gaussian"):
            raise ValueError("error_dist must be 'student_t' or 'gaussian'")
        if self.truth not in ("piecewise", "linear"):
            raise ValueError("truth must be 'piecewise' or 'linear'")
        if self.mode not in ("exact", "approximate"):
            raise ValueError("mode must be 'exact' or 'approximate'")


def true_curve(x, truth: str = "piecewise") -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if truth == "linear":
        return x.copy()
    return np.where(x <= 1.0 / 3.0,
                    -12.0 * (x - 1.0 / 3.0),
                    13.5 * (x - 1.0 / 3.0) ** 2)


def gen_sim_data(cfg: SimConfig, rep: int) -> SortedDataset:
    """Dataset for one replicate; each replicate uses its own substream."""
    n = cfg.n
    x = (np.arange(1, n + 1) - 0.5) / n
    f = true_curve(x, cfg.truth)
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(rep,)))
    if cfg.error_dist == "student_t":
        eps = rng.standard_t(cfg.error_df, size=n)
    else:
        eps = rng.standard_normal(n)
    return SortedDataset(x, f + cfg.sigma * eps)


@dataclass
class CoverageReport:
    config: SimConfig
    kappa: float
    replications: int
    hits: int
    infeasible: int
    mean_width: np.ndarray = field(repr=False)

    @property
    def coverage(self) -> float:
        return self.hits / self.replications


def _band_for(data: SortedDataset, cfg: SimConfig, kappa: float):
    if cfg.mode == "exact":
        return band_exact(data, cfg.alpha, kappa)
    result, _ = band_approx(data, cfg.alpha, kappa, m=cfg.m, seed=cfg.seed)
    return result


def coverage_study(cfg: SimConfig, kappa=None, table: KappaTable | None = None,
                   progress=None) -> CoverageReport:
    """Empirical simultaneous coverage of the band over the design points.

    A replicate counts as a hit only when L <= f <= U everywhere; an
    infeasible band is a miss. Widths average only over finite values.
    """
    if kappa is None:
        if table is None:
            table = KappaTable()
        kappa = get_kappa(table, KappaRequest(cfg.n, cfg.alpha,
                                              n_sims=cfg.n_sims, seed=cfg.seed))
    x = (np.arange(1, cfg.n + 1) - 0.5) / cfg.n
    f = true_curve(x, cfg.truth)
    hits = 0
    infeasible = 0
    width_sum = np.zeros(cfg.n)
    width_cnt = np.zeros(cfg.n)
    for rep in range(cfg.replications):
        data = gen_sim_data(cfg, rep)
        result = _band_for(data, cfg, kappa)
        if not result.feasible:
            infeasible += 1
        elif np.all(result.lower <= f) and np.all(f <= result.upper):
            hits += 1
        if result.feasible:
            w = result.upper - result.lower
            finite = np.isfinite(w)
            width_sum[finite] += w[finite]
            width_cnt[finite] += 1
        if progress is not None:
            progress(rep + 1, cfg.replications)
    mean_width = np.divide(width_sum, width_cnt,
                           out=np.full(cfg.n, np.nan), where=width_cnt > 0)
    return CoverageReport(config=cfg, kappa=kappa, replications=cfg.replications,
                          hits=hits, infeasible=infeasible, mean_width=mean_width)


def median_central_width(cfg: SimConfig, kappa: float) -> float:
    """Median over replicates of the band width at the central design point."""
    center = cfg.n // 2
    widths = []
    for rep in range(cfg.replications):
        data = gen_sim_data(cfg, rep)
        result = _band_for(data, cfg, kappa)
        if not result.feasible:
            continue
        w = float(result.upper[center] - result.lower[center])
        if np.isfinite(w):
            widths.append(w)
    if not widths:
        return np.nan
    return float(np.median(widths))


def width_scaling_study(n_small: int, n_large: int, alpha: float = 0.05,
                        replications: int = 50, seed: int = 0,
                        table: KappaTable | None = None,
                        n_sims: int = DEFAULT_N_SIMS) -> dict:
    """Central width ratio between a small and a large sample size.

    Uses the linear truth so the curve has no curvature of its own; the
    ratio reflects how the band tightens as n grows.
    """
    if table is None:
        table = KappaTable()
    out = {}
    for label, n in (("small", n_small), ("large", n_large)):
        kappa = get_kappa(table, KappaRequest(n, alpha, n_sims=n_sims, seed=seed))
        cfg = SimConfig(n=n, alpha=alpha, truth="linear", mode="approximate",
                        replications=replications, seed=seed, n_sims=n_sims)
        out[label] = {"n": n, "kappa": kappa,
                      "median_width": median_central_width(cfg, kappa)}
    out["ratio"] = out["small"]["median_width"] / out["large"]["median_width"]
    return out
