import numpy as np
import pytest

from signband.experiments import (
    SimConfig,
    coverage_study,
    gen_sim_data,
    median_central_width,
    true_curve,
    width_scaling_study,
)


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(n=100, error_dist="cauchy")
    with pytest.raises(ValueError):
        SimConfig(n=100, truth="cubic")
    with pytest.raises(ValueError):
        SimConfig(n=100, mode="fast")


def test_true_curve():
    x = np.array([0.0, 1.0 / 3.0, 1.0])
    f = true_curve(x)
    assert f[0] == pytest.approx(4.0)
    assert f[1] == 0.0
    assert f[2] == pytest.approx(13.5 * (2.0 / 3.0) ** 2)
    # convexity on a fine grid
    g = true_curve(np.linspace(0, 1, 301))
    assert np.all(np.diff(np.diff(g)) >= -1e-12)
    assert np.array_equal(true_curve(x, "linear"), x)


def test_gen_sim_data_design():
    cfg = SimConfig(n=50, seed=3)
    d = gen_sim_data(cfg, 0)
    assert np.allclose(d.x, (np.arange(1, 51) - 0.5) / 50)
    # replicates differ, same replicate reproduces
    d2 = gen_sim_data(cfg, 1)
    assert not np.array_equal(d.y, d2.y)
    assert np.array_equal(d.y, gen_sim_data(cfg, 0).y)


def test_gen_sim_data_gaussian():
    cfg = SimConfig(n=2000, seed=0, error_dist="gaussian")
    d = gen_sim_data(cfg, 0)
    resid = d.y - true_curve(d.x)
    assert abs(np.std(resid) - 0.5) < 0.05


def test_coverage_study_small():
    cfg = SimConfig(n=40, replications=10, mode="exact", n_sims=499, seed=0)
    rep = coverage_study(cfg)
    assert rep.replications == 10
    assert 0 <= rep.hits <= 10
    assert rep.coverage == rep.hits / 10
    assert rep.mean_width.shape == (40,)
    # high nominal level should cover most replicates even with few sims
    assert rep.coverage >= 0.7


def test_coverage_progress_callback():
    seen = []
    cfg = SimConfig(n=25, replications=3, mode="approximate", n_sims=299)
    coverage_study(cfg, kappa=1.0, progress=lambda i, total: seen.append((i, total)))
    assert seen == [(1, 3), (2, 3), (3, 3)]


def test_median_central_width_positive():
    cfg = SimConfig(n=60, replications=5, truth="linear", n_sims=299)
    w = median_central_width(cfg, kappa=1.0)
    assert np.isfinite(w) and w > 0


def test_width_scaling_smaller_n_wider():
    out = width_scaling_study(60, 240, replications=8, n_sims=999)
    assert out["small"]["median_width"] > out["large"]["median_width"]
    assert out["ratio"] > 1.0
