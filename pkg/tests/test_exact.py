import numpy as np
import pytest

from signband.core import t_naught
from signband.exact import (
    InfeasibleError,
    band_exact,
    feasibility_check,
    finite_range,
    lower_exact,
    upper_exact,
)
from signband.geometry import SortedDataset
from signband.reference import lower_bruteforce, upper_bruteforce

from conftest import random_instance


def test_upper_all_rejected():
    d = SortedDataset(np.array([0.0, 1.0, 2.0, 3.0]), np.zeros(4))
    U = upper_exact(d, -10.0)
    assert np.all(np.isneginf(U))


def test_upper_all_accepted():
    d = SortedDataset(np.array([0.0, 1.0, 2.0, 3.0]), np.zeros(4))
    U = upper_exact(d, 10.0)
    assert np.all(np.isposinf(U))


def test_upper_n1():
    d = SortedDataset(np.array([0.5]), np.array([2.0]))
    # both degenerates evaluate to y_1 at the single point
    assert np.array_equal(upper_exact(d, 10.0), [2.0])
    assert np.all(np.isneginf(upper_exact(d, -10.0)))


def test_upper_matches_bruteforce(rng):
    for _ in range(12):
        n = int(rng.integers(5, 16))
        d = random_instance(rng, n)
        kappa = float(rng.uniform(0.5, 1.3))
        assert np.array_equal(upper_exact(d, kappa), upper_bruteforce(d, kappa))


def test_feasibility():
    d = SortedDataset(np.linspace(0, 1, 6), np.zeros(6))
    assert feasibility_check(d, np.full(6, np.inf), 0.0)
    # roof below all data: all signs +1
    k_allplus = t_naught(np.ones(6))
    assert not feasibility_check(d, np.full(6, -np.inf), k_allplus - 1e-6)
    assert feasibility_check(d, np.full(6, -np.inf), k_allplus)


def test_lower_trivial_minus_inf():
    d = SortedDataset(np.linspace(0, 1, 6), np.zeros(6))
    kappa = t_naught(np.ones(6)) + 0.01
    U = upper_exact(d, kappa)
    L = lower_exact(d, U, kappa)
    # the all -inf pair is accepted at this kappa, so the floor collapses
    assert np.all(np.isneginf(L))


def test_lower_infeasible_raises():
    d = SortedDataset(np.linspace(0, 1, 8), np.zeros(8))
    with pytest.raises(InfeasibleError):
        lower_exact(d, np.full(8, -np.inf), -5.0)


def test_lower_matches_bruteforce(rng):
    for _ in range(12):
        n = int(rng.integers(5, 16))
        d = random_instance(rng, n)
        kappa = float(rng.uniform(0.8, 1.3))
        U = upper_exact(d, kappa)
        if not feasibility_check(d, U, kappa):
            continue
        L = lower_exact(d, U, kappa)
        Lb = lower_bruteforce(d, U, kappa)
        assert np.array_equal(np.isfinite(L), np.isfinite(Lb))
        assert np.array_equal(L == -np.inf, Lb == -np.inf)
        fin = np.isfinite(L)
        assert np.allclose(L[fin], Lb[fin])


def test_lower_below_data_where_active(rng):
    d = random_instance(rng, 14)
    kappa = 1.1
    U = upper_exact(d, kappa)
    if feasibility_check(d, U, kappa):
        L = lower_exact(d, U, kappa)
        assert np.all(L <= np.maximum(d.y, U) + 1e-9)


def test_finite_range():
    d = SortedDataset(np.array([0.0, 1.0, 2.0]), np.zeros(3))
    assert finite_range(d, np.array([np.inf, 3.0, -np.inf])) == (1.0, 1.0)
    assert finite_range(d, np.full(3, -np.inf)) == (np.inf, -np.inf)
    assert finite_range(d, np.array([1.0, 1.0, 1.0])) == (0.0, 2.0)


def test_band_exact_composition(rng):
    d = random_instance(rng, 25)
    res = band_exact(d, 0.05, 1.1)
    assert res.mode == "exact"
    assert res.kappa == 1.1
    if res.feasible:
        assert res.lower is not None
        assert np.all(res.lower <= res.upper + 1e-9)
        fin = np.isfinite(res.upper)
        assert res.x_min == d.x[fin].min()
        assert res.x_max == d.x[fin].max()


def test_band_exact_infeasible_flag():
    # W-shaped data is incompatible with convexity at a strict level
    x = np.linspace(0, 1, 40)
    y = np.cos(6 * np.pi * x) * 5.0
    d = SortedDataset(x, y)
    res = band_exact(d, 0.05, -3.0)
    assert not res.feasible
    assert res.lower is None


def test_upper_convex_where_finite(rng):
    for _ in range(10):
        d = random_instance(rng, 15)
        U = upper_exact(d, 1.0)
        fin = np.flatnonzero(np.isfinite(U))
        if fin.size < 3:
            continue
        xs, us = d.x[fin], U[fin]
        keep = np.diff(xs) > 0
        for a in range(len(fin) - 2):
            x0, x1, x2 = xs[a], xs[a + 1], xs[a + 2]
            if x0 < x1 < x2:
                lam = (x1 - x0) / (x2 - x0)
                assert us[a + 1] <= (1 - lam) * us[a] + lam * us[a + 2] + 1e-8


def test_affine_equivariance(rng):
    d = random_instance(rng, 20)
    kappa = 1.05
    res = band_exact(d, 0.05, kappa)
    if not res.feasible:
        pytest.skip("infeasible draw")
    # y -> a*y + (b + c*x) with a > 0 maps the band the same way
    a, b, c = 2.5, -1.0, 3.0
    d2 = SortedDataset(d.x, a * d.y + b + c * d.x)
    res2 = band_exact(d2, 0.05, kappa)
    assert res2.feasible
    lin = b + c * d.x
    assert np.allclose(res2.upper, a * res.upper + lin)
    assert np.allclose(res2.lower, a * res.lower + lin, equal_nan=True)
