import math

import numpy as np
import pytest

from signband.core import (
    beta_coeff,
    gamma_penalty,
    kernel_psi,
    local_stat,
    max_scale,
    sign_vector,
    t_naught,
    t_naught_batch,
    t_two_sided,
    underline_sign,
)
from signband.reference import t_naught_direct, t_naught_direct_np


def test_underline_sign_convention():
    assert underline_sign(3.2) == 1
    assert underline_sign(0.0) == -1
    assert underline_sign(-0.0) == -1
    assert underline_sign(math.inf) == 1
    assert underline_sign(-math.inf) == -1
    with pytest.raises(ValueError):
        underline_sign(math.nan)


def test_sign_vector():
    v = np.array([1.0, 0.0, -2.0, np.inf, -np.inf])
    assert np.array_equal(sign_vector(v), [1, -1, -1, 1, -1])
    assert sign_vector(v).dtype == np.int8
    with pytest.raises(ValueError):
        sign_vector([np.nan])


def test_kernel_psi():
    assert kernel_psi(0.0) == 1.0
    assert kernel_psi(0.5) == 0.5
    assert kernel_psi(-0.5) == 0.5
    assert kernel_psi(2.0) == 0.0


def test_beta_coeff_values():
    assert beta_coeff(1) == 1.0
    assert beta_coeff(2) == pytest.approx(0.816497, abs=1e-6)
    assert beta_coeff(3) == pytest.approx(0.688247, abs=1e-6)
    with pytest.raises(ValueError):
        beta_coeff(0)


def test_beta_matches_weight_sum():
    for d in range(1, 20):
        s = sum(kernel_psi(i / d) ** 2 for i in range(1 - d, d))
        assert beta_coeff(d) == pytest.approx(s ** -0.5, rel=1e-12)


def test_gamma_penalty_values():
    assert gamma_penalty(1.0) == pytest.approx(math.sqrt(2.0), rel=1e-12)
    assert gamma_penalty(math.exp(-1.0)) == pytest.approx(2.0, rel=1e-12)
    assert gamma_penalty(0.25) == pytest.approx(2.184626, abs=1e-6)
    for bad in (0.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            gamma_penalty(bad)


def test_max_scale():
    assert max_scale(1) == 1
    assert max_scale(4) == 2
    assert max_scale(5) == 3
    with pytest.raises(ValueError):
        max_scale(0)


def test_local_stat_examples():
    ones = np.ones(4, dtype=np.int8)
    assert local_stat(ones, 2, 2) == pytest.approx(1.632993, abs=1e-6)
    assert local_stat(ones, 1, 3) == 1.0
    assert local_stat([1, -1, 1, 1], 2, 2) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        local_stat(ones, 3, 1)
    with pytest.raises(ValueError):
        local_stat(ones, 1, 5)


def test_t_naught_frozen_values():
    assert t_naught(np.ones(4)) == pytest.approx(0.028199, abs=1e-6)
    assert t_naught([1, 1, -1, 1]) == pytest.approx(-0.380049, abs=1e-6)
    assert t_naught(-np.ones(4)) == pytest.approx(-2.829539, abs=1e-6)
    assert t_naught([1]) == pytest.approx(1.0 - math.sqrt(2.0), rel=1e-12)


def test_t_naught_rejects_bad_input():
    with pytest.raises(ValueError):
        t_naught([1, 0, 1])
    with pytest.raises(ValueError):
        t_naught([])


def test_t_two_sided():
    assert t_two_sided(np.ones(4)) == pytest.approx(0.028199, abs=1e-6)
    assert t_two_sided(np.zeros(4)) == pytest.approx(-2.829539, abs=1e-6)
    assert t_two_sided([5.0]) == pytest.approx(1.0 - math.sqrt(2.0), rel=1e-12)
    assert t_two_sided([-5.0]) == pytest.approx(1.0 - math.sqrt(2.0), rel=1e-12)


def test_t_naught_matches_direct_oracle():
    rng = np.random.default_rng(0)
    for _ in range(40):
        n = int(rng.integers(1, 35))
        sigma = rng.choice([-1, 1], size=n)
        expect = t_naught_direct(sigma)
        assert t_naught(sigma) == pytest.approx(expect, abs=1e-10)
        assert t_naught_direct_np(sigma) == pytest.approx(expect, abs=1e-10)


def test_t_naught_batch_matches_scalar():
    rng = np.random.default_rng(1)
    sigmas = rng.choice([-1, 1], size=(20, 17)).astype(np.int8)
    batch = t_naught_batch(sigmas)
    for r in range(20):
        assert batch[r] == pytest.approx(t_naught(sigmas[r]), abs=1e-12)


def test_t_naught_monotone_in_sigma():
    rng = np.random.default_rng(2)
    for _ in range(30):
        n = int(rng.integers(2, 30))
        sigma = rng.choice([-1, 1], size=n)
        pos = np.flatnonzero(sigma == 1)
        if pos.size == 0:
            continue
        smaller = sigma.copy()
        smaller[rng.choice(pos)] = -1
        assert t_naught(smaller) <= t_naught(sigma) + 1e-12
