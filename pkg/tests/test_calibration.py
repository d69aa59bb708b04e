import math

import numpy as np
import pytest

from signband.calibration import (
    KappaRequest,
    KappaTable,
    get_kappa,
    interpolated_kappa,
    kappa_from_sample,
    simulate_null_sample,
)
from signband.core import t_two_sided


def test_request_validation():
    with pytest.raises(ValueError):
        KappaRequest(0, 0.05)
    with pytest.raises(ValueError):
        KappaRequest(10, 0.0)
    with pytest.raises(ValueError):
        KappaRequest(10, 1.0)
    with pytest.raises(ValueError):
        KappaRequest(10, 0.05, n_sims=0)


def test_null_sample_n1_is_deterministic():
    sample = simulate_null_sample(1, 25, seed=3)
    assert np.allclose(sample, 1.0 - math.sqrt(2.0))


def test_null_sample_values_are_attainable():
    # n=4: the simulated value must be one of the 16 enumerable statistics
    attainable = set()
    for bits in range(16):
        v = np.array([1.0 if bits >> i & 1 else -1.0 for i in range(4)])
        attainable.add(round(t_two_sided(v), 10))
    sample = simulate_null_sample(4, 50, seed=0)
    for val in sample:
        assert round(float(val), 10) in attainable


def test_null_sample_is_sorted_and_seeded():
    a = simulate_null_sample(30, 200, seed=5)
    b = simulate_null_sample(30, 200, seed=5)
    c = simulate_null_sample(30, 200, seed=6)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.all(np.diff(a) >= 0)


def test_kappa_from_sample_rank_rule():
    sample = np.array([1.0, 2.0, 3.0, 4.0])
    assert kappa_from_sample(sample, 0.5) == 2.0
    assert kappa_from_sample(sample, 0.05) == 4.0
    assert kappa_from_sample(np.full(9, 7.5), 0.3) == 7.5
    with pytest.raises(ValueError):
        kappa_from_sample(np.array([]), 0.1)


def test_kappa_n1_deterministic():
    table = KappaTable()
    k = get_kappa(table, KappaRequest(1, 0.05, n_sims=10, seed=0))
    assert k == pytest.approx(1.0 - math.sqrt(2.0), rel=1e-12)


def test_kappa_monotone_in_alpha():
    table = KappaTable()
    sample = simulate_null_sample(40, 2000, seed=0)
    ks = [kappa_from_sample(sample, a) for a in (0.01, 0.05, 0.10, 0.25)]
    assert all(ks[i] >= ks[i + 1] for i in range(len(ks) - 1))
    del table


def test_kappa_table_roundtrip(tmp_path):
    path = tmp_path / "kappa.csv"
    table = KappaTable(path)
    req = KappaRequest(25, 0.10, n_sims=500, seed=1)
    k1 = get_kappa(table, req)
    # a fresh table must reload the cached value, not resimulate
    table2 = KappaTable(path)
    assert table2.lookup(req) == pytest.approx(k1, abs=1e-6)
    assert get_kappa(table2, req) == table2.lookup(req)


def test_kappa_table_last_record_wins(tmp_path):
    path = tmp_path / "kappa.csv"
    with open(path, "w") as fh:
        fh.write("# comment line\n")
        fh.write("25,0.1,9.000000,500,1\n")
        fh.write("25,0.1,1.234000,500,1\n")
    table = KappaTable(path)
    assert table.lookup(KappaRequest(25, 0.10, n_sims=500, seed=1)) == 1.234


def test_kappa_table_rejects_malformed(tmp_path):
    path = tmp_path / "kappa.csv"
    path.write_text("25,0.1,1.0\n")
    with pytest.raises(ValueError):
        KappaTable(path)


def test_interpolated_kappa_bracket():
    table = KappaTable()
    r20 = KappaRequest(20, 0.05, n_sims=800, seed=0)
    r80 = KappaRequest(80, 0.05, n_sims=800, seed=0)
    k20 = get_kappa(table, r20)
    k80 = get_kappa(table, r80)
    mid = interpolated_kappa(table, KappaRequest(40, 0.05, n_sims=800, seed=0))
    lo, hi = sorted((k20, k80))
    assert lo <= mid <= hi
    # exact hit returns the cached value itself
    assert interpolated_kappa(table, r20) == k20


def test_interpolated_kappa_falls_back_to_simulation():
    table = KappaTable()
    req = KappaRequest(15, 0.10, n_sims=300, seed=0)
    k = interpolated_kappa(table, req)
    assert k == get_kappa(table, req)
