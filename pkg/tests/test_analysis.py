import csv
import time
from fractions import Fraction

import numpy as np
import pytest

from helpers import SM, Z, ZI
from qtf.analysis import (
    GridMismatch,
    SampledFunction,
    cascade_phi,
    derive_functions,
    filter_array,
    moment,
    sm_estimate,
    write_function_csv,
    write_stem_csv,
)
from qtf.field import parse_scalar, sqrt
from qtf.framelet import DELTA, FilterBank, load_fixture
from qtf.laurent import LaurentPoly

HAAR = (1 + Z) / 2
HAT = ZI * (1 + Z) ** 2 / 4


# ---------------------------------------------------------------------------
# cascade


def test_haar_is_indicator():
    phi = cascade_phi(HAAR, 6)
    assert phi.support == (0.0, 1.0)
    inner = phi.values[1:-1]
    assert np.all(inner == 1.0)
    assert phi.values[-1] == 0.0


def test_hat_values():
    phi = cascade_phi(HAT, 8)
    assert phi.support == (-1.0, 1.0)
    assert phi(0.0) == pytest.approx(1.0, abs=1e-14)
    assert phi(0.5) == pytest.approx(0.5, abs=1e-14)
    assert phi(-0.25) == pytest.approx(0.75, abs=1e-14)
    assert np.allclose(phi.values, np.maximum(0, 1 - np.abs(phi.x)), atol=1e-14)


def test_unshifted_b_spline():
    phi = cascade_phi((1 + Z) ** 2 / 4, 5)
    assert phi(1.0) == pytest.approx(1.0)
    assert phi(0.5) == pytest.approx(0.5)


@pytest.mark.parametrize("name", sorted(SM))
def test_partition_of_unity(name):
    phi = cascade_phi(load_fixture(name).a, 10)
    J = phi.level
    # interior integer-spaced sums at every grid offset
    for r in range(0, 2**J, 37):
        xs = np.arange(np.floor(phi.lo), np.ceil(phi.hi) + 1) + r * phi.step
        assert abs(phi.at_index(np.round(xs * 2**J).astype(int)).sum() - 1) < 1e-10


@pytest.mark.parametrize("name", sorted(SM))
def test_endpoint_decay_and_levels_agree(name):
    a = load_fixture(name).a
    fine, coarse = cascade_phi(a, 12), cascade_phi(a, 8)
    assert abs(fine.values[0]) < 1e-12 and abs(fine.values[-1]) < 1e-12
    # samples of the coarse iterate sit on the fine grid
    common = fine.values[:: 2**4]
    assert np.max(np.abs(common - coarse.values)) < 0.2


def test_cascade_rejects_bad_inputs():
    with pytest.raises(ValueError):
        cascade_phi(1 + Z, 4)
    with pytest.raises(GridMismatch):
        cascade_phi(HAAR, 0)


def test_filter_array():
    lo, h = filter_array(HAT)
    assert lo == -1 and np.allclose(h, [0.25, 0.5, 0.25])
    lo, h = filter_array(LaurentPoly({2: sqrt(2) / 4}))
    assert lo == 2 and h[0] == pytest.approx(2**0.5 / 4)


# ---------------------------------------------------------------------------
# derived functions


def test_eta_equals_phi_for_delta():
    bank = load_fixture("example_2_1")
    phi = cascade_phi(bank.a, 9)
    eta, _, _ = derive_functions(bank, phi)
    assert eta.support == phi.support
    assert np.array_equal(eta.values, phi.values)


def test_eta_for_averaging_theta():
    bank = load_fixture("example_2_5")
    phi = cascade_phi(bank.a, 8)
    eta, _, _ = derive_functions(bank, phi)
    expect = 0.5 * (phi(eta.x - 1) + phi(eta.x + 1))
    assert np.allclose(eta.values, expect, atol=1e-12)


def test_haar_wavelet_profile():
    bank = FilterBank(HAAR, DELTA, (1 - Z) / 2, LaurentPoly(), 1)
    phi = cascade_phi(HAAR, 6)
    _, psi1, psi2 = derive_functions(bank, phi)
    x = psi1.x
    first = (x > 0) & (x < 0.5)
    second = (x > 0.5) & (x < 1)
    assert np.all(psi1.values[first] == 1.0) and np.all(psi1.values[second] == -1.0)
    assert not psi2.values.any()


@pytest.mark.parametrize("j", [0, 1, 2])
def test_example_2_3_vanishing_moments(j):
    bank = load_fixture("example_2_3")
    phi = cascade_phi(bank.a, 12)
    _, psi1, psi2 = derive_functions(bank, phi)
    assert abs(moment(psi1, j)) <= 1e-4
    assert abs(moment(psi2, j)) <= 1e-4


def test_nonvanishing_moment_is_visible():
    # vmo = 3, so the third moment should not vanish for both generators
    bank = load_fixture("example_2_3")
    _, psi1, psi2 = derive_functions(bank, cascade_phi(bank.a, 12))
    assert max(abs(moment(psi1, 3)), abs(moment(psi2, 3))) > 1e-3


def test_moment_of_phi():
    phi = cascade_phi(HAT, 10)
    assert moment(phi, 0) == pytest.approx(1.0, abs=1e-12)
    assert moment(phi, 1) == pytest.approx(0.0, abs=1e-12)


def test_linearity_in_b1():
    bank = load_fixture("example_2_2")
    phi = cascade_phi(bank.a, 8)
    _, psi1, _ = derive_functions(bank, phi)
    for t in (Fraction(2), Fraction(-1, 4)):
        scaled = FilterBank(bank.a, bank.theta, bank.b1 * t, bank.b2, bank.nb)
        _, psi_t, _ = derive_functions(scaled, phi)
        assert np.array_equal(psi_t.values, float(t) * psi1.values)
    scaled = FilterBank(bank.a, bank.theta, bank.b1 * 3, bank.b2, bank.nb)
    assert np.allclose(derive_functions(scaled, phi)[1].values, 3 * psi1.values, rtol=1e-14, atol=1e-15)


def test_psi_support():
    bank = load_fixture("example_2_4")
    phi = cascade_phi(bank.a, 6)
    _, psi1, _ = derive_functions(bank, phi)
    lo = (phi.lo + bank.b1.ldeg) / 2
    hi = (phi.hi + bank.b1.deg) / 2
    assert psi1.support == (lo, hi)


def test_grid_mismatch():
    with pytest.raises(GridMismatch):
        SampledFunction(3, np.zeros(5), 0.0, 1.0)
    with pytest.raises(GridMismatch):
        SampledFunction(0, np.zeros(2), 0.0, 1.0)
    SampledFunction(2, np.zeros(5), 0.0, 1.0)


# ---------------------------------------------------------------------------
# smoothness


@pytest.mark.parametrize("name", sorted(SM))
def test_sm_matches_published(name):
    assert sm_estimate(load_fixture(name).a) == pytest.approx(SM[name], abs=1e-3)


def test_sm_of_b_splines():
    assert sm_estimate(HAAR) == pytest.approx(0.5, abs=1e-12)
    assert sm_estimate(HAT) == pytest.approx(1.5, abs=1e-12)
    assert sm_estimate(((1 + Z) / 2) ** 4) == pytest.approx(3.5, abs=1e-10)


def test_sm_is_fast():
    start = time.perf_counter()
    for name in SM:
        sm_estimate(load_fixture(name).a)
    assert time.perf_counter() - start < 2


def test_sm_needs_sum_rule():
    with pytest.raises(ValueError):
        sm_estimate(LaurentPoly({0: 1}))


# ---------------------------------------------------------------------------
# CSV


def test_function_csv(tmp_path):
    phi = cascade_phi(HAT, 3)
    path = tmp_path / "phi.csv"
    write_function_csv(phi, path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x", "value"]
    assert len(rows) == len(phi.values) + 1
    xs = np.array([float(r[0]) for r in rows[1:]])
    vs = np.array([float(r[1]) for r in rows[1:]])
    assert np.array_equal(xs, phi.x) and np.array_equal(vs, phi.values)


def test_stem_csv_round_trip(tmp_path):
    u = LaurentPoly({-1: Fraction(-1, 16), 0: sqrt(2) / 4, 2: 3})
    path = tmp_path / "b.csv"
    write_stem_csv(u, path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["k", "value"]
    back = LaurentPoly({int(k): parse_scalar(v) for k, v in rows[1:]})
    assert back == u
