"""Tests for formal series, remainder bounds, flatness fits and the summation identities."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgevrey.asymptotics import (
    FormalSeriesF,
    dirichlet_bound_check,
    dirichlet_sum,
    euler_maclaurin_check,
    eps_power_over_factorial,
    fit_flatness,
    formal_coeffs_b,
    formal_coeffs_q,
    remainder_check,
)
from qgevrey.errors import ConfigurationError, InsufficientDataError
from qgevrey.scenario import _zero_forcing, load_scenario

T = np.array([0.4, 0.7, 1.0])
Z = np.array([-1.0, 0.0, 1.0])


@pytest.fixture(scope="module")
def formal(reference):
    fq = formal_coeffs_q(reference.spec_q, 5, reference.grid)
    fb = formal_coeffs_b(reference.spec_b, reference.spec_q, fq, 5)
    return fq, fb


# ---------------------------------------------------------------------------
# formal coefficients


def test_formal_zero_forcing(reference_raw):
    raw = _zero_forcing(reference_raw)
    raw["problem_b"]["c00"]["quotient"] = [[0.0, 0.0]]
    sc = load_scenario(raw)
    fq = formal_coeffs_q(sc.spec_q, 4, sc.grid)
    assert all(np.all(a == 0) for a in fq.coeffs)
    fb = formal_coeffs_b(sc.spec_b, sc.spec_q, fq, 4)
    assert all(np.all(a == 0) for a in fb.coeffs)


def test_formal_q_low_orders(variant):
    def edit(raw):
        raw["problem_q"]["C"][0]["amplitude"] = [0.0, 0.0]

    sc = variant(edit)
    fq = formal_coeffs_q(sc.spec_q, 4, sc.grid)
    m = fq.m
    G = np.exp(-m**2 / 2)
    a1, a2 = sc.spec_q.psi.taylor
    # Q = 1, R_D = 1, k = 1, d_D = 3
    assert np.all(fq.coeffs[0] == 0)
    np.testing.assert_allclose(fq.fourier(1, T), a1 * T[:, None] * G[None, :], rtol=1e-14)
    # 2! Gamma(2) a2 t^2
    np.testing.assert_allclose(fq.fourier(2, T), 2 * a2 * T[:, None] ** 2 * G[None, :], rtol=1e-14)
    assert np.all(fq.fourier(3, T) == 0)
    # 4!/1! (t^2 d/dt)^3 (a1 t) = 24 * 6 a1 t^4
    np.testing.assert_allclose(fq.fourier(4, T), 144 * a1 * T[:, None] ** 4 * G[None, :], rtol=1e-13)


def test_formal_b_second_order(reference, formal):
    fq, fb = formal
    b = reference.spec_b
    assert np.all(fb.coeffs[0] == 0) and np.all(fb.coeffs[1] == 0)
    # Q dH2/dt = 2 cF'(0) h1 with h1 = a1 t G and H2(0) = 0
    q0 = b.cF.quotient.coeffs[0]
    Qb = complex(b.Q[0])
    a1 = reference.spec_q.psi.taylor[0]
    G = np.exp(-fb.m**2 / 2)
    np.testing.assert_allclose(fb.fourier(2, T), (q0 * a1 / Qb) * T[:, None] ** 2 * G[None, :], rtol=1e-13)


def test_formal_deterministic(reference, formal):
    fq, _ = formal
    again = formal_coeffs_q(reference.spec_q, 5, reference.grid)
    for a, b in zip(fq.coeffs, again.coeffs):
        np.testing.assert_array_equal(a, b)


def test_formal_nmax_zero(reference):
    fq = formal_coeffs_q(reference.spec_q, 0, reference.grid)
    assert fq.n_max == 0


def test_to_rows_layout(formal):
    fq, _ = formal
    rows = fq.to_rows()
    assert len(rows) == sum(a.size for a in fq.coeffs)
    assert rows[0][:2] == [0, 0]


@settings(max_examples=40, deadline=None)
@given(r=st.floats(1e-3, 2.0), a=st.floats(-3, 3), m=st.integers(0, 60))
def test_eps_power_over_factorial(r, a, m):
    e = r * complex(math.cos(a), math.sin(a))
    expected = math.exp(m * math.log(r) - math.lgamma(m + 1))
    assert abs(eps_power_over_factorial(e, m)) == pytest.approx(expected, rel=1e-10)


# ---------------------------------------------------------------------------
# remainder bound


def _planted_series(C, A, q, kappa, n_top, m):
    G = np.exp(-m**2 / 2)
    coeffs = [np.zeros((1, m.size), dtype=complex)]
    for j in range(1, n_top + 1):
        c = C * A**j * q ** (j * (j - 1) / (2 * kappa))
        coeffs.append((c * math.factorial(j) * G)[None, :].astype(complex))
    return FormalSeriesF(coeffs, m)


def test_remainder_of_truncation_vanishes(formal):
    fq, _ = formal
    cut = FormalSeriesF(fq.coeffs[:4] + [np.zeros_like(fq.coeffs[0])] * 2, fq.m)
    rep = remainder_check(lambda e: cut.partial_sum(e, 3, T, Z), cut, 0.9, 2.0,
                          [0.05, 0.02, 0.01], range(6), T, Z)
    assert np.all(rep.remainders[3:] == 0)
    assert np.all(rep.remainders[:3] > 0)
    assert rep.status == "ok"


def test_remainder_recovers_planted_constants():
    m = np.linspace(-8, 8, 33)
    C, A, q, kappa = 0.5, 1.0, 2.0, 2.0
    f = _planted_series(C, A, q, kappa, 9, m)
    # large enough that R_5 stays far above cancellation noise, small enough that R_n ~ its first term
    eps = np.geomspace(1e-2, 1e-3, 6)
    rep = remainder_check(lambda e: f.partial_sum(e, 9, [1.0], [0.0]), f, kappa, q, eps, range(6), [1.0], [0.0],
                          kappa_grid=[kappa])
    fit = rep.fits[repr(kappa)]
    assert rep.status == "ok" and fit["holds"]
    # the z profile equals 1 at z = 0
    assert 1.0 <= fit["A"] / A <= 1.15
    assert 1.0 <= fit["C"] / C <= 1.25


def test_remainder_errors(formal):
    fq, _ = formal
    with pytest.raises(ConfigurationError):
        remainder_check(lambda e: 0, fq, 0.9, 2.0, [0.1, 0.01], range(9), T, Z)
    with pytest.raises(InsufficientDataError):
        remainder_check(lambda e: 0, fq, 0.9, 2.0, [0.1], range(3), T, Z)


# ---------------------------------------------------------------------------
# flatness fits


def test_flatness_planted_q_gevrey():
    eps = np.geomspace(1e-3, 0.5, 12)
    q, kappa = 2.0, 2.0
    delta = np.exp(-(kappa / (2 * math.log(q))) * np.log(eps) ** 2)
    rep = fit_flatness((eps, delta), q)
    assert rep.model == "q_gevrey"
    assert rep.exponent == pytest.approx(2.0, abs=1e-6)


def test_flatness_planted_gevrey():
    eps = np.geomspace(0.3, 30.0, 12)
    delta = np.exp(-3.0 / eps**2)
    rep = fit_flatness((eps, delta), 2.0)
    assert rep.model == "gevrey"
    assert rep.gevrey["k"] == 2
    assert rep.gevrey["M"] == pytest.approx(3.0, abs=1e-6)


def test_flatness_degenerate_and_errors():
    eps = np.geomspace(1e-3, 0.5, 8)
    rep = fit_flatness((eps, np.zeros_like(eps)), 2.0)
    assert rep.degenerate and rep.exponent == math.inf
    with pytest.raises(InsufficientDataError):
        fit_flatness((eps[:4], np.ones(4)), 2.0)
    with pytest.raises(InsufficientDataError):
        fit_flatness((np.linspace(0.1, 0.5, 8), np.ones(8)), 2.0)


@settings(max_examples=25, deadline=None)
@given(kappa=st.floats(0.2, 4.0), K=st.floats(-2, 2), logM=st.floats(-3, 3))
def test_flatness_inverts_q_model(kappa, K, logM):
    eps = np.geomspace(1e-3, 0.5, 10)
    L = np.log(eps)
    delta = np.exp(-kappa / (2 * math.log(2.0)) * L**2 + K * L + logM)
    rep = fit_flatness((eps, delta), 2.0, model="q_gevrey")
    assert rep.q_gevrey["kappa"] == pytest.approx(kappa, rel=1e-6)


# ---------------------------------------------------------------------------
# Dirichlet sum and Euler-Maclaurin


def test_dirichlet_brute_force():
    brute = sum(2.0 ** (-j * j) * math.exp(-(0.5**j)) for j in range(40))
    assert dirichlet_sum(1, 1, 1, 0.5, 2.0, 1.0) == pytest.approx(brute, rel=1e-15)


def test_dirichlet_limits():
    theta = sum(2.0 ** (-j * j) for j in range(40))
    assert dirichlet_sum(1, 1, 1, 0.5, 2.0, 1e12) == pytest.approx(theta, rel=1e-10)
    assert dirichlet_sum(1, 1, 1e6, 0.5, 2.0, 1.0) < 1e-12


def test_dirichlet_bound():
    rep = dirichlet_bound_check(1, 1, 1, 0.5, 2.0, 1.0)
    assert rep.holds
    with pytest.raises(ConfigurationError):
        dirichlet_bound_check(1, 1, 1, 0.5, 2.0, 3.0)
    with pytest.raises(ConfigurationError):
        dirichlet_bound_check(1, 1, 1, 0.5, 2.0, 1.0, calibration=(1e-3, 1e-1), test=(1e-2, 1.0))


def test_euler_maclaurin_examples():
    assert euler_maclaurin_check("t", 10) < 1e-12
    assert euler_maclaurin_check("t2", 5) < 1e-12
    assert euler_maclaurin_check("const", 7) < 1e-13
    assert euler_maclaurin_check("exp", 12) < 1e-10


@pytest.mark.parametrize("n", [1, 3, 8, 20])
def test_euler_maclaurin_cubic(n):
    assert euler_maclaurin_check(lambda t: t**3 - t, n, lambda t: 3 * t**2 - 1) < 1e-9 * n**4


def test_euler_maclaurin_errors():
    with pytest.raises(ConfigurationError):
        euler_maclaurin_check(np.sin, 3)
    with pytest.raises(ConfigurationError):
        euler_maclaurin_check("t", 0)
