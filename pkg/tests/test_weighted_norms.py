"""Tests for the weighted sup norms and the empirical operator bounds."""

import math

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st
from scipy import integrate, optimize

from qgevrey._grid import RadialGrid
from qgevrey.errors import ConfigurationError, GridMismatchError
from qgevrey.geometry import Disc, Sector
from qgevrey.weighted_norms import (
    FROZEN_CONSTANTS,
    NormEWeights,
    NormFWeights,
    NormQExpWeights,
    RayGridFunction,
    calibrate_prop3,
    calibrate_prop4,
    norm_E,
    norm_F,
    norm_qexp,
    qexp_weight,
    verify_prop2,
    verify_prop3,
    verify_prop4,
)

GRID = RadialGrid(0.72, 2.0, 2, 10, -27, 8)
M = np.linspace(-8.0, 8.0, 33)
DIRS = np.array([0.0, 2.0])

# calibrated once on the weight-inverse inputs below and frozen
PROP3_E2 = 1.2537817405925773
PROP4_E3 = 2.8564115569248916


def _zero():
    return RayGridFunction(DIRS, GRID, M, np.zeros((2, GRID.size, M.size)))


def _qexp_inverse(w):
    def f(tau, m):
        r = np.abs(tau)
        return tau / (r * qexp_weight(r, w)) * np.exp(-w.beta * np.abs(m)) / (1 + np.abs(m)) ** w.mu
    return RayGridFunction.from_function(f, DIRS, GRID, M)


def _F_inverse(w):
    def f(tau, m):
        r = np.abs(tau)
        return (tau / (1 + r ** (2 * w.k)) * np.exp(w.nu * r**w.k)
                * np.exp(-w.beta * np.abs(m)) / (1 + np.abs(m)) ** w.mu)
    return RayGridFunction.from_function(f, DIRS, GRID, M)


# ---------------------------------------------------------------------------
# norm_E


def test_norm_E_weight_cancels():
    w = NormEWeights(1.0, 2.0)
    assert norm_E(np.exp(-np.abs(M)) / (1 + np.abs(M)) ** 2, w, M) == pytest.approx(1.0, rel=1e-14)


def test_norm_E_zero():
    assert norm_E(np.zeros_like(M), NormEWeights(1.0, 2.0), M) == 0.0


def test_norm_E_gaussian_maximiser():
    m = np.linspace(-8, 8, 16001)
    val = norm_E(np.exp(-m**2), NormEWeights(1.0, 2.0), m)
    # interior critical point of log((1+m)^2 e^{m - m^2})
    mstar = optimize.brentq(lambda x: 1 - 2 * x + 2 / (1 + x), 0.1, 2.0)
    expected = (1 + mstar) ** 2 * math.exp(mstar - mstar**2)
    assert val == pytest.approx(expected, rel=1e-6)


def test_norm_E_rejects_nan():
    f = np.ones_like(M)
    f[3] = np.nan
    with pytest.raises(ValueError):
        norm_E(f, NormEWeights(1.0, 2.0), M)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(-5, 5), seed=st.integers(0, 2**16))
@example(a=0.0, seed=37503)
def test_norm_E_homogeneous_and_triangle(a, seed):
    rng = np.random.default_rng(seed)
    f, g = rng.normal(size=(2, M.size))
    w = NormEWeights(1.0, 2.0)
    assert norm_E(a * f, w, M) == pytest.approx(abs(a) * norm_E(f, w, M), rel=1e-12, abs=1e-300)
    rhs = norm_E(f, w, M) + norm_E(g, w, M)
    # norms reach ~1e6 here, so allow rounding relative to their size
    assert norm_E(f + g, w, M) <= rhs * (1 + 1e-14)


# ---------------------------------------------------------------------------
# norm_qexp and norm_F


def test_norm_qexp_exact_inverse():
    w = NormQExpWeights(1.0, 1.0, 2.0, 0.0, 1.0, 2.0)
    assert norm_qexp(_qexp_inverse(w), w) == pytest.approx(1.0, rel=1e-12)
    assert norm_qexp(_zero(), w) == 0.0


def test_norm_qexp_flat_profile_on_disc():
    w = NormQExpWeights(1.0, 1.0, 2.0, 0.0, 1.0, 2.0)

    def f(tau, m):
        return tau * np.exp(-np.abs(m)) / (1 + np.abs(m)) ** 2

    h = RayGridFunction.from_function(f, DIRS, GRID, M)
    val = norm_qexp(h, w, Disc(1.0))
    rmin = GRID.radii[0]
    assert val == pytest.approx(math.exp(-0.5 * math.log(rmin + 1) ** 2 / math.log(2)), rel=1e-12)


def test_norm_F_exact_inverse():
    w = NormFWeights(1.0, 1.0, 2.0, 1)
    dom = Sector(0.0, math.pi, 0.0, 20.0)
    assert norm_F(_F_inverse(w), w, dom) == pytest.approx(1.0, rel=1e-12)
    assert norm_F(_zero(), w) == 0.0


def test_grid_function_shape_mismatch():
    with pytest.raises(GridMismatchError):
        RayGridFunction(DIRS, GRID, M, np.zeros((2, 3, M.size)))


def test_dilation_is_index_shift():
    h = RayGridFunction.from_function(lambda tau, m: tau**2 + 0 * m, DIRS, GRID, M)
    d = h.dilated()
    n = d.valid
    np.testing.assert_allclose(d.values[:, :n, 0], (2.0 * h.tau[:, :n]) ** 2, rtol=1e-12)


def test_to_csv_columns():
    text = _zero().to_csv()
    lines = text.splitlines()
    assert lines[0] == "direction_idx,r,m,re,im"
    assert len(lines) == 1 + 2 * GRID.size * M.size


# ---------------------------------------------------------------------------
# operator bounds


def test_dilated_product_bound_zero_inputs():
    w = NormQExpWeights(1.0, 1.0, 2.0, 0.0, 1.0, 2.0)
    a = lambda tau: np.ones_like(tau)  # noqa: E731
    gauss = lambda m: 0.1 * np.exp(-(m**2) / 0.5)  # noqa: E731
    rep = verify_prop2(a, None, gauss, (1.0,), (1.0,), _zero(), w, Disc(10.0), 1.0, 0.0, 1.0)
    assert rep.lhs == 0.0 and rep.holds
    rep = verify_prop2(a, None, lambda m: 0 * m, (1.0,), (1.0,), _qexp_inverse(w), w, Disc(10.0), 1.0, 0.0, 1.0)
    assert rep.lhs == 0.0


def test_dilated_product_bound_gaussian_bound_holds():
    w = NormQExpWeights(1.0, 1.0, 2.0, 0.0, 1.0, 2.0)
    a = lambda tau: (1 + np.abs(tau)) ** -1.0  # noqa: E731
    gauss = lambda m: np.exp(-(m**2) / 0.5)  # noqa: E731
    rep = verify_prop2(a, None, gauss, (1.0,), (1.0,), _qexp_inverse(w), w, Sector(0.0, 3.0, 0.0, 50.0),
                       gamma1=1.0, gamma2=0.0, delta=1.0)
    assert rep.lhs > 0
    assert rep.ratio <= 1.0
    assert rep.factors["C11"] <= rep.factors["C11_bound"] * (1 + 1e-12)


def test_dilated_product_bound_preconditions():
    w = NormQExpWeights(1.0, 1.0, 2.0, 0.0, 1.0, 2.0)
    a = lambda tau: np.ones_like(tau)  # noqa: E731
    with pytest.raises(ConfigurationError):
        verify_prop2(a, None, np.exp, (1.0,), (1.0,), _zero(), w, Disc(1.0), 0.5, 0.0, 1.0)


def test_volterra_bound_frozen_constant():
    w = NormFWeights(1.0, 1.0, 2.0, 1)
    assert calibrate_prop3(GRID, M, w, 0.0, 0.0, 0.0) == pytest.approx(PROP3_E2, rel=1e-10)


def test_volterra_bound_constant_by_quadrature():
    # chi = nu2 = 0, k = 1: the operator is int_0^r, the input r e^r / (1 + r^2)
    r_max = 2.0 / (math.sqrt(2.0) - 1.0)
    r = GRID.radii[(GRID.radii > 1e-3) & (GRID.radii <= r_max)]
    vals = []
    for ri in r:
        I, _ = integrate.quad(lambda s: s * math.exp(s) / (1 + s * s), 0.0, ri, epsabs=1e-13, epsrel=1e-12)
        vals.append((1 + ri * ri) / ri * math.exp(-ri) * I)
    assert max(vals) == pytest.approx(PROP3_E2, rel=1e-8)


def test_volterra_bound_holds_and_zero():
    w = NormFWeights(1.0, 1.0, 2.0, 1)
    a = lambda tau: np.ones_like(tau)  # noqa: E731
    dom = Sector(0.0, 0.0, 0.0, 4.0)
    rep = verify_prop3(a, 0.0, 0, _F_inverse(w).restrict([0]), w, dom, 0.0)
    assert rep.holds and rep.lhs > 0
    assert FROZEN_CONSTANTS["prop3"]
    assert verify_prop3(a, 0.0, 0, _zero(), w, dom, 0.0).lhs == 0.0
    with pytest.raises(ConfigurationError):
        verify_prop3(a, -1.5, 0, _zero(), w, dom, 0.0)


def test_convolution_bound_frozen_and_holds():
    w = NormFWeights(1.0, 1.0, 2.0, 1)
    assert calibrate_prop4(GRID, M, w, (1.0,), (1.0,)) == pytest.approx(PROP4_E3, rel=1e-10)
    prof = lambda m: np.exp(-(m**2) / 0.5)  # noqa: E731
    dom = Sector(0.0, 0.0, 0.0, 4.0)
    rep = verify_prop4(None, (1.0,), (1.0,), prof, _F_inverse(w).restrict([0]), w, dom)
    assert rep.holds and rep.lhs > 0
    assert verify_prop4(None, (1.0,), (1.0,), prof, _zero(), w, dom).lhs == 0.0
