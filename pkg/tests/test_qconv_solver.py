"""Tests for the q-dilated convolution problem and its Neumann series."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from qgevrey._grid import RadialGrid
from qgevrey.errors import ConfigurationError, GridMismatchError, InsufficientDataError
from qgevrey.qconv_solver import GridConfig, apply_H, fit_decay, measure_decay_q, solve_wk, validate_spec_q
from qgevrey.scenario import _zero_forcing, load_scenario
from qgevrey.weighted_norms import RayGridFunction, qexp_weight

GRID = RadialGrid(0.72, 2.0, 2, 10, -27, 8)
M_FINE = np.linspace(-16.0, 16.0, 129)


def _no_coupling(raw):
    raw["problem_q"]["C"][0]["amplitude"] = [0.0, 0.0]


def _test_function(spec, m):
    """Weight inverse in tau, smooth Gaussian in m."""
    w = spec.weights

    def f(tau, mm):
        r = np.abs(tau)
        return tau / (r * qexp_weight(r, w)) * np.exp(-(mm**2) / 2)

    return RayGridFunction.from_function(f, [0.3, 2.5], GRID, m, q=spec.q, delta=spec.delta)


# ---------------------------------------------------------------------------
# validation


def test_reference_validates(reference):
    rep = validate_spec_q(reference.spec_q)
    assert rep.ok, rep.failed()
    # k d_D - 1 = 2 against k1 delta + k d_1 = 2
    assert rep["order_gap[1]"].margin == pytest.approx(0.0)


def test_eps_power_violation(variant):
    def edit(raw):
        raw["problem_q"]["Delta"] = [0, 0]

    rep = validate_spec_q(variant(edit).spec_q)
    assert not rep.ok
    assert "eps_power[1]" in rep.failed()


def test_quotient_leaves_annulus(variant):
    def edit(raw):
        raw["problem_q"]["Q"] = [[2.0, 0.0], [1.0, 0.0]]

    rep = validate_spec_q(variant(edit).spec_q)
    chk = rep["quotient_in_annulus"]
    assert not chk.passed
    assert "leaves the annulus" in chk.detail


# ---------------------------------------------------------------------------
# the operator


def test_apply_H_zero(reference):
    spec = reference.spec_q
    w = _test_function(spec, M_FINE).zeros_like()
    assert np.all(apply_H(w, spec, 0.1).values == 0)


@settings(max_examples=10, deadline=None)
@given(a=st.complex_numbers(max_magnitude=3), b=st.complex_numbers(max_magnitude=3))
def test_apply_H_linear(reference, a, b):
    spec = reference.spec_q
    m = np.linspace(-8, 8, 33)
    w1 = _test_function(spec, m)
    w2 = w1.like(w1.values * np.exp(1j * m)[None, None, :] * 0.5)
    lhs = apply_H(w1 * a + w2 * b, spec, 0.2 + 0.1j).values
    rhs = (apply_H(w1, spec, 0.2 + 0.1j) * a + apply_H(w2, spec, 0.2 + 0.1j) * b).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(lhs)))


def test_apply_H_dense_quadrature(reference):
    spec = reference.spec_q
    eps = 0.15 + 0.05j
    w = _test_function(spec, M_FINE)
    out = apply_H(w, spec, eps)
    C = spec.C[0]
    l = 0
    wt = spec.weights
    rng = np.random.default_rng(1)
    for _ in range(20):
        d = int(rng.integers(2))
        i = int(rng.integers(10, out.valid))
        j = int(rng.integers(32, M_FINE.size - 32))
        tau, mm = out.tau[d, i], M_FINE[j]
        rq = abs(spec.dilation * tau)
        radial = spec.dilation * tau / (rq * qexp_weight(rq, wt))

        def integrand(m1, part):
            v = C(mm - m1, eps) * complex(np.polyval(spec.R[l][::-1], 1j * m1)) * np.exp(-(m1**2) / 2)
            return v.real if part == 0 else v.imag

        I = complex(*(integrate.quad(integrand, -40, 40, args=(p,), epsabs=0.0, epsrel=1e-12,
                                     points=[mm], limit=200)[0] for p in (0, 1)))
        expo = spec.Delta[l] - spec.k * spec.d[l]
        coef = eps**expo * (spec.k * tau**spec.k) ** spec.d[l]
        P = spec.symbol.P(tau, mm)
        expected = coef * radial * I / math.sqrt(2 * math.pi) / P
        assert abs(out.values[d, i, j] - expected) <= 1e-6 * abs(expected)


def test_apply_H_grid_ratio(reference):
    spec = reference.spec_q
    g3 = RadialGrid(0.72, 3.0, 2, 10, -5, 2)
    w = RayGridFunction(np.zeros(1), g3, np.linspace(-8, 8, 33), np.ones((1, g3.size, 33)))
    with pytest.raises(GridMismatchError):
        apply_H(w, spec, 0.1)


def test_apply_H_eps_range(reference):
    w = _test_function(reference.spec_q, M_FINE)
    with pytest.raises(ConfigurationError):
        apply_H(w, reference.spec_q, 10.0)


# ---------------------------------------------------------------------------
# the series


def test_zero_forcing_gives_zero(reference_raw):
    sc = load_scenario(_zero_forcing(reference_raw))
    s = solve_wk(sc.spec_q, 0.1, 0, j_max=10)
    assert len(s) == 1
    assert np.all(s.terms[0].values == 0)
    assert measure_decay_q(s).degenerate


def test_no_coupling_is_forcing_over_symbol(variant):
    spec = variant(_no_coupling).spec_q
    eps = 0.1 + 0.05j
    s = solve_wk(spec, eps, 0, j_max=10)
    assert len(s) == 1
    t0 = s.terms[0]
    tau = t0.tau[:, :, None]
    m = t0.m[None, None, :]
    expected = spec.psi(tau, m, eps) / spec.symbol.P(tau, m)
    np.testing.assert_allclose(t0.values, expected, rtol=1e-14)
    rep = measure_decay_q(s)
    assert rep.degenerate


def test_reference_series_contracts(q_series):
    assert q_series.residual < 1e-8
    assert max(q_series.ratios) < 1.0


def test_reference_decay(q_series):
    rep = measure_decay_q(q_series)
    assert not rep.degenerate
    assert rep.K_triangle < 1.0


def test_solve_wk_arguments(reference):
    with pytest.raises(ConfigurationError):
        solve_wk(reference.spec_q, 0.1, 7)
    with pytest.raises(ConfigurationError):
        solve_wk(reference.spec_q, 0.1, 0, j_max=-1)


def test_short_series_rejected(q_series):
    class Short:
        norms = {"theta": [1.0, 0.5], "disc": [1.0, 0.5], "frames": [[1.0], [0.5, 0.2]]}

    with pytest.raises(InsufficientDataError):
        measure_decay_q(Short(), spec=q_series.spec)


def test_fit_decay_geometric():
    th = [0.5**j for j in range(10)]
    disc = [math.exp(-0.3 * j * j) for j in range(10)]
    frames = [[0.5**j * 0.9**h for h in range(j + 1)] for j in range(10)]
    rep = fit_decay(th, disc, frames, 0.3)
    assert rep.K_triangle == pytest.approx(0.5, rel=1e-6)
    assert rep.disc_quadratic == pytest.approx(0.3, rel=1e-6)


def test_grid_config_m():
    m = GridConfig().m
    assert m.size == 33 and m[0] == -8.0 and m[-1] == 8.0
