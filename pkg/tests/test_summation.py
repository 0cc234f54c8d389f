"""Tests for physical-space assembly, residuals and the two-route cocycle differences."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from qgevrey.qconv_solver import solve_wk
from qgevrey.scenario import _zero_forcing, load_scenario
from qgevrey.summation import (
    CocycleSample,
    arc_rule,
    assemble_forcing,
    assemble_up,
    assemble_y,
    cocycle_difference_b,
    cocycle_difference_q,
    forcing_by_quadrature,
    residual_b,
    residual_q,
)
from qgevrey.transforms import select_direction

Z = np.linspace(-1.0, 1.0, 5)


@pytest.fixture(scope="module")
def zero_scenario(reference_raw):
    raw = _zero_forcing(reference_raw)
    raw["problem_b"]["c00"]["quotient"] = [[0.0, 0.0]]
    return load_scenario(raw)


# ---------------------------------------------------------------------------
# forcing


def test_forcing_zero(zero_scenario):
    assert np.all(assemble_forcing(zero_scenario.spec_q, [0.5, 1.0], Z, 0.1) == 0)


def test_forcing_single_term(variant):
    def edit(raw):
        raw["problem_q"]["psi"]["taylor"] = [[0.7, -0.2]]

    spec = variant(edit).spec_q
    eps, t = 0.2 * np.exp(0.3j), np.array([0.5, 1.0])
    f = assemble_forcing(spec, t, Z, eps)
    a1 = 0.7 - 0.2j
    expected = math.gamma(1 / spec.k) * a1 * (eps * t)[:, None] * np.exp(-Z**2 / 2)[None, :]
    np.testing.assert_allclose(f, expected, rtol=1e-14)
    np.testing.assert_allclose(forcing_by_quadrature(spec, t, Z, eps), f, rtol=1e-8, atol=1e-12)


def test_forcing_reference_routes_agree(reference, eps_ref):
    t = reference.t_probes()
    a = assemble_forcing(reference.spec_q, t, Z, eps_ref)
    b = forcing_by_quadrature(reference.spec_q, t, Z, eps_ref)
    assert np.max(np.abs(a - b)) <= 1e-8 * np.max(np.abs(a))


@settings(max_examples=25, deadline=None)
@given(r=st.floats(0.0, 2.0), a=st.floats(-math.pi, math.pi), s=st.floats(0.0, 1.0))
def test_forcing_bounded_on_polydisc(reference, r, a, s):
    t = r * np.exp(1j * a)
    f = assemble_forcing(reference.spec_q, [t], Z, 2.0 * s)
    assert np.all(np.isfinite(f))
    # |Gamma(1) a1 T + Gamma(2) a2 T^2| with |T| <= 4
    assert np.max(np.abs(f)) <= 4 + 0.25 * 16


# ---------------------------------------------------------------------------
# q-solutions


def test_up_zero(zero_scenario):
    s = solve_wk(zero_scenario.spec_q, 0.1, 0, j_max=4)
    assert np.all(assemble_up(s, [0.5], Z) == 0)


def test_up_no_coupling_by_quadrature(variant, eps_ref):
    def edit(raw):
        raw["problem_q"]["C"][0]["amplitude"] = [0.0, 0.0]

    sc = variant(edit)
    spec = sc.spec_q
    s = solve_wk(spec, eps_ref, 0, grid=sc.grid)
    t = 0.7
    T = eps_ref * t
    u = assemble_up(s, [t], Z)[0]
    gam = float(s.directions[select_direction(s.directions, T, spec.k)])
    a = spec.psi.taylor
    e = np.exp(1j * gam)

    def radial(r, part):
        x = r * e
        v = spec.k * (a[0] * x + a[1] * x**2) / (1 - (spec.k * x**spec.k) ** spec.d[-1]) \
            * np.exp(-((x / T) ** spec.k)) / r
        return v.real if part == 0 else v.imag

    L = complex(*(integrate.quad(radial, 0, 60, args=(p,), epsabs=0, epsrel=1e-12, limit=400)[0] for p in (0, 1)))
    for zi, ui in zip(Z, u):
        G = integrate.quad(lambda m: math.exp(-m * m / 2) * math.cos(zi * m), -40, 40, epsrel=1e-13)[0]
        assert abs(ui - L * G / math.sqrt(2 * math.pi)) <= 1e-7 * abs(ui)


def test_up_finite_on_probes(reference, q_series):
    u = assemble_up(q_series, reference.t_probes(), Z)
    assert np.all(np.isfinite(u)) and np.max(np.abs(u)) > 0


def test_residual_q_reference(reference, q_series):
    assert residual_q(q_series, reference.t_probes(), Z) < 1e-4


def test_residual_q_zero(zero_scenario):
    s = solve_wk(zero_scenario.spec_q, 0.1, 0, j_max=4)
    assert residual_q(s, [0.5, 1.0], Z) == 0


# ---------------------------------------------------------------------------
# Borel solutions


def test_y_vanishes_at_origin(reference, b_results):
    b = next(iter(b_results.values()))
    y = assemble_y(b, [1e-9, 0.5], Z, reference.spec_q.k)
    assert np.max(np.abs(y[0])) <= 1e-6 * np.max(np.abs(y[1]))


def test_residual_b_reference(reference, q_results, b_results):
    for (p, _), b in b_results.items():
        r = residual_b(b, q_results[p]["series"], reference.spec_b, reference.t_probes(), Z, rel_step=2.5e-4)
        assert r < 1e-3


# ---------------------------------------------------------------------------
# cocycles


def test_arc_rule_exact_for_trig():
    th, w = arc_rule(0.2, 1.3, 16)
    assert np.sum(w) == pytest.approx(1.1, abs=1e-14)
    assert np.sum(w * np.cos(th)) == pytest.approx(math.sin(1.3) - math.sin(0.2), abs=1e-14)


def test_cocycle_zero_series(zero_scenario):
    sc = zero_scenario
    cs = cocycle_difference_q(sc.spec_q, sc.eps_cross(0, 2), 0, sc.t_probes(), sc.z_probes(), sc.grid, 6, 8)
    assert np.all(cs.delta_sup == 0)
    cs = cocycle_difference_b(sc.spec_q, sc.spec_b, sc.eps_same(0, 2), 0, sc.t_probes(), sc.z_probes(),
                              "same-p", sc.grid, 6, 8, sc.continuation_radius)
    assert np.all(cs.delta_sup == 0)


def test_cocycle_q_two_routes(reference):
    sc = reference
    r = sc.run
    eps = sc.eps_cross(0)[:3:2]
    cs = cocycle_difference_q(sc.spec_q, eps, 0, sc.t_probes(), sc.z_probes(), sc.grid, r.j_max, r.arc_nodes)
    assert cs.max_route_error < 1e-6
    assert cs.delta_sup[1] < cs.delta_sup[0]


def test_cocycle_csv_roundtrip():
    cs = CocycleSample(np.array([0.1 + 0.1j, 0.01j]), np.array([1e-3, 1e-9]), "q", np.array([1e-12, 2e-13]))
    back = CocycleSample.from_csv(cs.to_csv())
    # eps is stored as modulus and argument
    np.testing.assert_allclose(back.eps, cs.eps, rtol=1e-15, atol=1e-17)
    np.testing.assert_array_equal(back.delta_sup, cs.delta_sup)
    assert back.tag == "q"
