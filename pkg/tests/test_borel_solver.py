"""Tests for the Borel-plane problem: Euler expansions, validation and Picard solves."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgevrey.borel_solver import (
    apply_G,
    d_lk,
    euler_identity_holds,
    expand_euler_operators,
    measure_decay_b,
    validate_spec_b,
)
from qgevrey.errors import ConfigurationError
from qgevrey.pipelines import stage_b, stage_q
from qgevrey.scenario import _zero_forcing, load_scenario
from qgevrey.weighted_norms import RayGridFunction


# ---------------------------------------------------------------------------
# integer bookkeeping


@pytest.mark.parametrize("d,delta,k,expected", [(2, 1, 2, 2), (0, 1, 1, 0), (3, 2, 1, 1), (5, 1, 3, 5)])
def test_d_lk(d, delta, k, expected):
    assert d_lk(d, delta, k) == expected


def test_d_lk_negative():
    with pytest.raises(ConfigurationError):
        d_lk(0, 3, 1)


def test_euler_expansion_small_cases():
    assert expand_euler_operators(1, 4) == {}
    for k in range(1, 6):
        assert expand_euler_operators(2, k) == {1: Fraction(-(k + 1))}


def test_euler_expansion_delta3_k1():
    A = expand_euler_operators(3, 1)
    assert euler_identity_holds(3, 1, A, n_max=8)
    # T^6 d^3 = (T^2 d)^3 - 6 T (T^2 d)^2 + 6 T^2 (T^2 d)
    assert A == {1: Fraction(6), 2: Fraction(-6)}


@settings(max_examples=30, deadline=None)
@given(delta=st.integers(1, 7), k=st.integers(1, 5))
def test_euler_expansion_identity(delta, k):
    A = expand_euler_operators(delta, k)
    assert set(A) == set(range(1, delta))
    assert euler_identity_holds(delta, k, A, n_max=3 * delta + 5)


def test_euler_identity_detects_wrong_coefficient():
    A = expand_euler_operators(3, 2)
    A[1] += 1
    assert not euler_identity_holds(3, 2, A)


# ---------------------------------------------------------------------------
# validation


def test_reference_validates(reference):
    rep = validate_spec_b(reference.spec_b, reference.spec_q)
    assert rep.ok, rep.failed()
    # delta = (1, 2), k = 1: d_D = (2 - 1)(k + 1) = 2 and Delta_D = 2 - 2 + 1 = 1
    assert rep["dD_value"].passed and rep["DeltaD_value"].passed


def test_delta_not_increasing(variant):
    def edit(raw):
        raw["problem_b"]["delta"] = [1, 1]

    sc = variant(edit)
    rep = validate_spec_b(sc.spec_b, sc.spec_q)
    assert "delta_increasing" in rep.failed()


# ---------------------------------------------------------------------------
# the map and the series


def test_apply_G_zero_and_linear(reference, q_series, eps_ref):
    b = reference.spec_b
    e = b.directions[0][0]
    m = q_series.m
    g = q_series.grid.with_periods(q_series.grid.lo, q_series.top)
    rng = np.random.default_rng(3)
    shape = (1, g.size, m.size)
    decay = np.exp(-g.radii)[None, :, None] * np.exp(-np.abs(m))[None, None, :]
    v1 = RayGridFunction([e], g, m, decay * rng.normal(size=shape))
    v2 = RayGridFunction([e], g, m, decay * rng.normal(size=shape))
    zero = v1.zeros_like()
    assert np.all(apply_G(zero, b, reference.spec_q, eps_ref, zero).values == 0)
    a = 0.3 - 1.2j
    lhs = apply_G(v1 * a + v2, b, reference.spec_q, eps_ref, zero).values
    rhs = (apply_G(v1, b, reference.spec_q, eps_ref, zero) * a + apply_G(v2, b, reference.spec_q, eps_ref, zero)).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(np.abs(lhs))


def test_apply_G_rejects_zero_eps(reference, q_series):
    e = reference.spec_b.directions[0][0]
    g = q_series.grid.with_periods(q_series.grid.lo, q_series.top)
    v = RayGridFunction([e], g, q_series.m, np.zeros((1, g.size, q_series.m.size)))
    with pytest.raises(ZeroDivisionError):
        apply_G(v, reference.spec_b, reference.spec_q, 0.0, v)


def test_zero_upstream_gives_zero(reference_raw):
    raw = _zero_forcing(reference_raw)
    raw["problem_b"]["c00"]["quotient"] = [[0.0, 0.0]]
    sc = load_scenario(raw)
    res = stage_b(sc, stage_q(sc))
    for series in res.values():
        assert all(np.all(t.values == 0) for t in series.terms)
        assert measure_decay_b(series).degenerate


def test_reference_picard(b_results):
    for series in b_results.values():
        assert series.residual < 1e-7
        assert max(series.picard_ratios) <= 0.6
        assert not series.warnings


def test_reference_decay_b(b_results):
    rep = measure_decay_b(next(iter(b_results.values())))
    assert not rep.degenerate
    assert rep.K_triangle < 1.0


def test_csv_dump(b_results):
    series = next(iter(b_results.values()))
    head = series.to_csv().splitlines()[0]
    assert head == "direction_idx,r,m,re,im"
