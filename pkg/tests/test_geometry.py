"""Tests for sectors, coverings, frames and symbol roots."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgevrey.errors import ConfigurationError, DegenerateSymbolError, InvalidSymbolError
from qgevrey.geometry import (
    Annulus,
    Disc,
    FrameFamily,
    GoodCovering,
    QSymbol,
    Sector,
    Union,
    angular_offset,
    build_frames,
    check_covering_root_condition,
    compute_roots_b,
    compute_roots_q,
    pm_lower_bound_check,
    root_separation,
)


def _family(directions=(0.0, 2 * math.pi / 3, 4 * math.pi / 3), half=0.3):
    # q_hat * mu1 = q**delta * q_check * mu0 with q**delta = 2
    return FrameFamily(0.8, 1.25, 1.152, 0.9, 2.0, 1.0, directions, half)


# ---------------------------------------------------------------------------
# roots


def test_roots_q_linear():
    roots = compute_roots_q(1.0, 1.0, 1, 1)
    assert len(roots) == 1
    assert abs(roots[0] - 1.0) < 1e-14


def test_roots_q_quartic():
    roots = np.array(compute_roots_q(1.0, 1.0, 2, 2))
    assert roots.size == 4
    np.testing.assert_allclose(np.abs(roots), 4.0 ** -0.25, rtol=1e-12)
    angles = np.sort(np.mod(np.angle(roots), 2 * np.pi))
    np.testing.assert_allclose(angles, [0, np.pi / 2, np.pi, 3 * np.pi / 2], atol=1e-12)
    # back-substitution
    np.testing.assert_allclose(1.0 - (2 * roots**2) ** 2, 0, atol=1e-12)


def test_roots_q_square_root_of_two():
    roots = sorted(compute_roots_q(2.0, 1.0, 1, 2), key=lambda r: r.real)
    np.testing.assert_allclose(roots, [-math.sqrt(2), math.sqrt(2)], atol=1e-12)


@pytest.mark.parametrize("Q,RD", [(0.0, 1.0), (1.0, 0.0)])
def test_roots_q_rejects_zero_symbol(Q, RD):
    with pytest.raises(InvalidSymbolError):
        compute_roots_q(Q, RD, 1, 1)


def test_roots_b_examples():
    np.testing.assert_allclose(compute_roots_b(1.0, 1.0, 1, 2), [1.0], atol=1e-14)
    roots = sorted(compute_roots_b(1.0, 1.0, 2, 2), key=lambda r: r.real)
    np.testing.assert_allclose(np.abs(roots), 2 ** -0.5, rtol=1e-12)
    np.testing.assert_allclose(np.sum(roots), 0, atol=1e-12)


def test_roots_b_errors():
    with pytest.raises(InvalidSymbolError):
        compute_roots_b(0.0, 1.0, 1, 2)
    with pytest.raises(DegenerateSymbolError):
        compute_roots_b(1.0, 1.0, 1, 1)


@settings(max_examples=40, deadline=None)
@given(
    re=st.floats(0.2, 5), im=st.floats(-5, 5),
    k=st.integers(1, 3), dD=st.integers(1, 3),
)
def test_roots_q_back_substitution(re, im, k, dD):
    Q = complex(re, im)
    roots = np.array(compute_roots_q(Q, 1.0, k, dD))
    assert roots.size == k * dD
    assert np.max(np.abs(Q - (k * roots**k) ** dD)) < 1e-9 * abs(Q)


# ---------------------------------------------------------------------------
# domains and separation


def test_separation_disc():
    rep = root_separation(Disc(0.1), [1.0], n_ang=128, n_rad=64)
    assert not rep.violation
    assert rep.M1 >= 0.9 / 1.1 - 1e-12
    assert rep.M1 < 0.9 / 1.1 + 1e-3
    assert rep.M2 >= 0.9 - 1e-12


def test_separation_negative_ray():
    rep = root_separation(Sector(math.pi, 0.0), [1.0])
    # |tau - 1| / (1 + |tau|) equals 1 on the whole negative axis
    assert rep.M1 == pytest.approx(1.0, abs=1e-12)


def test_separation_root_inside():
    rep = root_separation(Disc(2.0), [1.0])
    assert rep.violation
    assert (rep.M1, rep.M2) == (0.0, 0.0)


def test_pm_lower_bound_disc():
    # the exponent k d_D - 1 vanishes here, so the ratio is |2 - tau| itself
    rep = pm_lower_bound_check(QSymbol((2.0,), (1.0,), 1, 1), Disc(0.5), [0.0], n_ang=256, n_rad=64)
    assert not rep.violation
    assert rep.c_emp == pytest.approx(1.5, abs=1e-9)
    assert abs(rep.argmin_tau - 0.5) < 1e-9


def test_pm_lower_bound_errors_and_violation():
    sym = QSymbol((2.0,), (1.0,), 1, 1)
    with pytest.raises(ConfigurationError):
        pm_lower_bound_check(sym, Disc(0.5), [])
    assert pm_lower_bound_check(sym, Disc(3.0), [0.0]).violation


@settings(max_examples=50, deadline=None)
@given(theta=st.floats(-10, 10), d=st.floats(-10, 10))
def test_angular_offset_range(theta, d):
    off = float(angular_offset(theta, d))
    assert -math.pi - 1e-12 <= off <= math.pi + 1e-12
    assert math.isclose(math.cos(off), math.cos(theta - d), abs_tol=1e-9)


@settings(max_examples=50, deadline=None)
@given(r=st.floats(0.01, 5), a=st.floats(-math.pi, math.pi), f=st.floats(0.2, 5))
def test_scaling_membership(r, a, f):
    dom = Union((Sector(0.3, 0.5, 0.5, 2.0), Annulus(3.0, 4.0), Disc(0.2)))
    tau = r * np.exp(1j * a)
    assert bool(dom.scaled(f).contains(f * tau)) == bool(dom.contains(tau))


# ---------------------------------------------------------------------------
# coverings


def test_good_covering_reference_shape():
    dirs = (math.pi / 3, math.pi, 5 * math.pi / 3)
    cov = GoodCovering(tuple(Sector(d, 1.2, 0.0, 2.0) for d in dirs))
    assert cov.eps0 == 2.0
    assert all(cov.overlap(p) for p in range(3))


def test_good_covering_gap_rejected():
    dirs = (0.0, math.pi)
    with pytest.raises(ConfigurationError):
        GoodCovering(tuple(Sector(d, 1.0, 0.0, 1.0) for d in dirs))


def test_good_covering_triple_overlap_rejected():
    dirs = (0.0, 2 * math.pi / 3, 4 * math.pi / 3)
    with pytest.raises(ConfigurationError):
        GoodCovering(tuple(Sector(d, 2.5, 0.0, 1.0) for d in dirs))


# ---------------------------------------------------------------------------
# frames


def test_frame_family_constraint():
    _family().validate()
    bad = FrameFamily(0.8, 1.25, 1.2, 0.9, 2.0, 1.0, (0.0, 1.0), 0.3)
    with pytest.raises(ConfigurationError):
        bad.validate()


def test_frames_concatenate():
    ff = _family()
    for h in range(5):
        assert ff.q_hat * ff.mu1_h(h + 1) == pytest.approx(ff.q_check * ff.mu0_h(h), rel=1e-12)


def test_frame_level_zero_radii_and_boundary_point():
    ff = _family()
    fs = build_frames(ff, 0, range(3), 2)
    arcs = fs.frames[0].atoms()
    radii = sorted((a.r_min, a.r_max) for a in arcs[:2])
    assert radii[0] == pytest.approx((ff.q_check * ff.mu0, ff.mu0))
    assert radii[1] == pytest.approx((ff.mu1, ff.q_hat * ff.mu1))
    assert fs.frames[0].contains(ff.mu1 * np.exp(1j * ff.directions[0]))


def test_frame_scaling_oracle():
    ff = _family()
    fs = build_frames(ff, 0, range(2), 1)
    rng = np.random.default_rng(0)
    r = rng.uniform(0.2, 1.0, 100)
    a = rng.uniform(-math.pi, math.pi, 100)
    tau = r * np.exp(1j * a)
    np.testing.assert_array_equal(fs.frames[1].contains(tau), fs.frames[0].contains(ff.dilation * tau))


def test_frame_bad_index():
    with pytest.raises(ConfigurationError):
        build_frames(_family(), 5, range(1), 0)


def test_covering_root_condition():
    dirs = (math.pi / 4, 3 * math.pi / 4, 5 * math.pi / 4, 7 * math.pi / 4)
    ff = FrameFamily(0.8, 1.25, 1.152, 0.9, 2.0, 1.0, dirs, 0.2)
    roots = compute_roots_q(1.0, 1.0, 2, 2)
    assert check_covering_root_condition(ff, [roots])
    # more directions than roots
    assert not check_covering_root_condition(ff, [compute_roots_q(1.0, 1.0, 1, 2)])
    with pytest.raises(ConfigurationError):
        check_covering_root_condition(_family(directions=(0.0,)), [roots])
