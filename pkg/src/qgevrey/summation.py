"""Physical-space assembly, equation residuals and path-deformation differences.

Solutions are built as ``u(t, z) = F^{-1}[ L_k(w)(eps t, m) ](z)`` where
``L_k`` is the order-k Laplace transform along a ray and ``F^{-1}`` the
inverse Fourier transform on the m grid.  Differences of solutions attached
to neighbouring rays are computed twice: directly, and as the sum of the
arc and half-line pieces obtained by deforming one ray into the other.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._grid import RadialGrid, gauss_legendre
from ._poly import symbol_on_m
from .borel_solver import NeumannSeriesB, ProblemSpecB, solve_vk
from .errors import GeometryError
from .qconv_solver import GridConfig, NeumannSeriesQ, ProblemSpecQ, solve_wk
from .transforms import _check_damping, fourier_matrix, laplace_weights, select_direction

__all__ = [
    "arc_rule",
    "ray_laplace",
    "arc_laplace",
    "assemble_forcing",
    "forcing_by_quadrature",
    "assemble_U",
    "assemble_up",
    "assemble_Y",
    "assemble_y",
    "residual_q",
    "residual_b",
    "CocycleSample",
    "solve_cocycle_pair_q",
    "route_difference_q",
    "route_difference_b_cross",
    "route_difference_b_same",
    "cocycle_difference_q",
    "cocycle_difference_b",
    "probe_grid",
]


# ---------------------------------------------------------------------------
# quadrature pieces


def arc_rule(theta_a: float, theta_b: float, n: int = 32) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre angles and weights for ``int_{theta_a}^{theta_b} g(theta) dtheta``."""
    x, w = gauss_legendre(n)
    half = 0.5 * (theta_b - theta_a)
    return theta_a + half * (x + 1.0), half * w


def _kernel(u: np.ndarray, T: np.ndarray, k: int) -> np.ndarray:
    return np.exp(-((u[None, :] / T[:, None]) ** k))


def ray_laplace(values: np.ndarray, grid: RadialGrid, direction: float, k: int, T, delta1: float = 0.5,
                start: float | None = None) -> np.ndarray:
    """``k int w(u) exp(-(u/T)^k) du/u`` along a ray, from ``start`` (or 0) to the last node held.

    Parameters
    ----------
    values : ndarray, shape ``(n, n_m)``
        Samples on the leading ``n`` nodes of ``grid``.
    start : float, optional
        Panel-boundary radius where the integral starts; the piece from the
        origin is dropped.

    Returns
    -------
    ndarray, shape ``(len(T), n_m)``
    """
    T = np.atleast_1d(np.asarray(T, dtype=complex))
    n = values.shape[0]
    if start is None:
        E = laplace_weights(grid, direction, k, T, delta1, top=n)
        return E @ values
    for Ti in T:
        _check_damping(direction, Ti, k, delta1)
    sl, w = grid.segment_weights(start, grid.radii[n - 1])
    u = grid.radii[sl] * np.exp(1j * direction)
    E = k * w[None, :] * _kernel(u, T, k)
    return E @ values[sl]


def arc_laplace(values: np.ndarray, angles: np.ndarray, weights: np.ndarray, radius: float, k: int,
                T) -> np.ndarray:
    """``k int w(u) exp(-(u/T)^k) du/u`` along the arc ``u = radius e^{i theta}``.

    ``values`` has shape ``(n_angles, n_m)``; ``du/u = i dtheta``.
    """
    T = np.atleast_1d(np.asarray(T, dtype=complex))
    u = radius * np.exp(1j * np.asarray(angles))
    E = 1j * k * np.asarray(weights)[None, :] * _kernel(u, T, k)
    return E @ values


def probe_grid(t_values: Sequence[complex], z_values: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Tensor probe points ``(t, z)``; returns the two 1-D axes."""
    return np.asarray(t_values, dtype=complex), np.asarray(z_values, dtype=complex)


# ---------------------------------------------------------------------------
# forcing and q-solutions


def assemble_forcing(spec: ProblemSpecQ, t, z, eps: complex) -> np.ndarray:
    """Forcing ``f(t, z, eps)`` from the closed-form Laplace transform of the polynomial ``psi``.

    Returns an array of shape ``(len(t), len(z))``.
    """
    t = np.atleast_1d(np.asarray(t, dtype=complex))
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return spec.psi.physical(t[:, None], z[None, :], eps, spec.k)


def forcing_by_quadrature(spec: ProblemSpecQ, t, z, eps: complex, grid: GridConfig | None = None,
                          delta1: float = 0.5) -> np.ndarray:
    """Forcing by ray quadrature of ``psi`` and a trapezoid inverse Fourier transform.

    An independent route to :func:`assemble_forcing`.
    """
    gc = grid or GridConfig()
    rg = gc.radial(spec.dilation, 0)
    m = gc.m
    t = np.atleast_1d(np.asarray(t, dtype=complex))
    T = eps * t
    out = np.empty((t.size, np.size(z)), dtype=complex)
    A = fourier_matrix(m, np.atleast_1d(z))
    for i, Ti in enumerate(T):
        gam = float(np.angle(Ti))
        vals = spec.psi(rg.radii[:, None] * np.exp(1j * gam), m[None, :], eps)
        L = ray_laplace(vals, rg, gam, spec.k, Ti, delta1)
        out[i] = (L @ A.T)[0]
    return out


def _ray_index(directions: np.ndarray, T: complex, k: int, delta1: float, prefer: float | None) -> int:
    if prefer is not None:
        idx = np.flatnonzero(np.isclose(directions, prefer, atol=1e-12))
        if idx.size:
            _check_damping(prefer, T, k, delta1)
            return int(idx[0])
    return select_direction(directions, T, k, delta1)


def assemble_U(series: NeumannSeriesQ, T, delta1: float = 0.5, direction: float | None = None,
               dilate: float = 1.0) -> np.ndarray:
    """Fourier-side solution ``L_k(w)(dilate T, m)`` for each ``T``; shape ``(len(T), n_m)``.

    The ray is ``direction`` when given, otherwise the stored ray of maximal damping.
    """
    T = np.atleast_1d(np.asarray(T, dtype=complex)) * dilate
    w = series.partial_sum
    n = _laplace_top(series.grid, w.valid)
    out = np.empty((T.size, series.m.size), dtype=complex)
    for i, Ti in enumerate(T):
        d = _ray_index(series.directions, Ti, series.spec.k, delta1, direction)
        out[i] = ray_laplace(w.values[d, :n], series.grid, float(series.directions[d]), series.spec.k, Ti,
                             delta1)[0]
    return out


def _laplace_top(grid: RadialGrid, valid: int) -> int:
    """Largest panel-aligned node count within ``valid``."""
    n = ((valid - 1) // grid.degree) * grid.degree + 1
    return max(n, 1)


def assemble_up(series: NeumannSeriesQ, t, z, delta1: float = 0.5, direction: float | None = None) -> np.ndarray:
    """``u_p(t, z, eps)`` on the tensor grid ``t x z``; shape ``(len(t), len(z))``."""
    t = np.atleast_1d(np.asarray(t, dtype=complex))
    U = assemble_U(series, series.eps * t, delta1, direction)
    return U @ fourier_matrix(series.m, np.atleast_1d(z)).T


# ---------------------------------------------------------------------------
# Borel solutions


def assemble_Y(series: NeumannSeriesB, T, k: int, delta1: float = 0.5) -> np.ndarray:
    """``L_k(v)(T, m)`` along the Borel ray of the series; shape ``(len(T), n_m)``."""
    T = np.atleast_1d(np.asarray(T, dtype=complex))
    v = series.partial_sum
    return ray_laplace(v.values[0], series.grid, float(series.directions[0]), k, T, delta1)


def assemble_y(series: NeumannSeriesB, t, z, k: int, delta1: float = 0.5) -> np.ndarray:
    """``y(t, z, eps)`` on the tensor grid ``t x z``."""
    t = np.atleast_1d(np.asarray(t, dtype=complex))
    Y = assemble_Y(series, series.eps * t, k, delta1)
    return Y @ fourier_matrix(series.m, np.atleast_1d(z)).T


def m_decay_constant(Y: np.ndarray, m: np.ndarray, beta: float, mu: float) -> float:
    """Smallest ``C`` with ``|Y(m)| <= C exp(-beta |m|) (1 + |m|)^{-mu}`` on the samples."""
    return float(np.max(np.abs(Y) * np.exp(beta * np.abs(m)) * (1 + np.abs(m)) ** mu))


# ---------------------------------------------------------------------------
# residuals


def _nested(F: Callable[[np.ndarray], np.ndarray], t: np.ndarray, h: np.ndarray, order: int,
            outer: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply ``(outer(t) d/dt)^order`` to ``F`` with centred differences of step ``h``."""
    if order == 0:
        return F(t)

    def G(s):
        return _nested(F, s, h, order - 1, outer)

    d = (G(t + h) - G(t - h)) / (2.0 * h[:, None])
    return outer(t)[:, None] * d


def _plain_derivative(F, t: np.ndarray, h: np.ndarray, order: int) -> np.ndarray:
    """``d^order F / dt^order`` by the centred stencil of second order."""
    if order == 0:
        return F(t)
    if order == 1:
        return (F(t + h) - F(t - h)) / (2.0 * h[:, None])
    if order == 2:
        return (F(t + h) - 2.0 * F(t) + F(t - h)) / (h[:, None] ** 2)

    def G(s):
        return _plain_derivative(F, s, h, order - 2)
    return (G(t + h) - 2.0 * G(t) + G(t - h)) / (h[:, None] ** 2)


def _fd_steps(t: np.ndarray, rel_step: float) -> np.ndarray:
    return rel_step * t


def residual_q(series: NeumannSeriesQ, t, z, rel_step: float = 1e-3, delta1: float = 0.5,
               direction: float | None = None) -> float:
    """Relative residual of the physical q-equation at the probes ``t x z``.

    ``z``-derivatives are Fourier multipliers; the Euler operators in ``t``
    use nested centred differences with steps ``rel_step * t``.  The value
    is ``sup |residual| / sup |Q(d_z) u|``.
    """
    spec, eps, m = series.spec, series.eps, series.m
    k = spec.k
    t = np.atleast_1d(np.asarray(t, dtype=complex))
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    h = _fd_steps(t, rel_step)
    A = fourier_matrix(m, z).T

    def U(s, dil=1.0):
        return assemble_U(series, eps * s, delta1, direction, dilate=dil)

    Qm = symbol_on_m(spec.Q, m)
    RD = symbol_on_m(spec.R[-1], m)
    lhs = (Qm * U(t)) @ A
    euler = lambda s: s ** (k + 1)  # noqa: E731
    top = eps ** (k * spec.d[-1]) * (RD * _nested(U, t, h, spec.d[-1], euler)) @ A
    rhs = top
    for l in range(spec.D - 1):
        Rl = symbol_on_m(spec.R[l], m)
        cz = spec.C[l].inverse_fourier(z, eps)
        inner = _nested(lambda s: U(s, spec.dilation), t, h, spec.d[l], euler)
        rhs = rhs + eps ** spec.Delta[l] * ((Rl * inner) @ A) * cz[None, :]
    f = assemble_forcing(spec, t, z, eps)
    res = lhs - rhs - f
    scale = max(np.max(np.abs(lhs)), np.max(np.abs(f)))
    return float(np.max(np.abs(res)) / scale) if scale > 0 else float(np.max(np.abs(res)))


def residual_b(series_b: NeumannSeriesB, series_q: NeumannSeriesQ, spec_b: ProblemSpecB, t, z,
               rel_step: float = 1e-3, delta1: float = 0.5) -> float:
    """Relative residual of the physical Borel-side equation at the probes ``t x z``.

    The q-solution entering the forcing is assembled on the Borel ray, which
    lies in the sector of ``series_q``.
    """
    specQ = series_q.spec
    k, eps, m = specQ.k, series_b.eps, series_b.m
    t = np.atleast_1d(np.asarray(t, dtype=complex))
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    h = _fd_steps(t, rel_step)
    A = fourier_matrix(m, z).T

    def Y(s):
        return assemble_Y(series_b, eps * s, k, delta1)

    Qm = symbol_on_m(spec_b.Q, m)
    lhs = (Qm * _plain_derivative(Y, t, h, 1)) @ A
    rhs = np.zeros_like(lhs)
    for l in range(spec_b.D):
        Rl = symbol_on_m(spec_b.R[l + 1], m)
        term = (Rl * _plain_derivative(Y, t, h, spec_b.delta[l])) @ A
        rhs = rhs + eps ** spec_b.Delta[l] * t[:, None] ** spec_b.d[l] * term
    c00 = complex(spec_b.c00(eps))
    if c00 != 0 and not spec_b.C00.is_zero:
        R0 = symbol_on_m(spec_b.R[0], m)
        rhs = rhs + c00 * spec_b.C00.inverse_fourier(z, eps)[None, :] * ((R0 * Y(t)) @ A)
    up = assemble_up(series_q, t, z, delta1, direction=float(series_b.directions[0]))
    rhs = rhs + complex(spec_b.cF(eps)) * up
    res = lhs - rhs
    scale = np.max(np.abs(lhs))
    return float(np.max(np.abs(res)) / scale) if scale > 0 else float(np.max(np.abs(res)))


# ---------------------------------------------------------------------------
# path-deformation differences


@dataclass
class CocycleSample:
    """Sup-norm of a solution difference over a probe grid, for a list of ``eps``."""

    eps: np.ndarray
    delta_sup: np.ndarray
    tag: str
    route_error: np.ndarray = field(default_factory=lambda: np.zeros(0))
    pieces: list = field(default_factory=list)

    @property
    def max_route_error(self) -> float:
        return float(np.max(self.route_error)) if self.route_error.size else 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["eps_mod", "eps_arg", "delta_sup", "tag"])
        for e, d in zip(self.eps, self.delta_sup):
            wr.writerow([repr(float(abs(e))), repr(float(np.angle(e))), repr(float(d)), self.tag])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "CocycleSample":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            return cls(np.zeros(0, dtype=complex), np.zeros(0), "")
        eps = np.array([float(r["eps_mod"]) * np.exp(1j * float(r["eps_arg"])) for r in rows])
        return cls(eps, np.array([float(r["delta_sup"]) for r in rows]), rows[0]["tag"])


def _disc_radius(spec: ProblemSpecQ, j: int) -> float:
    ff = spec.frames
    return ff.q_check * ff.mu0_h(j)


def solve_cocycle_pair_q(spec: ProblemSpecQ, eps: complex, p: int, grid: GridConfig, j_max: int,
                         arc_nodes: int = 32, same_radius: float | None = None
                         ) -> tuple[NeumannSeriesQ, NeumannSeriesQ]:
    """Series on sectors ``p`` and ``p + 1`` with the arc slices needed by the decompositions.

    Sector ``p`` also keeps its terms on the arc between the rays ``gamma_p``
    (its upper ray) and ``gamma_{p+1}`` (the lower ray of sector ``p + 1``)
    at the disc radii, and, when ``same_radius`` is given, on the arc between
    its own two rays at that radius.
    """
    nxt = (p + 1) % spec.n_sectors
    ga = spec.rays(p)[1]
    gb = spec.frames.next_direction(p) - spec.ray_offset
    extra = {"arc": (arc_rule(ga, gb, arc_nodes)[0], lambda j: _disc_radius(spec, j))}
    if same_radius is not None:
        lo, hi = spec.rays(p)
        extra["same"] = (arc_rule(lo, hi, arc_nodes)[0], lambda j: same_radius)
    sp = solve_wk(spec, eps, p, j_max=j_max, grid=grid, extra=extra, stop_early=False)
    sn = solve_wk(spec, eps, nxt, j_max=j_max, grid=grid, stop_early=False)
    return sp, sn


def _upper_ray(spec: ProblemSpecQ, p: int) -> float:
    return spec.rays(p)[1]


def _lower_ray(spec: ProblemSpecQ, p: int) -> float:
    return spec.rays(p)[0]


def route_difference_q(sp: NeumannSeriesQ, sn: NeumannSeriesQ, T, arc_nodes: int = 32,
                       delta1: float = 0.5) -> tuple[np.ndarray, np.ndarray, dict]:
    """``U_{p+1} - U_p`` at ``T`` directly and by the arc and ladder decomposition.

    Returns ``(direct, decomposed, pieces)`` with Fourier-side arrays of shape
    ``(len(T), n_m)``; ``pieces`` sums the arc, ladder and tail parts separately.
    """
    spec = sp.spec
    k = spec.k
    T = np.atleast_1d(np.asarray(T, dtype=complex))
    ga, gb = _upper_ray(spec, sp.p), _lower_ray(spec, sn.p)
    gb_unwrapped = spec.frames.next_direction(sp.p) - spec.ray_offset
    angles, wts = arc_rule(ga, gb_unwrapped, arc_nodes)
    grid = sp.grid
    n_terms = min(len(sp), len(sn))
    n = _laplace_top(grid, min(t.valid for t in sp.terms[:n_terms] + sn.terms[:n_terms]))
    ff = spec.frames
    direct = np.zeros((T.size, sp.m.size), dtype=complex)
    pieces = {"arc": np.zeros_like(direct), "ladder": np.zeros_like(direct), "tail": np.zeros_like(direct)}
    outer = ff.q_hat * ff.mu1
    for j in range(n_terms):
        wa = sp.term_on(j, ga)[:n]
        wb = sn.term_on(j, gb)[:n]
        direct += ray_laplace(wb, grid, gb, k, T, delta1) - ray_laplace(wa, grid, ga, k, T, delta1)
        rho = _disc_radius(spec, j)
        arc_vals = sp.slices["arc"][j][:, -1]
        pieces["arc"] += arc_laplace(arc_vals, angles, wts, rho, k, T)
        for h in range(j + 1):
            r0, r1 = _disc_radius(spec, h), ff.q_hat * ff.mu1_h(h)
            pieces["ladder"] += _segment(wb, grid, gb, k, T, r0, r1, delta1) - _segment(wa, grid, ga, k, T, r0,
                                                                                        r1, delta1)
        pieces["tail"] += ray_laplace(wb, grid, gb, k, T, delta1, start=outer) - ray_laplace(
            wa, grid, ga, k, T, delta1, start=outer)
    decomposed = pieces["arc"] + pieces["ladder"] + pieces["tail"]
    return direct, decomposed, pieces


def _segment(vals: np.ndarray, grid: RadialGrid, direction: float, k: int, T: np.ndarray, r0: float, r1: float,
             delta1: float) -> np.ndarray:
    sl, w = grid.segment_weights(r0, r1)
    for Ti in T:
        _check_damping(direction, Ti, k, delta1)
    u = grid.radii[sl] * np.exp(1j * direction)
    return (k * w[None, :] * _kernel(u, T, k)) @ vals[sl]


def route_difference_b_cross(bp: NeumannSeriesB, bn: NeumannSeriesB, spec: ProblemSpecQ, T,
                             arc_nodes: int = 32, delta1: float = 0.5) -> tuple[np.ndarray, np.ndarray, dict]:
    """``Y`` on the lower ray of sector ``p + 1`` minus ``Y`` on the upper ray of sector ``p``.

    ``bp`` must carry the ``"arc"`` slices.  Per term ``j`` the decomposition
    is the arc at the disc radius plus the half-line tails beyond it.
    """
    k = spec.k
    T = np.atleast_1d(np.asarray(T, dtype=complex))
    ga, gb = float(bp.directions[0]), float(bn.directions[0])
    gb_unwrapped = ga + float(np.mod(gb - ga, 2 * math.pi))
    angles, wts = arc_rule(ga, gb_unwrapped, arc_nodes)
    grid = bp.grid
    J = min(len(bp), len(bn))
    direct = np.zeros((T.size, bp.m.size), dtype=complex)
    pieces = {"arc": np.zeros_like(direct), "tail": np.zeros_like(direct)}
    for j in range(J):
        va, vb = bp.terms[j].values[0], bn.terms[j].values[0]
        direct += ray_laplace(vb, grid, gb, k, T, delta1) - ray_laplace(va, grid, ga, k, T, delta1)
        rho = _disc_radius(spec, j)
        pieces["arc"] += arc_laplace(bp.slices["arc"][j][:, -1], angles, wts, rho, k, T)
        pieces["tail"] += ray_laplace(vb, grid, gb, k, T, delta1, start=rho) - ray_laplace(
            va, grid, ga, k, T, delta1, start=rho)
    return direct, pieces["arc"] + pieces["tail"], pieces


def route_difference_b_same(b0: NeumannSeriesB, b1: NeumannSeriesB, spec: ProblemSpecQ, radius: float, T,
                            arc_nodes: int = 32, delta1: float = 0.5) -> tuple[np.ndarray, np.ndarray, dict]:
    """``Y`` on the upper minus the lower Borel ray of one sector.

    ``b0`` must carry the ``"same"`` slices at ``radius``.  The decomposition
    is one arc of that radius plus the two tails.
    """
    k = spec.k
    T = np.atleast_1d(np.asarray(T, dtype=complex))
    ga, gb = float(b0.directions[0]), float(b1.directions[0])
    angles, wts = arc_rule(ga, gb, arc_nodes)
    grid = b0.grid
    va, vb = b0.partial_sum.values[0], b1.partial_sum.values[0]
    direct = ray_laplace(vb, grid, gb, k, T, delta1) - ray_laplace(va, grid, ga, k, T, delta1)
    arc_vals = sum(s[:, -1] for s in b0.slices["same"])
    arc = arc_laplace(arc_vals, angles, wts, radius, k, T)
    tail = ray_laplace(vb, grid, gb, k, T, delta1, start=radius) - ray_laplace(va, grid, ga, k, T, delta1,
                                                                               start=radius)
    return direct, arc + tail, {"arc": arc, "tail": tail}


def _route_error(direct_phys: np.ndarray, dec_phys: np.ndarray) -> float:
    scale = np.max(np.abs(direct_phys))
    err = np.max(np.abs(direct_phys - dec_phys))
    return float(err / scale) if scale > 0 else float(err)


def cocycle_difference_q(spec: ProblemSpecQ, eps_list, p: int, t_probes, z_probes, grid: GridConfig | None = None,
                         j_max: int = 24, arc_nodes: int = 32, delta1: float = 0.5) -> CocycleSample:
    """``sup |u_{p+1} - u_p|`` over the probe grid for each ``eps`` (q-Gevrey regime).

    Raises
    ------
    DirectionError
        An ``eps`` for which a ray lacks the required damping at some probe.
    """
    gc = grid or GridConfig()
    t = np.atleast_1d(np.asarray(t_probes, dtype=complex))
    z = np.atleast_1d(np.asarray(z_probes, dtype=complex))
    sup, errs, pieces = [], [], []
    for eps in np.atleast_1d(eps_list):
        sp, sn = solve_cocycle_pair_q(spec, eps, p, gc, j_max, arc_nodes)
        A = fourier_matrix(sp.m, z).T
        direct, dec, pc = route_difference_q(sp, sn, eps * t, arc_nodes, delta1)
        dphys, bphys = direct @ A, dec @ A
        sup.append(float(np.max(np.abs(dphys))))
        errs.append(_route_error(dphys, bphys))
        pieces.append({name: float(np.max(np.abs(v @ A))) for name, v in pc.items()})
    return CocycleSample(np.atleast_1d(np.asarray(eps_list, dtype=complex)), np.array(sup), "cross-p",
                         np.array(errs), pieces)


def check_continuation_region(spec_b: ProblemSpecB, spec_q: ProblemSpecQ, radius: float, m: np.ndarray) -> None:
    """Same-sector deformation needs every Borel root beyond twice the arc radius."""
    roots = [abs(z) for mm in m for z in spec_b.roots(mm, spec_q.k)]
    if roots and min(roots) <= 2.0 * radius:
        raise GeometryError(f"a Borel root of modulus {min(roots):.4g} lies within {2 * radius:.4g}")


def cocycle_difference_b(spec_q: ProblemSpecQ, spec_b: ProblemSpecB, eps_list, p: int, t_probes, z_probes,
                         tag: str, grid: GridConfig | None = None, j_max: int = 24, arc_nodes: int = 32,
                         radius: float | None = None, tol: float = 1e-10, delta1: float = 0.5) -> CocycleSample:
    """``sup |y - y'|`` over the probe grid for a same-sector (``tag="same-p"``) or
    neighbouring-sector (``tag="cross-p"``) pair of Borel rays.

    Raises
    ------
    GeometryError
        Same-sector case whose continuation disc of radius ``2 radius`` holds a root.
    """
    if tag not in ("same-p", "cross-p"):
        raise ValueError("tag must be 'same-p' or 'cross-p'")
    gc = grid or GridConfig()
    t = np.atleast_1d(np.asarray(t_probes, dtype=complex))
    z = np.atleast_1d(np.asarray(z_probes, dtype=complex))
    if tag == "same-p":
        if radius is None:
            raise ValueError("same-p differences need the arc radius")
        check_continuation_region(spec_b, spec_q, radius, gc.m)
    sup, errs, pieces = [], [], []
    for eps in np.atleast_1d(eps_list):
        if tag == "same-p":
            sp = solve_wk(spec_q, eps, p, j_max=j_max, grid=gc, stop_early=False,
                          extra={"same": (arc_rule(*spec_q.rays(p), arc_nodes)[0], lambda j: radius)})
            b0 = solve_vk(spec_b, spec_q, eps, 0, p, sp, tol, slices={"same": sp.slices["same"]})
            b1 = solve_vk(spec_b, spec_q, eps, 1, p, sp, tol)
            direct, dec, pc = route_difference_b_same(b0, b1, spec_q, radius, eps * t, arc_nodes, delta1)
        else:
            sp, sn = solve_cocycle_pair_q(spec_q, eps, p, gc, j_max, arc_nodes)
            nxt = sn.p
            bp = solve_vk(spec_b, spec_q, eps, 1, p, sp, tol, slices={"arc": sp.slices["arc"]})
            bn = solve_vk(spec_b, spec_q, eps, 0, nxt, sn, tol)
            direct, dec, pc = route_difference_b_cross(bp, bn, spec_q, eps * t, arc_nodes, delta1)
        A = fourier_matrix(gc.m, z).T
        dphys, bphys = direct @ A, dec @ A
        sup.append(float(np.max(np.abs(dphys))))
        errs.append(_route_error(dphys, bphys))
        pieces.append({name: float(np.max(np.abs(v @ A))) for name, v in pc.items()})
    return CocycleSample(np.atleast_1d(np.asarray(eps_list, dtype=complex)), np.array(sup), tag, np.array(errs),
                         pieces)
