"""Neumann-term solver for the Borel-plane convolution problem.

For each term ``w_j`` of the q-series the function ``v_j`` solves the
Volterra-type fixed point ``v_j = L_eps(v_j) + B_eps(w_j)`` where ``L_eps``
gathers the fractional kernels of the Euler-operator expansion and the
m-convolution term, and ``B_eps`` is the forcing kernel.  All integrals run
along rays from the origin on the shared radial grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._grid import RadialGrid
from ._poly import as_coeffs, degree, symbol_on_m
from ._report import ValidationReport
from .errors import (
    ConfigurationError,
    GridMismatchError,
    InsufficientDataError,
    NoContractionError,
    SingularSymbolError,
)
from .geometry import Disc, Sector, Union, compute_roots_b, root_separation
from .profiles import CoefficientProfile, VanishingScalar
from .qconv_solver import DecayReport, NeumannSeriesQ, ProblemSpecQ, fit_decay
from .transforms import trapezoid_weights
from .weighted_norms import E_weight, F_weight, NormFWeights, RayGridFunction

__all__ = [
    "d_lk",
    "expand_euler_operators",
    "euler_identity_holds",
    "ProblemSpecB",
    "NeumannSeriesB",
    "validate_spec_b",
    "apply_G",
    "solve_vk",
    "measure_decay_b",
]

SQRT_2PI = math.sqrt(2.0 * math.pi)


def d_lk(d_l: int, delta_l: int, k: int) -> int:
    """Integer ``d_l + k + 1 - delta_l (k + 1)``.

    Examples
    --------
    >>> d_lk(2, 1, 2)
    2
    >>> d_lk(3, 2, 1)
    1
    """
    out = d_l + k + 1 - delta_l * (k + 1)
    if out < 0:
        raise ConfigurationError(f"d_lk = {out} is negative for d={d_l}, delta={delta_l}, k={k}")
    return out


def _rising(n: int, p: int, k: int) -> int:
    """``prod_{i<p} (n + i k)``: the eigenvalue of ``T^{-pk} (T^{k+1} d/dT)^p`` on ``T^n``."""
    out = 1
    for i in range(p):
        out *= n + i * k
    return out


def _falling(n: int, p: int) -> int:
    out = 1
    for i in range(p):
        out *= n - i
    return out


def expand_euler_operators(delta: int, k: int) -> dict[int, Fraction]:
    """Coefficients ``A_{delta,p}`` of the Euler-operator expansion.

    ``T^{delta (k+1)} d^delta/dT^delta = (T^{k+1} d/dT)^delta
    + sum_{p=1}^{delta-1} A_{delta,p} T^{k (delta-p)} (T^{k+1} d/dT)^p``.

    On ``T^n`` both sides multiply by ``T^{n + delta k}``, so the identity is
    ``n^(falling delta) = R_delta(n) + sum_p A_p R_p(n)`` with
    ``R_p(n) = prod_{i<p} (n + i k)``.  The ``R_p`` form a Newton basis with
    nodes ``0, -k, -2k, ...``, which gives a triangular system solved in
    exact rationals.

    Examples
    --------
    >>> expand_euler_operators(1, 3)
    {}
    >>> expand_euler_operators(2, 1)
    {1: Fraction(-2, 1)}
    """
    if delta < 1 or k < 1:
        raise ConfigurationError("delta and k must be positive")
    A: dict[int, Fraction] = {}
    for p in range(1, delta):
        n = -p * k
        resid = Fraction(_falling(n, delta) - _rising(n, delta, k))
        resid -= sum(A[i] * _rising(n, i, k) for i in range(1, p))
        A[p] = resid / _rising(n, p, k)
    if not euler_identity_holds(delta, k, A):
        raise ArithmeticError("Euler expansion failed the monomial check")
    return A


def euler_identity_holds(delta: int, k: int, A: dict[int, Fraction], n_max: int | None = None) -> bool:
    """Exact check of the expansion on ``T^n`` for ``n = 0..n_max`` (default ``2 delta + 2``)."""
    n_max = 2 * delta + 2 if n_max is None else n_max
    for n in range(n_max + 1):
        lhs = Fraction(_falling(n, delta))
        rhs = Fraction(_rising(n, delta, k)) + sum(A.get(p, 0) * _rising(n, p, k) for p in range(1, delta))
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# problem data


@dataclass(frozen=True)
class ProblemSpecB:
    """Data of the Borel-plane convolution problem.

    Attributes
    ----------
    D : int
    d, delta, Delta : tuple of int
        Length ``D``.
    Q : coefficients
    R : tuple of coefficient lists
        ``R[0..D]``; ``R[0]`` multiplies the m-convolution term.
    c00, cF : VanishingScalar
    C00 : CoefficientProfile
    budgets : tuple
        ``(s00, s0, sF)`` for ``|c00/eps|``, ``||C00||`` and ``|cF/eps|``.
    nu : float
    directions : tuple of tuple of float
        ``directions[p][p']`` is the bisecting direction of Borel sector ``(p', p)``.
    half_aperture : float
        Half aperture of each Borel sector.
    rho : float
        Radius of the small disc kept clear of roots.
    sector : tuple
        ``(r, direction, half_aperture)`` of the sector holding ``Q(im)/R_D(im)``.
    """

    D: int
    d: tuple
    delta: tuple
    Delta: tuple
    Q: tuple
    R: tuple
    c00: VanishingScalar
    cF: VanishingScalar
    C00: CoefficientProfile
    budgets: tuple
    nu: float
    directions: tuple
    half_aperture: float
    rho: float
    sector: tuple

    def __post_init__(self):
        for name in ("d", "delta", "Delta"):
            object.__setattr__(self, name, tuple(int(x) for x in getattr(self, name)))
        object.__setattr__(self, "Q", tuple(as_coeffs(self.Q)))
        object.__setattr__(self, "R", tuple(tuple(as_coeffs(r)) for r in self.R))
        object.__setattr__(self, "directions", tuple(tuple(float(e) for e in ep) for ep in self.directions))
        if self.D < 2:
            raise ConfigurationError("D must be at least 2")
        for name in ("d", "delta", "Delta"):
            if len(getattr(self, name)) != self.D:
                raise ConfigurationError(f"{name} must have length D")
        if len(self.R) != self.D + 1:
            raise ConfigurationError("R must hold D + 1 polynomials R_0..R_D")

    def P(self, tau, m, k: int):
        """``Q(im) k - R_D(im) k^{delta_D} tau^{(delta_D - 1) k}``."""
        dD = self.delta[-1]
        tau = np.asarray(tau, dtype=complex)
        return symbol_on_m(self.Q, m) * k - symbol_on_m(self.R[-1], m) * float(k) ** dD * tau ** ((dD - 1) * k)

    def roots(self, m: float, k: int) -> list[complex]:
        return compute_roots_b(complex(symbol_on_m(self.Q, m)), complex(symbol_on_m(self.R[-1], m)), k, self.delta[-1])

    def f_weights(self, specQ: ProblemSpecQ) -> NormFWeights:
        return NormFWeights(self.nu, specQ.beta, specQ.mu, specQ.k)

    def n_sub(self, p: int) -> int:
        return len(self.directions[p])


def validate_spec_b(spec: ProblemSpecB, specQ: ProblemSpecQ, m: Sequence[float] | None = None,
                    n_m: int = 33, m_max: float = 20.0) -> ValidationReport:
    """Check every hypothesis of the Borel problem; reports the empirical ``C_P``."""
    rep = ValidationReport()
    k = specQ.k
    m = np.linspace(-m_max, m_max, n_m) if m is None else np.asarray(m, dtype=float)
    dl = spec.delta
    mono = dl[0] == 1 and all(dl[i] < dl[i + 1] for i in range(spec.D - 1))
    rep.add("delta_increasing", mono, None, "delta_1 = 1 and strictly increasing")
    dD, deltaD = spec.d[-1], dl[-1]
    rep.add("dD_value", dD == (deltaD - 1) * (k + 1), dD - (deltaD - 1) * (k + 1), "d_D = (delta_D - 1)(k + 1)")
    rep.add("DeltaD_value", spec.Delta[-1] == dD - deltaD + 1, spec.Delta[-1] - (dD - deltaD + 1),
            "Delta_D = d_D - delta_D + 1")
    for l in range(spec.D - 1):
        a = spec.d[l] - (dl[l] - 1) * (k + 1)
        rep.add(f"d_lower[{l + 1}]", a > 0, a, "d_l > (delta_l - 1)(k + 1)")
        b = spec.Delta[l] - spec.d[l] + dl[l] - 1
        rep.add(f"eps_power[{l + 1}]", b >= 0, b, "Delta_l - d_l + delta_l - 1 >= 0")
        c = deltaD - dl[l] - 1.0 / k
        rep.add(f"delta_gap[{l + 1}]", c >= -1e-12, c, "delta_D >= delta_l + 1/k")
    dQ, dRD = degree(spec.Q), degree(spec.R[-1])
    dRl = max(degree(r) for r in spec.R[:-1])
    rep.add("degrees", dQ >= dRD >= dRl, min(dQ - dRD, dRD - dRl), "deg Q >= deg R_D >= deg R_l")
    Qm, RDm = symbol_on_m(spec.Q, m), symbol_on_m(spec.R[-1], m)
    rep.add("Q_nonzero", bool(np.all(Qm != 0)), float(np.min(np.abs(Qm))))
    rep.add("RD_nonzero", bool(np.all(RDm != 0)), float(np.min(np.abs(RDm))))
    rep.add("mu_vs_deg", specQ.mu > dRD + 1, specQ.mu - dRD - 1, "mu > deg R_D + 1")
    r, sd, eta = spec.sector
    with np.errstate(divide="ignore", invalid="ignore"):
        quot = Qm / RDm
    off = np.abs(np.angle(quot * np.exp(-1j * sd)))
    inside = (np.abs(quot) >= r) & (off <= eta)
    rep.add("quotient_in_sector", bool(np.all(inside)), float(np.min(np.minimum(np.abs(quot) - r, eta - off))))
    # sub-sectors inside the root-free sectors of the q-problem
    ff = specQ.frames
    worst = math.inf
    for p, dirs in enumerate(spec.directions):
        for e in dirs:
            off = abs(math.remainder(e - ff.directions[p], 2 * math.pi)) + spec.half_aperture
            worst = min(worst, ff.half_aperture - off)
    rep.add("sectors_nested", worst >= 0, worst, "each Borel sector lies in its q-sector")
    if deltaD >= 2 and np.all(Qm != 0) and np.all(RDm != 0):
        roots = np.array([z for mm in m for z in spec.roots(mm, k)])
        region = Union(tuple(Sector(e, spec.half_aperture) for dirs in spec.directions for e in dirs)
                       + (Disc(spec.rho),))
        sep = root_separation(region, roots)
        rep.add("root_separation", not sep.violation and sep.M1 > 0, sep.M1, f"M1={sep.M1:.4g}, M2={sep.M2:.4g}")
        pts = region.sample(64, 64)
        P = spec.P(pts[:, None], m[None, :], k)
        den = np.abs(RDm)[None, :] * (1 + np.abs(pts[:, None]) ** k) ** ((deltaD - 1) - 1.0 / k)
        cp = float(np.min(np.abs(P) / den))
        rep.add("C_P_positive", cp > 0, cp)
        rep.info["C_P"] = cp
    s00, s0, sF = spec.budgets
    e0 = specQ.eps0
    n00 = spec.c00.sup_over_eps(e0)
    n0 = spec.C00.sup_norm_E(specQ.beta, specQ.mu, e0)
    nF = spec.cF.sup_over_eps(e0)
    rep.add("smallness_c00", n00 <= s00, s00 - n00)
    rep.add("smallness_C00", n0 <= s0, s0 - n0)
    rep.add("smallness_cF", nF <= sF, sF - nF)
    rep.info["euler"] = {int(d): {int(p): str(a) for p, a in expand_euler_operators(d, k).items()} for d in dl}
    return rep


# ---------------------------------------------------------------------------
# the operator


def _phase(directions: np.ndarray, k: int, expo: float) -> np.ndarray:
    theta = np.angle(np.exp(1j * directions))
    return np.exp(1j * k * theta * expo)


class _BorelOperator:
    """Pre-assembled kernels of the Borel fixed point on a set of rays."""

    def __init__(self, spec: ProblemSpecB, specQ: ProblemSpecQ, eps: complex, directions: np.ndarray,
                 grid: RadialGrid, m: np.ndarray, size: int | None = None):
        if eps == 0:
            raise ZeroDivisionError("eps = 0: the Borel operator carries a factor 1/eps")
        self.k = k = specQ.k
        self.eps = complex(eps)
        self.directions = np.asarray(directions, dtype=float)
        self.grid, self.m = grid, m
        n = grid.size if size is None else int(size)
        self.n = n
        r = grid.radii[:n]
        tau = r[None, :] * np.exp(1j * self.directions)[:, None]
        P = spec.P(tau[:, :, None], m[None, None, :], k)
        if np.min(np.abs(P)) < 1e-300:
            raise SingularSymbolError("Borel symbol vanishes at a grid node")
        invP = 1.0 / P
        # v-blocks: list of (coefficient array (n_dir, n, n_m), W (n, n))
        self.vblocks = []
        self._keys = []
        deltaD = spec.delta[-1]
        RD = symbol_on_m(spec.R[-1], m)
        for h, A in expand_euler_operators(deltaD, k).items():
            chi = deltaD - h - 1
            coef = float(A) * float(k) ** h / math.gamma(deltaD - h)
            self._add(coef * RD[None, None, :] * invP, chi, h)
        for l in range(spec.D - 1):
            dl, deltal = spec.d[l], spec.delta[l]
            dlk = d_lk(dl, deltal, k)
            expo = spec.Delta[l] - dl + deltal - 1
            epsf = self.eps**expo if expo else 1.0
            Rl = symbol_on_m(spec.R[l + 1], m)
            base = epsf * Rl[None, None, :] * invP
            self._add(base * float(k) ** deltal / math.gamma(dlk / k), dlk / k - 1.0, deltal)
            for h, A in expand_euler_operators(deltal, k).items():
                self._add(base * float(A) * float(k) ** h / math.gamma(dlk / k + deltal - h),
                          dlk / k + deltal - h - 1.0, h)
        self._prune()
        g = math.gamma(1.0 + 1.0 / k)
        self.W_forcing = grid.volterra_matrix(k, 1.0 / k, 0.0)[:n, :n]
        self.ph_forcing = _phase(self.directions, k, 1.0 / k)
        c00 = complex(spec.c00.over_eps(self.eps))
        self.conv = None
        if c00 != 0 and not spec.C00.is_zero:
            wts = trapezoid_weights(m)
            K = spec.C00(m[:, None] - m[None, :], self.eps) * (symbol_on_m(spec.R[0], m) * wts)[None, :] / SQRT_2PI
            self.conv = (c00 / g * invP, K)
        self.cF = complex(spec.cF.over_eps(self.eps)) / g * invP

    def _add(self, coef: np.ndarray, chi: float, nu: float) -> None:
        # blocks sharing a kernel are merged, so cancelling blocks cost nothing
        key = (float(chi), float(nu))
        ph = _phase(self.directions, self.k, chi + nu)
        if key in self._keys:
            i = self._keys.index(key)
            c, W = self.vblocks[i]
            self.vblocks[i] = (c + coef * ph[:, None, None], W)
            return
        W = self.grid.volterra_matrix(self.k, chi, nu)[: self.n, : self.n]
        self._keys.append(key)
        self.vblocks.append((coef * ph[:, None, None], W))

    def _prune(self) -> None:
        keep = [i for i, (c, _) in enumerate(self.vblocks) if np.max(np.abs(c)) > 0]
        self.vblocks = [self.vblocks[i] for i in keep]
        self._keys = [self._keys[i] for i in keep]

    @staticmethod
    def _volterra(W: np.ndarray, vals: np.ndarray) -> np.ndarray:
        # vals: (..., n_dir, n, n_m); one real BLAS product on a contiguous 2-D view
        moved = np.moveaxis(vals, -2, 0)
        flat = np.ascontiguousarray(moved).reshape(moved.shape[0], -1).view(float)
        out = (W @ flat.reshape(moved.shape[0], -1)).view(complex).reshape(moved.shape)
        return np.moveaxis(out, 0, -2)

    def linear(self, vals: np.ndarray) -> np.ndarray:
        """Apply the v-dependent blocks to samples of shape ``(..., n_dir, n, n_m)``."""
        out = np.zeros_like(vals)
        for coef, W in self.vblocks:
            out += coef * self._volterra(W, vals)
        if self.conv is not None:
            coef, K = self.conv
            inner = vals @ K.T
            out += coef * self.ph_forcing[:, None, None] * self._volterra(self.W_forcing, inner)
        return out

    def forcing(self, w_vals: np.ndarray) -> np.ndarray:
        """The w-driven block for samples ``(..., n_dir, n, n_m)`` of a q-term."""
        return self.cF * self.ph_forcing[:, None, None] * self._volterra(self.W_forcing, w_vals)


def apply_G(v: RayGridFunction, spec: ProblemSpecB, specQ: ProblemSpecQ, eps: complex,
            w_kj: RayGridFunction) -> RayGridFunction:
    """Evaluate the five blocks of the Borel map on ``v`` with forcing ``w_kj``.

    Raises
    ------
    ZeroDivisionError
        ``eps = 0``.
    SingularSymbolError
        The Borel symbol vanishes at a node.
    """
    if not v.compatible(w_kj):
        raise GridMismatchError("v and w_kj must share rays and grids")
    op = _BorelOperator(spec, specQ, eps, v.directions, v.grid, v.m)
    out = op.linear(v.values) + op.forcing(w_kj.values)
    return v.like(out, min(v.valid, w_kj.valid))


# ---------------------------------------------------------------------------
# series


@dataclass
class NeumannSeriesB:
    """Terms ``v_j`` on the Borel rays of sub-sector ``(p', p)``."""

    eps: complex
    p: int
    p_prime: int
    directions: np.ndarray
    grid: RadialGrid
    m: np.ndarray
    terms: list
    norms: dict
    picard_ratios: list
    iterations: list
    residual: float
    slices: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    disc_rate: float = 0.0

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def partial_sum(self) -> RayGridFunction:
        vals = np.zeros_like(self.terms[0].values)
        for t in self.terms:
            vals += t.values
        return self.terms[0].like(vals)

    def to_csv(self, which: int | None = None) -> str:
        f = self.partial_sum if which is None else self.terms[which]
        return f.to_csv()


def _picard(op: _BorelOperator, rhs: np.ndarray, tol: float, max_iter: int, wnorm) -> tuple[np.ndarray, list, int]:
    """Fixed point of ``v = L v + rhs`` from ``v = 0``; returns ratios of update norms."""
    v = rhs.copy()
    prev = None
    ratios = []
    for it in range(1, max_iter + 1):
        new = op.linear(v) + rhs
        diff = wnorm(new - v)
        size = wnorm(new)
        if prev is not None and prev > 0:
            ratios.append(diff / prev)
            if len(ratios) >= 3 and all(r >= 1.0 for r in ratios[-3:]):
                raise NoContractionError(f"Picard update ratio {ratios[-1]:.3g} >= 1")
        prev = diff
        v = new
        if diff <= tol * max(size, 1e-300):
            return v, ratios, it
    raise NoContractionError(f"Picard iteration did not reach tolerance in {max_iter} steps")


def _f_norm_fn(grid: RadialGrid, m: np.ndarray, w: NormFWeights, n: int):
    rw = F_weight(grid.radii[:n], w)
    mw = E_weight(m, w)

    def norm(vals: np.ndarray) -> float:
        a = np.abs(vals) * mw
        return float(np.max(np.max(a, axis=-1) * rw[None, :])) if a.size else 0.0

    return norm


def solve_vk(
    spec: ProblemSpecB,
    specQ: ProblemSpecQ,
    eps: complex,
    p_prime: int,
    p: int,
    series_q: NeumannSeriesQ,
    tol: float = 1e-10,
    j_max: int | None = None,
    max_iter: int = 200,
    slices: dict | None = None,
) -> NeumannSeriesB:
    """Solve the Borel fixed point term by term along the ray of sub-sector ``(p', p)``.

    Parameters
    ----------
    series_q : NeumannSeriesQ
        Must hold the Borel ray among its stored directions.
    tol : float
        Outer tolerance; Picard stops at ``tol / 10`` relative update size.
    j_max : int, optional
        Number of q-terms used (all by default).
    slices : dict, optional
        ``name -> list of arrays`` extra q-term samples (as stored in
        ``series_q.slices``) on which to solve as well; each array covers
        the leading radial nodes of its rays.  When all arrays of a name
        share one shape the problem is solved once for their sum, and the
        returned list holds that single solution.

    Raises
    ------
    NoContractionError
        Picard update ratios at or above 1.
    """
    if eps == 0:
        raise ZeroDivisionError("eps = 0 is excluded")
    e = spec.directions[p][p_prime]
    m = series_q.m
    grid = series_q.grid.with_periods(series_q.grid.lo, series_q.top)
    n = grid.size
    J = len(series_q) if j_max is None else min(j_max + 1, len(series_q))
    wF = spec.f_weights(specQ)
    op = _BorelOperator(spec, specQ, eps, np.array([e]), grid, m)
    norm = _f_norm_fn(grid, m, wF, n)
    W = np.stack([series_q.term_on(j, e)[None, :n] for j in range(J)])
    rhs = op.forcing(W)
    v, ratios, iters = _picard(op, rhs, tol / 10.0, max_iter, norm)
    terms = [RayGridFunction(np.array([e]), grid, m, v[j]) for j in range(J)]
    resid_vals = v.sum(axis=0) - op.linear(v.sum(axis=0)) - op.forcing(W.sum(axis=0))
    den = norm(op.forcing(W.sum(axis=0)))
    residual = norm(resid_vals) / den if den > 0 else norm(resid_vals)
    # norms on the sector, the shrinking discs and the frames
    ff = specQ.frames
    r = grid.radii
    rw = F_weight(r, wF)
    mw = E_weight(m, wF)
    node = np.max(np.abs(v[:, 0]) * mw, axis=-1) * rw[None, :]
    norms = {"sector": [], "disc": [], "frames": []}
    for j in range(J):
        norms["sector"].append(float(np.max(node[j])))
        norms["disc"].append(float(np.max(node[j][r <= ff.q_check * ff.mu0_h(j) * (1 + 1e-12)])))
        norms["frames"].append([float(np.max(node[j][r <= ff.q_hat * ff.mu1_h(h) * (1 + 1e-12)]))
                                for h in range(j + 1)])
    warnings = []
    fn = [norm(rhs[j]) for j in range(J)]
    ball = max((norm(v[j]) / fn[j] for j in range(J) if fn[j] > 0), default=0.0)
    if ball > 2.0:
        warnings.append(f"iterates exceed twice the forcing norm (ratio {ball:.3g})")
    out_slices = {}
    for name, arrs in (slices or {}).items():
        out_slices[name] = _solve_slices(spec, specQ, eps, series_q, name, arrs, tol, max_iter)
    worst = max(ratios) if ratios else 0.0
    return NeumannSeriesB(complex(eps), p, p_prime, np.array([e]), grid, m, terms, norms,
                          ratios, [iters], residual, out_slices,
                          warnings + ([f"Picard ratio {worst:.3g} above 0.6"] if worst > 0.6 else []),
                          specQ.disc_rate)


def _solve_slices(spec, specQ, eps, series_q: NeumannSeriesQ, name: str, arrs: list, tol: float,
                  max_iter: int) -> list:
    """Solve on extra rays for each q-term; returns the samples per term."""
    angles = series_q.extra_directions[name]
    grid = series_q.grid.with_periods(series_q.grid.lo, series_q.top)
    if len({a.shape for a in arrs}) == 1 and len(arrs) > 1:
        # common radius: by linearity one solve with the summed forcing
        arrs = [np.sum(arrs, axis=0)]
    out = []
    for wj in arrs:
        n = wj.shape[1]
        op = _BorelOperator(spec, specQ, eps, angles, grid, series_q.m, size=n)
        norm = _f_norm_fn(grid, series_q.m, spec.f_weights(specQ), n)
        rhs = op.forcing(wj)
        v, _, _ = _picard(op, rhs, tol / 10.0, max_iter, norm)
        out.append(v)
    return out


def measure_decay_b(series: NeumannSeriesB) -> DecayReport:
    """Fit sector, disc and frame decay of a Borel series."""
    sec = series.norms["sector"]
    if len(sec) < 4:
        if all(v == 0 for v in sec):
            return DecayReport(True, 0.0, 0.0, None, series.disc_rate, {}, True, {"reason": "zero series"})
        raise InsufficientDataError("series too short for a decay fit")
    if all(v == 0 for v in sec):
        return DecayReport(True, 0.0, 0.0, None, series.disc_rate, {}, True, {"reason": "zero series"})
    ref = (sec[0], series.norms["disc"][0], series.norms["frames"][0][0])
    return fit_decay(sec, series.norms["disc"], series.norms["frames"], series.disc_rate, ref)
