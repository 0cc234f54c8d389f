"""Neumann-series solver for the q-difference convolution problem.

The unknown ``w(tau, m)`` satisfies

    w = H_eps(w) + psi(tau, m, eps) / P_m(tau),

    H_eps(w)(tau, m) = sum_l eps^{Delta_l - k d_l} (k tau^k)^{d_l} / P_m(tau)
                       * (2 pi)^{-1/2} int C_l(m - m1, eps) R_l(i m1) w(q^delta tau, m1) dm1,

with ``P_m(tau) = Q(im) - R_D(im) (k tau^k)^{d_D}``.  Terms ``w_j = H^j(w_0)``
are computed exactly at grid nodes: on a radial grid with ratio ``q^delta``
per period the dilation is an index shift, so no interpolation enters.
Term ``j`` needs ``w_0`` at ``q^{delta j} tau``; the grid therefore extends
``j_max`` periods above the top radius used downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
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
from .geometry import (
    Annulus,
    Disc,
    FrameFamily,
    QSymbol,
    Sector,
    Union,
    build_frames,
    check_covering_root_condition,
    pm_lower_bound_check,
    root_separation,
)
from .profiles import PolynomialForcing
from .transforms import trapezoid_weights
from .weighted_norms import E_weight, NormQExpWeights, RayGridFunction, qexp_weight

__all__ = [
    "GridConfig",
    "ProblemSpecQ",
    "NeumannSeriesQ",
    "DecayReport",
    "validate_spec_q",
    "apply_H",
    "solve_wk",
    "measure_decay_q",
    "fit_decay",
]

SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class GridConfig:
    """Discretisation shared by both solvers.

    The radial grid has nodes ``anchor * ratio^(n + x)`` for periods
    ``lo <= n < top + extra``; ``top`` periods above the anchor are kept
    valid for every Neumann term.  The m grid is uniform on ``[-m_max, m_max]``.
    """

    anchor: float = 0.72
    panels: int = 2
    degree: int = 10
    lo: int = -27
    top: int = 8
    m_max: float = 8.0
    n_m: int = 33

    def radial(self, ratio: float, extra: int) -> RadialGrid:
        return RadialGrid(self.anchor, ratio, self.panels, self.degree, self.lo, self.top + extra)

    @property
    def m(self) -> np.ndarray:
        return np.linspace(-self.m_max, self.m_max, self.n_m)

    @classmethod
    def from_dict(cls, d: dict) -> "GridConfig":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__ if k in d})


@dataclass(frozen=True)
class ProblemSpecQ:
    """Data of the q-difference convolution problem.

    Attributes
    ----------
    k, D : int
    delta, k1, q, alpha : float
    d, Delta : tuple of int
        Length ``D``; the last entries belong to the principal term.
    Q : coefficients
    R : tuple of coefficient lists
        ``R[0..D-1]``; ``R[-1]`` is the principal ``R_D``.
    C : tuple of CoefficientProfile
        Length ``D - 1``.
    gamma : tuple of float
        Smallness budgets for ``C``.
    psi : PolynomialForcing
    eps0, beta, mu, tau0 : float
    frames : FrameFamily
    annulus : tuple
        ``(r, r1, direction, half_aperture)`` holding ``Q(im)/R_D(im)``.
    ray_offset : float
        Laplace rays of sector ``p`` are ``d_p -/+ ray_offset``.
    """

    k: int
    D: int
    delta: float
    k1: float
    q: float
    alpha: float
    d: tuple
    Delta: tuple
    Q: tuple
    R: tuple
    C: tuple
    gamma: tuple
    psi: PolynomialForcing
    eps0: float
    beta: float
    mu: float
    tau0: float
    frames: FrameFamily
    annulus: tuple
    ray_offset: float = 0.6

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        object.__setattr__(self, "Delta", tuple(int(x) for x in self.Delta))
        object.__setattr__(self, "Q", tuple(as_coeffs(self.Q)))
        object.__setattr__(self, "R", tuple(tuple(as_coeffs(r)) for r in self.R))
        object.__setattr__(self, "C", tuple(self.C))
        object.__setattr__(self, "gamma", tuple(float(g) for g in self.gamma))
        if self.D < 2:
            raise ConfigurationError("D must be at least 2")
        for name, n in (("d", self.D), ("Delta", self.D), ("R", self.D), ("C", self.D - 1), ("gamma", self.D - 1)):
            if len(getattr(self, name)) != n:
                raise ConfigurationError(f"{name} must have length {n}")

    @property
    def symbol(self) -> QSymbol:
        return QSymbol(self.Q, self.R[-1], self.k, self.d[-1])

    @property
    def weights(self) -> NormQExpWeights:
        return NormQExpWeights(self.k1, self.beta, self.mu, self.alpha, self.tau0, self.q)

    @property
    def dilation(self) -> float:
        return self.q**self.delta

    @property
    def n_sectors(self) -> int:
        return len(self.frames.directions)

    def rays(self, p: int) -> tuple[float, float]:
        dp = self.frames.directions[p]
        return (dp - self.ray_offset, dp + self.ray_offset)

    @property
    def min_d(self) -> int:
        return min(self.d[:-1])

    @property
    def disc_rate(self) -> float:
        """Target quadratic coefficient ``delta log q k min d_l / 2`` of the disc norms."""
        return self.delta * math.log(self.q) * self.k * self.min_d / 2.0


# ---------------------------------------------------------------------------
# validation


def _annulus_margin(z: np.ndarray, ann) -> tuple[np.ndarray, np.ndarray]:
    r, r1, d, eta = ann
    mod = np.abs(z)
    off = np.abs(np.angle(z * np.exp(-1j * d)))
    inside = (mod >= r) & (mod <= r1) & (off <= eta)
    margin = np.minimum.reduce([mod - r, r1 - mod, eta - off])
    return inside, margin


def validate_spec_q(spec: ProblemSpecQ, m: Sequence[float] | None = None, n_m: int = 33,
                    m_max: float = 20.0) -> ValidationReport:
    """Check every hypothesis of the q-problem on sampled ``m``.

    Never raises for a failing hypothesis; each check is listed with its
    margin.
    """
    rep = ValidationReport()
    m = np.linspace(-m_max, m_max, n_m) if m is None else np.asarray(m, dtype=float)
    k, dD = spec.k, spec.d[-1]
    for l in range(spec.D - 1):
        a = k * dD - 1 - (spec.k1 * spec.delta + k * spec.d[l])
        rep.add(f"order_gap[{l + 1}]", a >= -1e-12, a, "k d_D - 1 >= k1 delta + k d_l")
        b = spec.Delta[l] - k * spec.d[l]
        rep.add(f"eps_power[{l + 1}]", b >= 0, b, "Delta_l >= k d_l")
    dQ, dRD = degree(spec.Q), degree(spec.R[-1])
    dRl = max(degree(r) for r in spec.R[:-1])
    rep.add("degrees", dQ >= dRD >= dRl, min(dQ - dRD, dRD - dRl), "deg Q >= deg R_D >= deg R_l")
    Qm, RDm = symbol_on_m(spec.Q, m), symbol_on_m(spec.R[-1], m)
    rep.add("Q_nonzero", bool(np.all(Qm != 0)), float(np.min(np.abs(Qm))))
    rep.add("RD_nonzero", bool(np.all(RDm != 0)), float(np.min(np.abs(RDm))))
    with np.errstate(divide="ignore", invalid="ignore"):
        quot = Qm / RDm
    inside, margin = _annulus_margin(quot, spec.annulus)
    detail = ""
    if not np.all(inside):
        bad = int(np.argmax(~inside))
        detail = f"Q/R_D leaves the annulus at m={m[bad]:.6g} (|Q/R_D|={abs(quot[bad]):.6g})"
    rep.add("quotient_in_annulus", bool(np.all(inside)), float(np.min(margin)), detail)
    rep.add("mu_vs_deg", spec.mu > dRD + 1, spec.mu - dRD - 1, "mu > deg R_D + 1")
    try:
        spec.frames.validate()
        rep.add("frames", True)
    except ConfigurationError as exc:
        rep.add("frames", False, detail=str(exc))
    ff = spec.frames
    sym = spec.symbol
    if np.all(Qm != 0) and np.all(RDm != 0):
        roots = [sym.roots(mm) for mm in m]
        rep.add("covering_roots", check_covering_root_condition(ff, roots),
                detail="each closed sector between consecutive directions holds a root")
        allr = np.array([r for rr in roots for r in rr])
        region = Union(tuple(Sector(d, ff.half_aperture) for d in ff.directions)
                       + (Disc(ff.mu0), Annulus(ff.mu1)))
        sep = root_separation(region, allr)
        rep.add("root_separation", not sep.violation and sep.M1 > 0, sep.M1, f"M1={sep.M1:.4g}, M2={sep.M2:.4g}")
        pm = pm_lower_bound_check(sym, region, m[:: max(1, len(m) // 9)])
        rep.add("P_lower_bound", not pm.violation and pm.c_emp > 0, pm.c_emp)
        rep.info["C_P"] = pm.c_emp
        rep.info["M1"], rep.info["M2"] = sep.M1, sep.M2
        mods = np.abs(allr)
        ok = bool(np.all((mods > ff.mu0) & (mods < ff.mu1)))
        rep.add("roots_in_annulus", ok, float(min(np.min(mods) - ff.mu0, ff.mu1 - np.max(mods))),
                "mu0 < |root| < mu1")
    for l, (C, g) in enumerate(zip(spec.C, spec.gamma)):
        n = C.sup_norm_E(spec.beta, spec.mu, spec.eps0)
        rep.add(f"smallness[{l + 1}]", n <= g, g - n, f"sup ||C_l|| = {n:.4g} vs budget {g:.4g}")
    return rep


# ---------------------------------------------------------------------------
# the operator


class _Operator:
    """Pre-computed pieces of ``H_eps`` on a fixed set of rays."""

    def __init__(self, spec: ProblemSpecQ, eps: complex, directions: np.ndarray, grid: RadialGrid,
                 m: np.ndarray):
        if abs(grid.ratio / spec.dilation - 1.0) > 1e-12:
            raise GridMismatchError("radial grid period must equal q**delta")
        self.spec, self.eps, self.grid, self.m = spec, complex(eps), grid, m
        self.directions = np.asarray(directions, dtype=float)
        tau = grid.radii[None, :] * np.exp(1j * self.directions)[:, None]
        P = spec.symbol.P(tau[:, :, None], m[None, None, :])
        if np.any(P == 0) or np.min(np.abs(P)) < 1e-300:
            raise SingularSymbolError("P_m vanishes at a grid node")
        self.invP = 1.0 / P
        wts = trapezoid_weights(m)
        k = spec.k
        self.blocks = []
        for l in range(spec.D - 1):
            C = spec.C[l]
            if C.is_zero:
                continue
            expo = spec.Delta[l] - k * spec.d[l]
            coef = (self.eps**expo if expo else 1.0) * (k * tau**k) ** spec.d[l]
            K = C(m[:, None] - m[None, :], self.eps) * (symbol_on_m(spec.R[l], m) * wts)[None, :] / SQRT_2PI
            self.blocks.append((coef, K))

    @property
    def trivial(self) -> bool:
        return not self.blocks

    def __call__(self, w: RayGridFunction) -> RayGridFunction:
        dil = w.dilated()
        out = np.zeros_like(w.values)
        n = dil.valid
        for coef, K in self.blocks:
            out[:, :n] += coef[:, :n, None] * (dil.values[:, :n] @ K.T)
        out[:, :n] *= self.invP[:, :n]
        return w.like(out, n)

    def forcing(self) -> RayGridFunction:
        tau = self.grid.radii[None, :] * np.exp(1j * self.directions)[:, None]
        psi = self.spec.psi(tau[:, :, None], self.m[None, None, :], self.eps)
        return RayGridFunction(self.directions, self.grid, self.m, psi * self.invP,
                               q=self.spec.q, delta=self.spec.delta)


def apply_H(w: RayGridFunction, spec: ProblemSpecQ, eps: complex) -> RayGridFunction:
    """Apply the q-dilated convolution operator to ``w``.

    The output is valid on one period fewer than the input because the
    dilation reads ``w`` one period further out.

    Raises
    ------
    GridMismatchError
        Grid period differs from ``q**delta``.
    SingularSymbolError
        ``P_m`` vanishes at a node.
    """
    if abs(eps) > spec.eps0 * (1 + 1e-12):
        raise ConfigurationError("|eps| exceeds eps0")
    return _Operator(spec, eps, w.directions, w.grid, w.m)(w)


# ---------------------------------------------------------------------------
# series


@dataclass
class NeumannSeriesQ:
    """Terms ``w_j = H^j(psi/P)`` on the Laplace rays of one sector.

    ``terms`` hold full samples on ``directions``; ``norms`` records
    per-term norms over the triangle frame, the shrinking discs and the
    square frames; ``slices[name][j]`` holds values of term ``j`` on extra
    rays up to a requested radius.
    """

    spec: ProblemSpecQ
    eps: complex
    p: int
    grid: RadialGrid
    m: np.ndarray
    directions: np.ndarray
    terms: list
    norms: dict
    residual: float = math.nan
    ratios: list = field(default_factory=list)
    slices: dict = field(default_factory=dict)
    extra_directions: dict = field(default_factory=dict)
    top: int = 0

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def partial_sum(self) -> RayGridFunction:
        out = self.terms[0].zeros_like()
        vals = out.values
        valid = self.terms[0].valid
        for t in self.terms:
            vals += t.values
            valid = min(valid, t.valid)
        return out.like(vals, valid)

    def term_on(self, j: int, direction: float) -> np.ndarray:
        """Samples ``(n_r, n_m)`` of term ``j`` on a stored main ray."""
        idx = np.flatnonzero(np.isclose(self.directions, direction, atol=1e-12))
        if idx.size == 0:
            raise KeyError(f"direction {direction} is not a stored ray")
        return self.terms[j].values[idx[0]]

    def to_csv(self, which: int | None = None) -> str:
        """Grid dump of one term (or of the partial sum when ``which`` is None)."""
        f = self.partial_sum if which is None else self.terms[which]
        return f.to_csv()


def default_norm_directions(n: int = 24) -> np.ndarray:
    """Uniform angles offset by half a step so they avoid root directions 2 pi l / n."""
    return 2.0 * math.pi * (np.arange(n) + 0.5) / n


def _masks(spec: ProblemSpecQ, p: int, tau: np.ndarray, j_max: int) -> dict:
    fs = build_frames(spec.frames, p, range(j_max + 1), j_max)
    ff = spec.frames
    out = {"theta": fs.theta.contains(tau), "discs": [], "frames": []}
    for j in range(j_max + 1):
        out["discs"].append(Disc(ff.q_check * ff.mu0_h(j)).contains(tau))
        out["frames"].append(fs.frames[j].contains(tau))
    return out


def _node_sup(f: RayGridFunction, rweight: np.ndarray, mweight: np.ndarray) -> np.ndarray:
    vals = np.abs(f.values) * mweight[None, None, :]
    s = np.max(vals, axis=2) * rweight[None, :]
    s[:, f.valid :] = -np.inf
    return s


def _region_max(node_sup: np.ndarray, mask: np.ndarray) -> float:
    sel = node_sup[mask]
    sel = sel[np.isfinite(sel)]
    return float(np.max(sel)) if sel.size else 0.0


def solve_wk(
    spec: ProblemSpecQ,
    eps: complex,
    p: int,
    j_max: int = 40,
    tol: float = 1e-10,
    grid: GridConfig | None = None,
    directions: Sequence[float] | None = None,
    norm_directions: Sequence[float] | None = None,
    extra: dict | None = None,
    stop_early: bool = True,
) -> NeumannSeriesQ:
    """Build the Neumann series of the q-problem on the rays of sector ``p``.

    Parameters
    ----------
    spec : ProblemSpecQ
    eps : complex
        ``0 < |eps| <= eps0``; ``eps = 0`` is allowed here.
    p : int
        Sector index; its two Laplace rays are stored in full.
    j_max : int
        Maximum index of a term.
    tol : float
        Stop once the triangle-frame norm of a term drops below
        ``tol`` times that of the first term (``stop_early``).
    grid : GridConfig, optional
    directions : sequence of float, optional
        Rays to store in full; defaults to ``spec.rays(p)``.
    norm_directions : sequence of float, optional
        Additional rays used only for norms.
    extra : dict, optional
        ``name -> (angles, radius_fn)``: keep term ``j`` on these rays for
        radii up to ``radius_fn(j)``.

    Returns
    -------
    NeumannSeriesQ

    Raises
    ------
    NoContractionError
        Three consecutive triangle-frame norm ratios at or above 1.
    """
    if not 0 <= p < spec.n_sectors:
        raise ConfigurationError(f"sector index {p} out of range")
    if j_max < 0:
        raise ConfigurationError("j_max must be nonnegative")
    if abs(eps) > spec.eps0 * (1 + 1e-12):
        raise ConfigurationError("|eps| exceeds eps0")
    gc = grid or GridConfig()
    rg = gc.radial(spec.dilation, j_max + 1)
    m = gc.m
    main = np.asarray(spec.rays(p) if directions is None else directions, dtype=float)
    nd_dirs = default_norm_directions() if norm_directions is None else np.asarray(norm_directions, dtype=float)
    extra = extra or {}
    groups = [("main", main), ("norm", nd_dirs)] + [(k, np.asarray(v[0], dtype=float)) for k, v in extra.items()]
    all_dirs = np.concatenate([g[1] for g in groups])
    offsets, o = {}, 0
    for name, dirs in groups:
        offsets[name] = slice(o, o + dirs.size)
        o += dirs.size

    op = _Operator(spec, eps, all_dirs, rg, m)
    w = op.forcing()
    tau = w.tau
    masks = _masks(spec, p, tau, j_max)
    rweight = qexp_weight(rg.radii, spec.weights)
    mweight = E_weight(m, spec.weights)

    terms, ratios = [], []
    norms = {"theta": [], "disc": [], "frames": []}
    slices = {name: [] for name in extra}
    bad = 0
    for j in range(j_max + 1):
        if j > 0:
            w = op(w)
        ns = _node_sup(w, rweight, mweight)
        norms["theta"].append(_region_max(ns, masks["theta"]))
        norms["disc"].append(_region_max(ns, masks["discs"][j]))
        norms["frames"].append([_region_max(ns, masks["frames"][h]) for h in range(j + 1)])
        terms.append(RayGridFunction(main, rg, m, w.values[offsets["main"]].copy(), w.valid,
                                     spec.q, spec.delta))
        for name, (angles, rfun) in extra.items():
            top = rg.index_of_radius(rfun(j)) if rfun is not None else w.valid - 1
            slices[name].append(w.values[offsets[name], : top + 1].copy())
        th = norms["theta"]
        if j > 0 and th[-2] > 0:
            ratios.append(th[-1] / th[-2])
            bad = bad + 1 if ratios[-1] >= 1.0 else 0
            if bad >= 3:
                raise NoContractionError(
                    f"norm ratio >= 1 for three consecutive terms (last {ratios[-1]:.3g}); budgets too large"
                )
        if op.trivial or th[-1] == 0.0:
            break
        if stop_early and tol > 0 and th[-1] < tol * th[0]:
            break

    series = NeumannSeriesQ(spec, complex(eps), p, rg, m, main, terms, norms, ratios=ratios, slices=slices,
                            extra_directions={k: np.asarray(v[0], dtype=float) for k, v in extra.items()},
                            top=gc.top)
    series.residual = fixed_point_residual(series, op_main=_Operator(spec, eps, main, rg, m))
    return series


def fixed_point_residual(series: NeumannSeriesQ, op_main: _Operator | None = None) -> float:
    """``||w - H(w) - psi/P|| / ||psi/P||`` over the triangle frame, on valid nodes."""
    spec = series.spec
    op = op_main or _Operator(spec, series.eps, series.directions, series.grid, series.m)
    w = series.partial_sum
    r = op(w)
    f = op.forcing()
    diff = w.like(w.values - r.values - f.values, r.valid)
    fs = build_frames(spec.frames, series.p, [0], 0)
    from .weighted_norms import norm_qexp

    den = norm_qexp(f, spec.weights, fs.theta)
    if den == 0.0:
        return float(norm_qexp(diff, spec.weights, fs.theta))
    return norm_qexp(diff, spec.weights, fs.theta) / den


# ---------------------------------------------------------------------------
# decay


@dataclass
class DecayReport:
    """Fitted decay constants of a Neumann series."""

    degenerate: bool
    K_triangle: float | None = None
    K_disc: float | None = None
    disc_quadratic: float | None = None
    disc_target: float | None = None
    frame_fit: dict = field(default_factory=dict)
    bounds_hold: bool = True
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        from ._report import to_jsonable

        return to_jsonable(self.__dict__)


def _lstsq(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.linalg.lstsq(X, y, rcond=None)[0]


def fit_decay(theta: Sequence[float], disc: Sequence[float], frames: Sequence[Sequence[float]],
              target: float, reference: tuple[float, float, float] | None = None) -> DecayReport:
    """Fit the three decay models to recorded norms.

    * triangle frame: ``log n_j = a + j log K``;
    * shrinking discs: ``log n_j = a + j log K - c j (j + 1)``;
    * square frames: ``log n_{j,h} = a + j log K3 + h log K4 - c h (h + 1)``.

    ``reference`` gives the norms of the first term on the triangle frame,
    the first disc and the first frame; the upper bounds are then checked
    with the fitted constants (``K`` clipped to ``[0, 1)``).
    """
    theta = np.asarray(theta, dtype=float)
    n = theta.size
    if n < 4:
        raise InsufficientDataError("need at least four terms to fit decay rates")
    if np.all(theta[1:] == 0):
        return DecayReport(True, 0.0, 0.0, None, target, {}, True, {"reason": "all terms beyond j=0 vanish"})
    j = np.arange(n, dtype=float)
    pos = theta > 0
    a, lk = _lstsq(np.c_[np.ones(pos.sum()), j[pos]], np.log(theta[pos]))
    rep = DecayReport(False, float(math.exp(lk)))
    disc = np.asarray(disc, dtype=float)
    pos = disc > 0
    X = np.c_[np.ones(pos.sum()), j[pos], -j[pos] * (j[pos] + 1)]
    b0, lk2, c = _lstsq(X, np.log(disc[pos]))
    rep.K_disc, rep.disc_quadratic, rep.disc_target = float(math.exp(lk2)), float(c), float(target)
    rows, ys = [], []
    for jj, fr in enumerate(frames):
        for h, v in enumerate(fr):
            if v > 0:
                rows.append([1.0, jj, h, -h * (h + 1)])
                ys.append(math.log(v))
    if len(rows) >= 5:
        c0, lk3, lk4, cf = _lstsq(np.asarray(rows), np.asarray(ys))
        rep.frame_fit = {"K3": float(math.exp(lk3)), "K4": float(math.exp(lk4)), "quadratic": float(cf)}
    # smallest constants for which the stated upper bounds hold exactly
    if reference is not None:
        r_th, r_disc, _ = reference
        jj = j[1:]
        K1b = float(np.max((theta[1:] / r_th) ** (1.0 / jj))) if r_th > 0 else 0.0
        qf = np.exp(-target * jj * (jj + 1))
        K2b = float(np.max((np.maximum(disc[1:], 0.0) / (qf * r_disc)) ** (1.0 / jj))) if r_disc > 0 else 0.0
        rep.details.update({"K1_bound": K1b, "K2_bound": K2b})
        rep.bounds_hold = K1b < 1.0 and K2b < 1.0
    else:
        rep.bounds_hold = rep.K_triangle < 1.0
    return rep


def measure_decay_q(series: NeumannSeriesQ, spec: ProblemSpecQ | None = None, p: int | None = None) -> DecayReport:
    """Fit the triangle, disc and frame decay of a q-series.

    Raises
    ------
    InsufficientDataError
        Fewer than four terms (unless all terms beyond the first vanish).
    """
    spec = spec or series.spec
    th = series.norms["theta"]
    if len(th) < 4:
        if len(th) >= 1 and all(v == 0 for v in th[1:]) and (len(th) == 1 or th[-1] == 0):
            return DecayReport(True, 0.0, 0.0, None, spec.disc_rate, {}, True, {"reason": "operator vanishes"})
        raise InsufficientDataError("series too short for a decay fit")
    ref = (th[0], series.norms["disc"][0], series.norms["frames"][0][0])
    return fit_decay(th, series.norms["disc"], series.norms["frames"], spec.disc_rate, ref)
