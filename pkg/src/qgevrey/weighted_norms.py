"""Weighted sup-norms on grid functions and empirical operator bounds.

Three norms are used throughout:

* ``E``: ``sup_m (1+|m|)^mu exp(beta |m|) |h(m)|`` on the Fourier side;
* ``qexp``: ``sup (1+|m|)^mu e^{beta|m|} |tau|^{-1}
  exp(-(k1/2) log^2(|tau|+tau0)/log q - alpha log(|tau|+tau0)) |h(tau, m)|``,
  for functions with q-exponential growth in ``tau``;
* ``F``: ``sup (1+|m|)^mu (1+|tau|^{2k}) |tau|^{-1} exp(beta|m| - nu|tau|^k) |h|``,
  for functions with exponential growth of order ``k``.

Suprema are maxima over grid points; every report carries the grid density.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from ._grid import RadialGrid
from ._poly import degree, symbol_on_m
from .errors import ConfigurationError, GridMismatchError
from .geometry import Sector, SectorDomain
from .transforms import trapezoid_weights

__all__ = [
    "NormEWeights",
    "NormQExpWeights",
    "NormFWeights",
    "RayGridFunction",
    "BoundReport",
    "norm_E",
    "norm_qexp",
    "norm_F",
    "qexp_weight",
    "F_weight",
    "E_weight",
    "verify_prop2",
    "verify_prop3",
    "verify_prop4",
    "calibrate_prop3",
    "calibrate_prop4",
    "FROZEN_CONSTANTS",
]


@dataclass(frozen=True)
class NormEWeights:
    beta: float
    mu: float

    def __post_init__(self):
        if self.beta <= 0 or self.mu <= 0:
            raise ConfigurationError("beta and mu must be positive")


@dataclass(frozen=True)
class NormQExpWeights:
    k1: float
    beta: float
    mu: float
    alpha: float
    tau0: float
    q: float

    def __post_init__(self):
        if self.k1 <= 0 or self.tau0 <= 0 or self.q <= 1:
            raise ConfigurationError("need k1 > 0, tau0 > 0 and q > 1")
        if self.beta <= 0 or self.mu <= 0:
            raise ConfigurationError("beta and mu must be positive")

    @property
    def E(self) -> NormEWeights:
        return NormEWeights(self.beta, self.mu)


@dataclass(frozen=True)
class NormFWeights:
    nu: float
    beta: float
    mu: float
    k: int

    def __post_init__(self):
        if self.nu <= 0 or self.k < 1:
            raise ConfigurationError("need nu > 0 and k >= 1")
        if self.beta <= 0 or self.mu <= 0:
            raise ConfigurationError("beta and mu must be positive")

    @property
    def E(self) -> NormEWeights:
        return NormEWeights(self.beta, self.mu)


def E_weight(m, w) -> np.ndarray:
    m = np.abs(np.asarray(m, dtype=float))
    return (1.0 + m) ** w.mu * np.exp(w.beta * m)


def qexp_weight(r, w: NormQExpWeights) -> np.ndarray:
    """Radial factor of the q-exponential norm (for ``r > 0``)."""
    r = np.asarray(r, dtype=float)
    lg = np.log(r + w.tau0)
    return np.exp(-0.5 * w.k1 * lg**2 / math.log(w.q) - w.alpha * lg) / r


def F_weight(r, w: NormFWeights) -> np.ndarray:
    """Radial factor of the exponential-growth norm (for ``r > 0``)."""
    r = np.asarray(r, dtype=float)
    return (1.0 + r ** (2 * w.k)) / r * np.exp(-w.nu * r**w.k)


# ---------------------------------------------------------------------------
# grid functions


@dataclass
class RayGridFunction:
    """Samples of ``h(tau, m)`` on rays times a radial grid times an m grid.

    Attributes
    ----------
    directions : ndarray, shape (n_dir,)
    grid : RadialGrid
        Shared radial nodes; one dilation equals a shift by ``grid.s``.
    m : ndarray, shape (n_m,)
        Uniform Fourier grid.
    values : ndarray, shape (n_dir, grid.size, n_m)
    valid : int
        Number of leading radial nodes holding data.  Dilations shrink it.
    q, delta : float
        Metadata; ``q**delta`` equals the grid ratio.
    """

    directions: np.ndarray
    grid: RadialGrid
    m: np.ndarray
    values: np.ndarray
    valid: int | None = None
    q: float | None = None
    delta: float | None = None

    def __post_init__(self):
        self.directions = np.asarray(self.directions, dtype=float)
        self.m = np.asarray(self.m, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        shape = (self.directions.size, self.grid.size, self.m.size)
        if self.values.shape != shape:
            raise GridMismatchError(f"values have shape {self.values.shape}, expected {shape}")
        if self.valid is None:
            self.valid = self.grid.size
        if self.q is not None and self.delta is not None:
            if abs(self.q**self.delta / self.grid.ratio - 1.0) > 1e-12:
                raise GridMismatchError("grid ratio differs from q**delta")

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_function(cls, func: Callable, directions, grid: RadialGrid, m, **meta) -> "RayGridFunction":
        """Sample ``func(tau, m)`` (broadcasting) on the grid."""
        directions = np.asarray(directions, dtype=float)
        m = np.asarray(m, dtype=float)
        tau = grid.radii[None, :] * np.exp(1j * directions)[:, None]
        vals = np.asarray(func(tau[:, :, None], m[None, None, :]), dtype=complex)
        vals = np.broadcast_to(vals, (directions.size, grid.size, m.size)).copy()
        return cls(directions, grid, m, vals, **meta)

    def like(self, values: np.ndarray, valid: int | None = None) -> "RayGridFunction":
        return RayGridFunction(self.directions, self.grid, self.m, values,
                               self.valid if valid is None else valid, self.q, self.delta)

    def zeros_like(self) -> "RayGridFunction":
        return self.like(np.zeros_like(self.values))

    # -- geometry -------------------------------------------------------------

    @property
    def tau(self) -> np.ndarray:
        """Complex nodes, shape ``(n_dir, n_r)``."""
        return self.grid.radii[None, :] * np.exp(1j * self.directions)[:, None]

    @property
    def density(self) -> dict:
        return {
            "n_directions": int(self.directions.size),
            "n_radial": int(self.grid.size),
            "nodes_per_period": int(self.grid.s),
            "n_m": int(self.m.size),
            "m_max": float(np.max(np.abs(self.m))),
            "valid": int(self.valid),
        }

    def compatible(self, other: "RayGridFunction") -> bool:
        return (
            self.grid == other.grid
            and self.directions.shape == other.directions.shape
            and np.array_equal(self.directions, other.directions)
            and np.array_equal(self.m, other.m)
        )

    def _check(self, other: "RayGridFunction") -> None:
        if not self.compatible(other):
            raise GridMismatchError("grid functions live on different grids")

    # -- algebra --------------------------------------------------------------

    def __add__(self, other: "RayGridFunction") -> "RayGridFunction":
        self._check(other)
        return self.like(self.values + other.values, min(self.valid, other.valid))

    def __sub__(self, other: "RayGridFunction") -> "RayGridFunction":
        self._check(other)
        return self.like(self.values - other.values, min(self.valid, other.valid))

    def __mul__(self, scalar) -> "RayGridFunction":
        return self.like(self.values * scalar)

    __rmul__ = __mul__

    def dilated(self) -> "RayGridFunction":
        """Samples of ``h(q^delta tau, m)``: an index shift by ``grid.s``."""
        s = self.grid.s
        out = np.zeros_like(self.values)
        n = max(self.valid - s, 0)
        out[:, :n] = self.values[:, s : s + n]
        return self.like(out, n)

    def restrict(self, idx) -> "RayGridFunction":
        """Keep only the directions with the given indices."""
        idx = np.atleast_1d(idx)
        return RayGridFunction(self.directions[idx], self.grid, self.m, self.values[idx],
                               self.valid, self.q, self.delta)

    # -- export ---------------------------------------------------------------

    def to_csv(self, stream=None) -> str | None:
        """Dump as CSV with columns ``direction_idx, r, m, re, im``.

        Only the valid radial nodes are written.  Returns the text when no
        stream is given.
        """
        own = stream is None
        stream = io.StringIO() if own else stream
        wr = csv.writer(stream, lineterminator="\n")
        wr.writerow(["direction_idx", "r", "m", "re", "im"])
        r = self.grid.radii
        for d in range(self.directions.size):
            for i in range(self.valid):
                for j, mj in enumerate(self.m):
                    v = self.values[d, i, j]
                    wr.writerow([d, repr(float(r[i])), repr(float(mj)), repr(float(v.real)), repr(float(v.imag))])
        return stream.getvalue() if own else None


# ---------------------------------------------------------------------------
# norms


def norm_E(f, w: NormEWeights, m) -> float:
    """``max_m (1+|m|)^mu e^{beta|m|} |f(m)|`` over the grid.

    Examples
    --------
    >>> m = np.linspace(-5, 5, 11)
    >>> w = NormEWeights(1.0, 2.0)
    >>> norm_E(np.exp(-np.abs(m)) / (1 + np.abs(m))**2, w, m)
    1.0
    """
    f = np.asarray(f)
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        raise ConfigurationError("empty m grid")
    if not np.all(np.isfinite(f)):
        raise ValueError("non-finite value in grid function")
    return float(np.max(E_weight(m, w) * np.abs(f)))


def _masked_norm(h: RayGridFunction, radial_weight: np.ndarray, mweight: np.ndarray,
                 dom: SectorDomain | None) -> float:
    tau = h.tau
    mask = np.abs(tau) > 0
    mask[:, h.valid :] = False
    if dom is not None:
        mask &= dom.contains(tau)
    if not np.any(mask):
        return 0.0
    vals = h.values[mask]
    if not np.all(np.isfinite(vals)):
        raise ValueError("non-finite value in grid function")
    per_node = np.max(np.abs(vals) * mweight[None, :], axis=1)
    rw = np.broadcast_to(radial_weight[None, :], tau.shape)[mask]
    return float(np.max(rw * per_node))


def norm_qexp(h: RayGridFunction, w: NormQExpWeights, dom: SectorDomain | None = None) -> float:
    """q-exponential norm of ``h`` over the grid points in ``dom``.

    Nodes at ``tau = 0`` and beyond ``h.valid`` are excluded.
    """
    return _masked_norm(h, qexp_weight(h.grid.radii, w), E_weight(h.m, w), dom)


def norm_F(h: RayGridFunction, w: NormFWeights, dom: SectorDomain | None = None) -> float:
    """Exponential-growth norm of ``h`` over the grid points in ``dom``."""
    return _masked_norm(h, F_weight(h.grid.radii, w), E_weight(h.m, w), dom)


# ---------------------------------------------------------------------------
# operator bounds


@dataclass
class BoundReport:
    """Outcome of an empirical operator-bound check.

    ``rhs`` is the bound with the stated constant; ``ratio = lhs / rhs``
    must not exceed 1.  ``factors`` holds the individual constants.
    """

    name: str
    lhs: float
    rhs: float
    ratio: float
    grid_density: dict
    weights: dict
    factors: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1.0 + 1e-12) or self.lhs == 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["holds"] = self.holds
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _ratio(lhs: float, rhs: float) -> float:
    if rhs == 0.0:
        return 0.0 if lhs == 0.0 else math.inf
    return lhs / rhs


def _mconv_matrix(c: Callable, R1, m: np.ndarray) -> np.ndarray:
    """``g -> int c(m - m1) R1(i m1) g(m1) dm1`` (trapezoid, no 2 pi factor)."""
    w = trapezoid_weights(m)
    return c(m[:, None] - m[None, :]) * (symbol_on_m(R1, m) * w)[None, :]


def prop2_c12(R1, R2, w: NormQExpWeights, delta: float, m: np.ndarray, n_fine: int = 4001,
              span: float = 60.0) -> float:
    """Constant ``C_{1.2}`` from the proof of the q-convolution bound.

    The inner integral over ``m1`` runs on a fine grid of half-width
    ``span`` so it does not inherit the truncation of the working grid.
    """
    m1 = np.linspace(-span, span, n_fine)
    wt = trapezoid_weights(m1)
    b, mu = w.beta, w.mu
    out = 0.0
    R1v = np.abs(symbol_on_m(R1, m1))
    for mi in np.asarray(m):
        integrand = R1v * np.exp(-b * np.abs(mi - m1) - b * np.abs(m1)) / (
            (1 + np.abs(mi - m1)) ** mu * (1 + np.abs(m1)) ** mu
        )
        val = w.q**delta * (1 + abs(mi)) ** mu * math.exp(b * abs(mi)) / abs(symbol_on_m(R2, mi)) * np.sum(wt * integrand)
        out = max(out, float(val))
    return out


def verify_prop2(a_gamma1: Callable, b: Callable | None, c: Callable, R1, R2, f: RayGridFunction,
                 weights: NormQExpWeights, Omega: SectorDomain, gamma1: float, gamma2: float,
                 delta: float) -> BoundReport:
    """Check the q-dilated convolution bound on a grid.

    Parameters
    ----------
    a_gamma1 : callable
        ``a(tau)`` with ``|a| <= (1 + |tau|)^{-gamma1}``.
    b : callable or None
        ``b(m)`` with ``|b| <= 1/|R2(im)|``; ``None`` uses ``1/R2(im)``.
    c : callable
        Convolution profile ``c(m)`` in the E space.
    R1, R2 : coefficient lists
    f : RayGridFunction
        Grid ratio must equal ``q**delta``.
    weights : NormQExpWeights
    Omega : SectorDomain
    gamma1, gamma2, delta : float
        Require ``gamma1 >= k1 delta + gamma2``.

    Returns
    -------
    BoundReport
        ``rhs = C1 * S * ||c|| * ||f||`` on the dilated region, with the
        proof constant ``C1 = q^{alpha delta} C_{1.2}`` and the sup factor
        ``S``.  The exact ``C_{1.1}`` is reported too.
    """
    if degree(R1) > degree(R2):
        raise ConfigurationError("deg R1 must not exceed deg R2")
    if weights.mu < max(degree(R1), 0) + 1:
        raise ConfigurationError("need mu >= deg R1 + 1")
    if gamma1 < weights.k1 * delta + gamma2 - 1e-12:
        raise ConfigurationError("need gamma1 >= k1 delta + gamma2")
    if abs(weights.q**delta / f.grid.ratio - 1.0) > 1e-12:
        raise GridMismatchError("grid ratio must equal q**delta")
    m = f.m
    b_vals = 1.0 / symbol_on_m(R2, m) if b is None else np.asarray(b(m), dtype=complex)
    K = _mconv_matrix(c, R1, m)
    fd = f.dilated()
    tau = f.tau
    conv = fd.values @ K.T
    lhs_vals = (tau**gamma2 * a_gamma1(tau))[:, :, None] * b_vals[None, None, :] * conv
    lhs_fun = f.like(lhs_vals, fd.valid)
    lhs = norm_qexp(lhs_fun, weights, Omega)
    qd = weights.q**delta
    norm_f = norm_qexp(f, weights, Omega.scaled(qd))
    norm_c = norm_E(c(m), weights.E, m)
    # sup factor and the exact first constant over grid nodes of Omega
    mask = Omega.contains(tau) & (np.abs(tau) > 0)
    mask[:, fd.valid :] = False
    r = np.abs(tau[mask])
    t0, k1, lq, al = weights.tau0, weights.k1, math.log(weights.q), weights.alpha
    S = float(np.max(r**gamma2 / (1 + r) ** gamma1 * ((qd * r + t0) * (r + t0)) ** (k1 * delta / 2))) if r.size else 0.0
    c11 = float(np.max(
        np.exp(-0.5 * k1 * np.log(r + t0) ** 2 / lq - al * np.log(r + t0)
               + 0.5 * k1 * np.log(qd * r + t0) ** 2 / lq + al * np.log(qd * r + t0))
        * r**gamma2 / (1 + r) ** gamma1
    )) if r.size else 0.0
    c12 = prop2_c12(R1, R2, weights, delta, m)
    C1 = weights.q ** (weights.alpha * delta) * c12
    rhs = C1 * S * norm_c * norm_f
    return BoundReport(
        "prop2", lhs, rhs, _ratio(lhs, rhs), f.density, asdict(weights),
        {"C1": C1, "C11": c11, "C12": c12, "sup_factor": S, "norm_c": norm_c, "norm_f": norm_f,
         "C11_bound": weights.q ** (weights.alpha * delta) * S},
    )


def _volterra_on_grid(f: RayGridFunction, k: int, chi: float, nu_ds: float) -> np.ndarray:
    """``int_0^{tau^k} (tau^k - s)^chi s^{nu_ds} f(s^{1/k}) ds/s`` at every node."""
    W = f.grid.volterra_matrix(k, chi, nu_ds)
    phase = np.exp(1j * k * f.directions * (chi + nu_ds))
    out = np.einsum("ij,djm->dim", W, f.values)
    return out * phase[:, None, None]


def _resolved_radius(grid: RadialGrid, w: NormFWeights, budget: float = 2.0) -> float:
    """Largest radius where ``exp(nu r^k)`` varies by at most ``e^budget`` per panel."""
    grow = grid.ratio ** (w.k / grid.panels) - 1.0
    return (budget / (w.nu * grow)) ** (1.0 / w.k)


def _F_inverse(f_template: RayGridFunction, w: NormFWeights) -> RayGridFunction:
    r = f_template.grid.radii
    rad = 1.0 / F_weight(r, w)
    mw = 1.0 / E_weight(f_template.m, w)
    vals = np.broadcast_to(rad[None, :, None] * mw[None, None, :], f_template.values.shape)
    return f_template.like(np.array(vals, dtype=complex))


def calibrate_prop3(grid: RadialGrid, m, w: NormFWeights, chi: float, nu2: float,
                    gamma1: float, r_max: float | None = None) -> float:
    """Constant of the fractional-kernel bound from the worst-case input.

    On a ray the kernel is positive, so the weight-inverse input with the
    extremal multiplier ``(1 + |tau|^k)^{-gamma1}`` realises the operator
    norm at the sampled resolution.  By default the sup stops where the
    grid can no longer resolve ``exp(nu |tau|^k)``.
    """
    f = _F_inverse(RayGridFunction(np.zeros(1), grid, m, np.zeros((1, grid.size, len(m)))), w)
    r = grid.radii
    vals = _volterra_on_grid(f, w.k, chi, nu2 + 1.0) * (1.0 / (1.0 + r**w.k) ** gamma1)[None, :, None]
    dom = Sector(0.0, 0.0, 0.0, _resolved_radius(grid, w) if r_max is None else r_max)
    return norm_F(f.like(vals), w, dom)


def verify_prop3(a_gamma1_k: Callable, chi: float, nu2: int, f: RayGridFunction, weights: NormFWeights,
                 Omega: SectorDomain, gamma1: float, E2: float | None = None) -> BoundReport:
    """Check the fractional-kernel bound ``||a int (tau^k-s)^chi s^nu2 f ds|| <= E2 ||f||``.

    ``E2`` defaults to :data:`FROZEN_CONSTANTS` when the parameters match a
    frozen entry, and to a fresh calibration otherwise.
    """
    if chi <= -1:
        raise ConfigurationError("need chi > -1")
    if 1 + chi + nu2 < 0 or gamma1 < nu2:
        raise ConfigurationError("need 1 + chi + nu2 >= 0 and gamma1 >= nu2")
    k = weights.k
    vals = _volterra_on_grid(f, k, chi, nu2 + 1.0) * a_gamma1_k(f.tau)[:, :, None]
    lhs = norm_F(f.like(vals), weights, Omega)
    nf = norm_F(f, weights, Omega)
    if E2 is None:
        E2 = _frozen("prop3", (k, chi, nu2, gamma1, weights.nu, weights.beta, weights.mu),
                     lambda: calibrate_prop3(f.grid, f.m, weights, chi, nu2, gamma1))
    rhs = E2 * nf
    return BoundReport("prop3", lhs, rhs, _ratio(lhs, rhs), f.density, asdict(weights),
                       {"E2": E2, "norm_f": nf})


def _prop4_apply(b_vals, Q_vals, fprof: Callable, g: RayGridFunction, k: int) -> np.ndarray:
    m = g.m
    w = trapezoid_weights(m)
    K = fprof(m[:, None] - m[None, :]) * (Q_vals * w)[None, :]
    inner = g.values @ K.T
    conv = g.like(inner)
    out = _volterra_on_grid(conv, k, 1.0 / k, 0.0)
    return out * b_vals[None, None, :]


def calibrate_prop4(grid: RadialGrid, m, w: NormFWeights, Qc, Rc, r_max: float | None = None) -> float:
    """Constant of the convolution bound from worst-case inputs on a ray."""
    m = np.asarray(m, dtype=float)
    g = _F_inverse(RayGridFunction(np.zeros(1), grid, m, np.zeros((1, grid.size, len(m)))), w)
    fprof = lambda x: 1.0 / E_weight(x, w)  # noqa: E731
    b_vals = 1.0 / np.abs(symbol_on_m(Rc, m))
    vals = _prop4_apply(b_vals, np.abs(symbol_on_m(Qc, m)), fprof, g, w.k)
    dom = Sector(0.0, 0.0, 0.0, _resolved_radius(grid, w) if r_max is None else r_max)
    return norm_F(g.like(np.abs(vals)), w, dom)


def verify_prop4(b: Callable | None, Qc, Rc, f: Callable, g: RayGridFunction, weights: NormFWeights,
                 Omega: SectorDomain, E3: float | None = None) -> BoundReport:
    """Check ``||b int (tau^k-s)^{1/k} int f(m-m1) Q(im1) g dm1 ds/s|| <= E3 ||f|| ||g||``."""
    if degree(Rc) < degree(Qc):
        raise ConfigurationError("need deg R >= deg Q")
    if weights.mu <= max(degree(Qc), 0) + 1:
        raise ConfigurationError("need mu > deg Q + 1")
    m = g.m
    b_vals = 1.0 / symbol_on_m(Rc, m) if b is None else np.asarray(b(m), dtype=complex)
    vals = _prop4_apply(b_vals, symbol_on_m(Qc, m), f, g, weights.k)
    lhs = norm_F(g.like(vals), weights, Omega)
    nf = norm_E(f(m), weights.E, m)
    ng = norm_F(g, weights, Omega)
    if E3 is None:
        key = (weights.k, tuple(np.atleast_1d(Qc)), tuple(np.atleast_1d(Rc)), weights.nu, weights.beta, weights.mu)
        E3 = _frozen("prop4", key, lambda: calibrate_prop4(g.grid, m, weights, Qc, Rc))
    rhs = E3 * nf * ng
    return BoundReport("prop4", lhs, rhs, _ratio(lhs, rhs), g.density, asdict(weights),
                       {"E3": E3, "norm_f": nf, "norm_g": ng})


# Constants calibrated once on the designated inputs (see tests) and frozen.
FROZEN_CONSTANTS: dict = {}


def _frozen(name: str, key, compute: Callable[[], float]) -> float:
    table = FROZEN_CONSTANTS.setdefault(name, {})
    if key not in table:
        table[key] = float(compute())
    return table[key]
