"""Radial grids that turn the dilation ``tau -> q**delta tau`` into an index shift.

A radial grid covers ``[anchor * ratio**lo, anchor * ratio**hi]``.  Each
period ``[anchor * ratio**n, anchor * ratio**(n+1)]`` is split, in the
variable ``x = log r``, into ``panels`` equal sub-intervals carrying
``degree + 1`` nodes each (shared endpoints).  With ``s = panels * degree``
nodes per period, multiplying every radius by ``ratio`` moves a node ``s``
places up, and every ``anchor * ratio**n`` is a node.

Two node families are supported:

``"lobatto"``
    Gauss-Lobatto nodes on every panel; composite Lobatto quadrature and
    panel-wise polynomial interpolation, both of high order.
``"uniform"``
    Equally spaced nodes in ``log r`` (a geometric radial sequence);
    composite trapezoid quadrature, which is spectrally accurate for
    integrands decaying at both ends of the ray.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from numpy.polynomial import legendre
from scipy import special

from .errors import ConfigurationError


@lru_cache(maxsize=None)
def lobatto_rule(n_points: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Lobatto nodes and weights on ``[-1, 1]`` with ``n_points`` nodes."""
    if n_points < 2:
        raise ConfigurationError("a Lobatto rule needs at least two points")
    n = n_points - 1
    inner = legendre.Legendre.basis(n).deriv().roots() if n > 1 else np.array([])
    x = np.concatenate(([-1.0], np.sort(inner.real), [1.0]))
    Pn = legendre.legval(x, [0] * n + [1])
    w = 2.0 / (n * (n + 1) * Pn**2)
    return x, w


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return legendre.leggauss(n)


@lru_cache(maxsize=None)
def gauss_jacobi(n: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for ``int_{-1}^{1} (1 + t)**beta g(t) dt``."""
    x, w = special.roots_jacobi(n, 0.0, beta)
    return x, w


def barycentric_weights(nodes: np.ndarray) -> np.ndarray:
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / np.prod(diff, axis=1)


def lagrange_matrix(nodes: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Values of the Lagrange basis on ``nodes`` at the points ``t``.

    Returns an array of shape ``(len(t), len(nodes))``.
    """
    bw = barycentric_weights(nodes)
    t = np.asarray(t, dtype=float)
    d = t[:, None] - nodes[None, :]
    exact = np.isclose(d, 0.0, atol=1e-15, rtol=0.0)
    d = np.where(exact, 1.0, d)
    terms = bw[None, :] / d
    out = terms / terms.sum(axis=1, keepdims=True)
    hit = exact.any(axis=1)
    if np.any(hit):
        out[hit] = exact[hit].astype(float)
    return out


@dataclass(frozen=True)
class RadialGrid:
    """Radial nodes aligned with a dilation ratio.

    Parameters
    ----------
    anchor : float
        A radius that is guaranteed to be a node (period boundary).
    ratio : float
        Dilation factor ``q**delta > 1``; one period in radius.
    panels, degree : int
        Sub-panels per period and polynomial degree per panel.
    lo, hi : int
        Period range: radii run from ``anchor * ratio**lo`` to
        ``anchor * ratio**hi`` inclusive.
    kind : {"lobatto", "uniform"}
    """

    anchor: float
    ratio: float
    panels: int
    degree: int
    lo: int
    hi: int
    kind: str = "lobatto"

    def __post_init__(self):
        if self.ratio <= 1.0:
            raise ConfigurationError("the dilation ratio must exceed 1")
        if self.hi <= self.lo:
            raise ConfigurationError("need hi > lo")
        if self.panels < 1 or self.degree < 1:
            raise ConfigurationError("panels and degree must be positive")
        if self.kind not in ("lobatto", "uniform"):
            raise ConfigurationError(f"unknown node family {self.kind!r}")

    @classmethod
    def uniform(cls, anchor: float, ratio: float, s: int, lo: int, hi: int) -> "RadialGrid":
        """Geometric grid with ``s`` equally spaced (in ``log r``) nodes per period."""
        return cls(anchor, ratio, 1, s, lo, hi, "uniform")

    # -- layout ---------------------------------------------------------------

    @property
    def s(self) -> int:
        """Nodes per period, i.e. the index shift of one dilation."""
        return self.panels * self.degree

    @property
    def period(self) -> float:
        return math.log(self.ratio)

    @property
    def panel_width(self) -> float:
        return self.period / self.panels

    @property
    def n_panels_total(self) -> int:
        return (self.hi - self.lo) * self.panels

    @property
    def size(self) -> int:
        return (self.hi - self.lo) * self.s + 1

    @cached_property
    def local_nodes(self) -> np.ndarray:
        """Panel-local node positions in ``[0, 1]``."""
        if self.kind == "lobatto":
            x, _ = lobatto_rule(self.degree + 1)
            return 0.5 * (x + 1.0)
        return np.linspace(0.0, 1.0, self.degree + 1)

    @cached_property
    def x0(self) -> float:
        return math.log(self.anchor) + self.lo * self.period

    @cached_property
    def log_radii(self) -> np.ndarray:
        starts = self.x0 + self.panel_width * np.arange(self.n_panels_total)
        body = (starts[:, None] + self.panel_width * self.local_nodes[None, :-1]).ravel()
        return np.concatenate((body, [self.x0 + self.panel_width * self.n_panels_total]))

    @cached_property
    def radii(self) -> np.ndarray:
        r = np.exp(self.log_radii)
        # pin period boundaries exactly so dilation images coincide bitwise
        idx = np.arange(0, self.size, self.s)
        r[idx] = self.anchor * self.ratio ** (self.lo + np.arange(idx.size)).astype(float)
        return r

    def node_of_period(self, n: int) -> int:
        """Index of the node at radius ``anchor * ratio**n``."""
        if not self.lo <= n <= self.hi:
            raise IndexError(f"period {n} outside [{self.lo}, {self.hi}]")
        return (n - self.lo) * self.s

    def index_of_radius(self, r: float, rtol: float = 1e-9) -> int:
        """Index of the node equal to ``r`` (relative tolerance ``rtol``)."""
        i = int(np.argmin(np.abs(np.log(self.radii) - math.log(r))))
        if abs(self.radii[i] / r - 1.0) > rtol:
            raise ConfigurationError(f"radius {r} is not a grid node")
        return i

    def with_periods(self, lo: int, hi: int) -> "RadialGrid":
        return RadialGrid(self.anchor, self.ratio, self.panels, self.degree, lo, hi, self.kind)

    # -- quadrature -----------------------------------------------------------

    @cached_property
    def log_weights(self) -> np.ndarray:
        """Weights of the composite rule for ``int f(r) dr / r`` over the grid span."""
        w = np.zeros(self.size)
        if self.kind == "lobatto":
            _, lw = lobatto_rule(self.degree + 1)
            local = 0.5 * self.panel_width * lw
        else:
            # trapezoid on the equally spaced nodes
            local = np.full(self.degree + 1, self.panel_width / self.degree)
            local[[0, -1]] *= 0.5
        for p in range(self.n_panels_total):
            a = p * self.degree
            w[a : a + self.degree + 1] += local
        return w

    def segment_weights(self, r_a: float, r_b: float) -> tuple[slice, np.ndarray]:
        """Slice and weights of the rule restricted to ``[r_a, r_b]``.

        Both radii must be panel boundaries, so the restricted rules of
        adjacent segments add up to the rule on their union.
        """
        ia, ib = self.index_of_radius(r_a), self.index_of_radius(r_b)
        if (ia % self.degree) or (ib % self.degree):
            raise ConfigurationError("segment ends must be panel boundaries")
        w = np.zeros(ib - ia + 1)
        full = self.log_weights
        # interior nodes keep their composite weight; ends keep only the inner half
        w[:] = full[ia : ib + 1]
        w[0] = self._half_weight(ia, side="right")
        w[-1] = self._half_weight(ib, side="left")
        return slice(ia, ib + 1), w

    def _half_weight(self, i: int, side: str) -> float:
        if self.kind == "lobatto":
            _, lw = lobatto_rule(self.degree + 1)
            end = 0.5 * self.panel_width * lw[0]
        else:
            end = 0.5 * self.panel_width / self.degree
        if side == "right" and i == self.size - 1:
            return 0.0
        if side == "left" and i == 0:
            return 0.0
        return end

    # -- interpolation --------------------------------------------------------

    def interpolation_stencil(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Node indices and weights interpolating at log-radii ``x``.

        Returns ``(idx, wts)`` of shape ``(len(x), degree + 1)``.
        """
        x = np.asarray(x, dtype=float)
        u = (x - self.x0) / self.panel_width
        pan = np.clip(np.floor(u).astype(int), 0, self.n_panels_total - 1)
        t = u - pan
        wts = lagrange_matrix(self.local_nodes, t)
        idx = pan[:, None] * self.degree + np.arange(self.degree + 1)[None, :]
        return idx, wts

    # -- Volterra weights -----------------------------------------------------

    def volterra_matrix(self, k: int, chi: float, nu: float, n_far: int | None = None,
                        n_near: int | None = None) -> np.ndarray:
        """Real matrix ``W`` with ``(W f)_i ~ k int_0^{r_i} (r_i^k - rho^k)^chi rho^{k nu} f(rho) drho/rho``.

        ``f`` is sampled at the nodes and is assumed to vanish linearly at
        the origin; the piece below the first node uses that behaviour.
        Results are cached per ``(k, chi, nu)``.
        """
        key = (int(k), float(chi), float(nu), n_far, n_near)
        cache = _VOLTERRA_CACHE.setdefault(self, {})
        if key not in cache:
            cache[key] = _build_volterra(self, k, chi, nu, n_far, n_near)
        return cache[key]


_VOLTERRA_CACHE: dict = {}


def _build_volterra(g: RadialGrid, k: int, chi: float, nu: float, n_far, n_near) -> np.ndarray:
    if chi <= -1.0:
        raise ConfigurationError("kernel exponent must exceed -1")
    N = g.size
    deg = g.degree
    xs = g.log_radii
    r = g.radii
    W = np.zeros((N, N))
    n_far = n_far or (deg + 6)
    n_near = n_near or (deg + 10)
    Lp = g.panel_width
    local = g.local_nodes
    kk = float(k)

    # origin piece under f(rho) ~ A rho + B rho^2, fitted to the first two nodes and
    # integrated exactly; covers data vanishing linearly or quadratically
    u0 = np.minimum((r[0] / r) ** kk, 1.0)
    J = []
    for p in (1, 2):
        a = nu + p / kk
        J.append(r ** (kk * (chi + nu) + p) * special.beta(a, chi + 1.0) * special.betainc(a, chi + 1.0, u0))
    r0, r1 = r[0], r[1]
    det = r0 * r1 * (r1 - r0)
    W[:, 0] += (r1**2 * J[0] - r1 * J[1]) / det
    W[:, 1] += (r0 * J[1] - r0**2 * J[0]) / det

    # panel containing each target as its right end (target 0 has none)
    pan_of = np.zeros(N, dtype=int)
    pan_of[1:] = (np.arange(1, N) - 1) // deg

    def kernel(xi, x):
        # k (r_i^k - rho^k)^chi rho^{k nu}, both in log variables
        diff = np.exp(kk * xi) - np.exp(kk * x)
        return kk * np.maximum(diff, 0.0) ** chi * np.exp(kk * nu * x)

    # far panels: all complete panels strictly below panel pan_of[i] - 1
    tg, wg = gauss_legendre(n_far)
    tloc = 0.5 * (tg + 1.0)
    Lmat = lagrange_matrix(local, tloc)  # (n_far, deg+1)
    n_tot = g.n_panels_total
    pstart = g.x0 + Lp * np.arange(n_tot)
    xq = pstart[:, None] + Lp * tloc[None, :]  # (P, n_far)
    for i in range(1, N):
        last_far = pan_of[i] - 2
        if last_far < 0:
            continue
        K = kernel(xs[i], xq[: last_far + 1]) * (0.5 * Lp * wg)[None, :]
        contrib = K @ Lmat  # (P, deg+1)
        cols = (np.arange(last_far + 1)[:, None] * deg + np.arange(deg + 1)[None, :])
        np.add.at(W[i], cols.ravel(), contrib.ravel())

    # previous panel with grading toward its right end, then the singular part
    tgr, wgr = gauss_legendre(n_near)
    ug = 0.5 * (tgr + 1.0)
    # x = right - len * (1 - u)^3 clusters nodes at the right end
    grade = (1.0 - ug) ** 3
    dgrade = 3.0 * (1.0 - ug) ** 2 * 0.5 * wgr
    tj, wj = gauss_jacobi(n_near, float(chi))
    for i in range(1, N):
        p = pan_of[i]
        pieces_x = []
        pieces_w = []
        if p >= 1:
            right = pstart[p]
            x = right - Lp * grade
            pieces_x.append(x)
            pieces_w.append(kernel(xs[i], x) * Lp * dgrade)
        left = pstart[p]
        length = xs[i] - left
        if length > 0:
            # int_left^{x_i} (x_i - x)^chi g(x) dx with y = x_i - x = length (1 + t)/2
            y = 0.5 * length * (tj + 1.0)
            x = xs[i] - y
            smooth = kk * np.exp(kk * nu * x) * np.exp(kk * chi * xs[i])
            ratio = np.where(y > 0, -np.expm1(-kk * y) / np.where(y > 0, y, 1.0), kk)
            smooth = smooth * ratio**chi
            pieces_x.append(x)
            pieces_w.append(smooth * wj * (0.5 * length) ** (chi + 1.0))
        if not pieces_x:
            continue
        x = np.concatenate(pieces_x)
        w = np.concatenate(pieces_w)
        idx, wts = g.interpolation_stencil(x)
        np.add.at(W[i], idx.ravel(), (wts * w[:, None]).ravel())
    return W
