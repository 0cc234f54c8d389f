"""Laplace transforms of order k along rays, inverse Fourier transforms in m,
and fractional-kernel convolutions.

The order-k Laplace transform of ``w`` along the ray of direction ``gamma`` is

    L(w)(T) = k * int_0^{inf e^{i gamma}} w(u) exp(-(u/T)**k) du/u,

defined when ``cos(k (gamma - arg T))`` is positive.  The inverse Fourier
transform is ``(2 pi)**-0.5 * int F(m) exp(i z m) dm``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import special

from ._grid import RadialGrid, gauss_legendre
from .errors import (
    ConfigurationError,
    DirectionError,
    DivergenceError,
    GridMismatchError,
    RangeError,
)

__all__ = [
    "RaySpec",
    "LaplaceResult",
    "damping",
    "select_direction",
    "mk_laplace",
    "laplace_weights",
    "check_laplace_dilation",
    "check_laplace_euler",
    "check_laplace_shift",
    "inverse_fourier",
    "fourier_matrix",
    "convolve_E",
    "convolution_matrix",
    "fractional_conv",
]

SQRT_2PI = math.sqrt(2.0 * math.pi)
KERNEL_FLOOR = 1e-16


@dataclass(frozen=True)
class RaySpec:
    """Integration ray for :func:`mk_laplace`.

    Attributes
    ----------
    direction : float
        Ray argument ``gamma`` in radians.
    R_tr : float, optional
        Truncation radius.  ``None`` picks the smallest radius at which the
        kernel falls below ``1e-16`` for the requested ``T``.
    nodes : int
        Gauss-Legendre nodes per unit length of ``log r``.
    delta1 : float
        Minimal damping ``cos(k (gamma - arg T))`` accepted.
    """

    direction: float
    R_tr: float | None = None
    nodes: int = 32
    delta1: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.delta1 <= 1.0:
            raise ConfigurationError("delta1 must lie in (0, 1]")
        if self.nodes < 2:
            raise ConfigurationError("need at least two nodes per unit")


@dataclass(frozen=True)
class LaplaceResult:
    value: complex
    remainder: float
    truncation_radius: float


def damping(direction: float, T: complex, k: int) -> float:
    """``cos(k (direction - arg T))``, the decay rate of the Laplace kernel."""
    return math.cos(k * (direction - np.angle(T)))


def select_direction(
    directions: Sequence[float],
    T: complex,
    k: int,
    delta1: float = 0.5,
    bisector: float | None = None,
) -> int:
    """Index of the admissible direction with maximal damping for ``T``.

    Ties (to ``1e-12``) are broken toward ``bisector`` when given.
    """
    cosines = np.array([damping(d, T, k) for d in directions])
    best = cosines.max()
    if best < delta1:
        raise DirectionError(f"no direction gives damping >= {delta1} at arg T = {np.angle(T):.6f}")
    ties = np.flatnonzero(cosines >= best - 1e-12)
    if bisector is not None and ties.size > 1:
        off = np.abs(np.angle(np.exp(1j * (np.asarray(directions)[ties] - bisector))))
        return int(ties[np.argmin(off)])
    return int(ties[0])


def _check_damping(direction: float, T: complex, k: int, delta1: float) -> float:
    if T == 0:
        raise DirectionError("T must be nonzero")
    c = damping(direction, T, k)
    if c < delta1:
        raise DirectionError(
            f"cos(k(gamma - arg T)) = {c:.4f} < delta1 = {delta1} for gamma = {direction:.4f}"
        )
    return c


def mk_laplace(
    w: Callable[[np.ndarray], np.ndarray],
    k: int,
    ray: RaySpec,
    T: complex,
    full_output: bool = False,
):
    """Order-k Laplace transform of ``w`` along ``ray`` evaluated at ``T``.

    Parameters
    ----------
    w : callable
        Vectorised function of complex ``tau``, vanishing at the origin.
    k : int
    ray : RaySpec
    T : complex
    full_output : bool
        Return a :class:`LaplaceResult` with a truncation estimate.

    Examples
    --------
    >>> round(mk_laplace(lambda t: t, 1, RaySpec(0.0), 0.5).real, 10)
    0.5
    """
    c = _check_damping(ray.direction, T, k, ray.delta1)
    absT = abs(T)
    needed = absT * (-math.log(KERNEL_FLOOR) / c) ** (1.0 / k)
    R = needed if ray.R_tr is None else ray.R_tr
    r_lo = 1e-14 * absT
    x_lo, x_hi = math.log(r_lo), math.log(R)
    n_pan = max(1, int(math.ceil((x_hi - x_lo) / 0.5)))
    t, wt = gauss_legendre(max(4, int(round(ray.nodes * 0.5))))
    h = (x_hi - x_lo) / n_pan
    xs = (x_lo + h * (np.arange(n_pan)[:, None] + 0.5 * (t[None, :] + 1.0))).ravel()
    ws = np.tile(0.5 * h * wt, n_pan)
    u = np.exp(xs) * np.exp(1j * ray.direction)
    kern = np.exp(-((u / T) ** k))
    vals = np.asarray(w(u), dtype=complex)
    if not np.all(np.isfinite(vals * kern)):
        raise RangeError("non-finite Laplace integrand")
    u0 = r_lo * np.exp(1j * ray.direction)
    value = k * (np.sum(ws * vals * kern) + complex(np.asarray(w(np.array([u0])))[0]))
    tail_kernel = math.exp(-c * (R / absT) ** k)
    if tail_kernel > KERNEL_FLOOR * 10 and ray.R_tr is not None:
        raise RangeError(f"truncation radius {R} leaves kernel {tail_kernel:.2e}")
    uR = R * np.exp(1j * ray.direction)
    rem = k * abs(complex(np.asarray(w(np.array([uR])))[0])) * tail_kernel
    if full_output:
        return LaplaceResult(complex(value), float(rem), R)
    return complex(value)


def laplace_weights(
    grid: RadialGrid,
    direction: float,
    k: int,
    T: np.ndarray,
    delta1: float = 0.5,
    top: int | None = None,
) -> np.ndarray:
    """Matrix mapping ray samples to Laplace transforms at the points ``T``.

    Parameters
    ----------
    grid : RadialGrid
    direction : float
        Ray argument.
    k : int
    T : array of complex
    top : int, optional
        Number of leading radial nodes holding valid data; the rule is
        truncated there and the kernel must be negligible beyond it.

    Returns
    -------
    ndarray, shape ``(len(T), top)``
        ``E @ f`` approximates ``L(f)(T)`` for samples ``f`` on the ray.
    """
    T = np.atleast_1d(np.asarray(T, dtype=complex))
    n = grid.size if top is None else int(top)
    for Ti in T:
        _check_damping(direction, Ti, k, delta1)
    r = grid.radii[:n]
    u = r * np.exp(1j * direction)
    expo = -((u[None, :] / T[:, None]) ** k)
    tail = np.max(expo[:, -1].real)
    if tail > math.log(KERNEL_FLOOR):
        raise RangeError(
            f"radial grid ends at {r[-1]:.4g}; kernel still {math.exp(tail):.2e} there"
        )
    if (n - 1) % grid.degree:
        raise ConfigurationError("valid data must end on a panel boundary")
    w = grid.log_weights[:n].copy()
    if n < grid.size:
        # drop the half weight belonging to the panel above the cut
        w[-1] = grid._half_weight(n - 1, side="left")
    E = k * w[None, :] * np.exp(expo)
    # piece below the first node under f ~ A rho + B rho^2 fitted to the first two nodes;
    # g_p = p int_0^1 s^{p-1} exp(-x s^k) ds with x = (u_0/T)^k, by its series
    x = -expo[:, 0]
    g1 = 1.0 - x / (k + 1) + x**2 / (2.0 * (2 * k + 1)) - x**3 / (6.0 * (3 * k + 1))
    g2 = 1.0 - 2.0 * x / (k + 2) + x**2 / (2 * k + 2) - x**3 / (3.0 * (3 * k + 2))
    rho = r[1] / r[0]
    E[:, 0] += k * (rho * g1 - 0.5 * g2) / (rho - 1.0)
    E[:, 1] += k * (0.5 * g2 - g1) / (rho * (rho - 1.0))
    return E


def check_laplace_dilation(w, k: int, q: float, delta: float, T: complex,
                           ray: RaySpec | None = None) -> float:
    """``|L(w)(q^delta T) - L(w(q^delta .))(T)|`` along a ray through ``arg T``."""
    ray = ray or RaySpec(float(np.angle(T)))
    a = q**delta
    lhs = mk_laplace(w, k, ray, a * T)
    rhs = mk_laplace(lambda u: w(a * u), k, ray, T)
    return abs(lhs - rhs)


def check_laplace_euler(w, k: int, T: complex, step: float = 1e-4,
                        ray: RaySpec | None = None) -> float:
    """Residual of ``L(k tau^k w)(T) = T^{k+1} d/dT L(w)(T)``.

    The derivative is a centred difference with complex step ``step * T``.
    """
    ray = ray or RaySpec(float(np.angle(T)))
    lhs = mk_laplace(lambda u: k * u**k * w(u), k, ray, T)
    h = step * T
    d = (mk_laplace(w, k, ray, T + h) - mk_laplace(w, k, ray, T - h)) / (2.0 * h)
    return abs(lhs - T ** (k + 1) * d)


def check_laplace_shift(w, k: int, m: int, T: complex, ray: RaySpec | None = None,
                        n: int = 48) -> float:
    """Relative residual of the shift identity for ``T^m L(w)(T)``.

    The right side is the transform of
    ``tau^k / Gamma(m/k) * int_0^{tau^k} (tau^k - s)^{m/k - 1} w(s^{1/k}) ds/s``.
    """
    ray = ray or RaySpec(float(np.angle(T)))
    lhs = T**m * mk_laplace(w, k, ray, T)
    chi = m / k - 1.0

    def shifted(u):
        u = np.atleast_1d(u)
        vals = np.array([fractional_conv(w, k, chi, -1.0, ui, n=n) for ui in u])
        return u**k / special.gamma(m / k) * vals

    rhs = mk_laplace(shifted, k, ray, T)
    return abs(lhs - rhs) / max(abs(lhs), 1e-300)


# ---------------------------------------------------------------------------
# Fourier side


def _uniform_step(m: np.ndarray) -> float:
    m = np.asarray(m, dtype=float)
    if m.ndim != 1 or m.size < 2:
        raise GridMismatchError("m grid must be one-dimensional with at least two nodes")
    dm = np.diff(m)
    if np.max(np.abs(dm - dm[0])) > 1e-9 * max(1.0, abs(dm[0])):
        raise GridMismatchError("m grid must be uniform")
    return float(dm[0])


def trapezoid_weights(m: np.ndarray) -> np.ndarray:
    dm = _uniform_step(m)
    w = np.full(len(m), dm)
    w[[0, -1]] *= 0.5
    return w


def fourier_matrix(m: np.ndarray, z: np.ndarray, beta: float | None = None) -> np.ndarray:
    """Matrix ``A`` with ``A @ F`` the inverse Fourier transform at the points ``z``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if beta is not None and np.any(np.abs(z.imag) >= beta):
        raise DivergenceError(f"|Im z| must stay below beta = {beta}")
    w = trapezoid_weights(m)
    return np.exp(1j * z[:, None] * np.asarray(m)[None, :]) * (w / SQRT_2PI)[None, :]


def inverse_fourier(F: np.ndarray, m: np.ndarray, z, beta: float | None = None):
    """``(2 pi)^{-1/2} int F(m) exp(i z m) dm`` by the trapezoid rule.

    Parameters
    ----------
    F : array
        Samples on the uniform grid ``m`` (last axis).
    m : array
    z : complex or array of complex
        Must satisfy ``|Im z| < beta`` when ``beta`` is given.

    Examples
    --------
    >>> m = np.linspace(-12, 12, 481)
    >>> round(inverse_fourier(np.exp(-m**2 / 2), m, 0.3).real, 6)
    0.955997
    """
    scalar = np.ndim(z) == 0
    A = fourier_matrix(m, z, beta)
    out = np.asarray(F, dtype=complex) @ A.T
    if not scalar:
        return out
    out = out[..., 0]
    return complex(out) if np.ndim(out) == 0 else out


def convolution_matrix(kernel: Callable[[np.ndarray], np.ndarray], m: np.ndarray,
                       right=None) -> np.ndarray:
    """Matrix of ``g -> (2 pi)^{-1/2} int kernel(m - m1) right(m1) g(m1) dm1``.

    ``kernel`` is evaluated exactly at the differences ``m_i - m_j``;
    ``right`` (optional) is a multiplier sampled on ``m``.
    """
    m = np.asarray(m, dtype=float)
    w = trapezoid_weights(m)
    K = np.asarray(kernel(m[:, None] - m[None, :]), dtype=complex)
    col = w / SQRT_2PI
    if right is not None:
        col = col * np.asarray(right)
    return K * col[None, :]


def convolve_E(f: np.ndarray, g: np.ndarray, m: np.ndarray, m_g: np.ndarray | None = None) -> np.ndarray:
    """``(2 pi)^{-1/2} (f * g)(m)`` on the uniform grid ``m``.

    Both inputs are samples on the same grid; values of ``f`` off the grid
    are taken as zero (the functions decay like ``exp(-beta |m|)``).
    """
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    if m_g is not None and (len(m_g) != len(m) or not np.allclose(m_g, m)):
        raise GridMismatchError("f and g live on different m grids")
    if f.shape[-1] != len(m) or g.shape[-1] != len(m):
        raise GridMismatchError("sample count does not match the m grid")
    dm = _uniform_step(m)
    n = len(m)
    # index offset of m_i - m_j relative to the grid start
    c0 = int(round(-m[0] / dm))
    if abs(m[0] + c0 * dm) > 1e-9 * dm:
        raise GridMismatchError("m grid must contain 0 for grid convolution")
    w = trapezoid_weights(m)
    full = np.convolve(f, g * w)
    # entry for m_i is sum_j f[i - j + c0] (g w)[j]
    out = full[c0 : c0 + n]
    return out / SQRT_2PI


# ---------------------------------------------------------------------------
# fractional kernels


def fractional_conv(f: Callable[[np.ndarray], np.ndarray], k: int, chi: float, nu: float,
                    tau: complex, n: int = 40) -> complex:
    """``int_0^{tau^k} (tau^k - s)^chi s^nu f(s^{1/k}) ds`` along the segment.

    Substituting ``s = (tau v)^k`` leaves a Gauss-Jacobi integral on
    ``[0, 1]``.  For ``nu <= -1`` (the ``ds/s`` forms) ``f`` must vanish
    linearly at the origin and ``f(rho)/rho`` is integrated instead.
    Powers of ``tau`` use the principal branch.

    Examples
    --------
    >>> round(fractional_conv(lambda r: np.ones_like(r), 1, 0.5, 0.0, 1.0).real, 12)
    0.666666666667
    """
    if chi <= -1.0:
        raise DivergenceError("kernel exponent chi must exceed -1")
    tau = complex(tau)
    if tau == 0:
        return 0j
    b = k * nu + k - 1.0
    g = f
    if b <= -1.0:
        b += 1.0
        g = lambda r: f(r) / r  # noqa: E731
        if b <= -1.0:
            raise DivergenceError("s^nu f(s^{1/k}) is not integrable at the origin")
    t, w = special.roots_jacobi(n, chi, b)
    v = 0.5 * (t + 1.0)
    # (1 - v^k)^chi = (1 - v)^chi * ((1 - v^k)/(1 - v))^chi
    smooth = np.ones_like(v) if k == 1 else (np.sum([v**j for j in range(k)], axis=0)) ** chi
    scale = 2.0 ** (-(chi + b + 1.0))
    vals = np.asarray(g(tau * v), dtype=complex)
    integral = scale * np.sum(w * smooth * vals)
    # tau^{k(chi+nu+1)}, times tau when f/rho was integrated; principal branch
    shift = b - (k * nu + k - 1.0)
    power = k * (chi + nu + 1.0) + shift
    return complex(k * np.exp(power * np.log(tau)) * integral)
