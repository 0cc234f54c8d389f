"""Closed regions of the Borel plane, symbol roots and frame families.

Every region used by the solvers is a :class:`SectorDomain`: a closed
sector, disc or annulus, or a finite union of those.  Membership is
vectorised and treats boundary points as inside, with an absolute slack of
``1e-12`` on radii and angles.

The module also computes the roots of the two Borel-plane symbols,

    P_m(tau) = Q(im) - R_D(im) (k tau^k)^{d_D}
    Pb_m(tau) = Qb(im) k - Rb_D(im) k^{delta_D} tau^{(delta_D - 1) k}

and measures how far those roots stay from a given region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._poly import as_coeffs, symbol_on_m
from .errors import (
    ConfigurationError,
    DegenerateSymbolError,
    InvalidSymbolError,
)

TWO_PI = 2.0 * math.pi
SLACK = 1e-12

__all__ = [
    "SectorDomain",
    "Sector",
    "Disc",
    "Annulus",
    "Union",
    "GoodCovering",
    "FrameFamily",
    "FrameSet",
    "QSymbol",
    "SeparationReport",
    "PmBoundReport",
    "normalize_angle",
    "angular_offset",
    "compute_roots_q",
    "compute_roots_b",
    "root_separation",
    "pm_lower_bound_check",
    "build_frames",
    "check_covering_root_condition",
]


def normalize_angle(theta):
    """Map angles to ``[0, 2 pi)``."""
    out = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    # mod can return 2 pi itself for tiny negative inputs
    return np.where(out >= TWO_PI, 0.0, out)


def angular_offset(theta, direction):
    """Signed offset of ``theta`` from ``direction`` in ``[-pi, pi)``."""
    return np.mod(np.asarray(theta, dtype=float) - direction + math.pi, TWO_PI) - math.pi


# ---------------------------------------------------------------------------
# regions


class SectorDomain:
    """Closed region of the complex plane.

    Subclasses are :class:`Sector`, :class:`Disc`, :class:`Annulus` and
    :class:`Union`.  All of them are immutable.
    """

    def contains(self, tau) -> np.ndarray:
        """Boolean mask of the points of ``tau`` lying in the closed region."""
        raise NotImplementedError

    def scaled(self, factor: float) -> "SectorDomain":
        """Image of the region under ``tau -> factor * tau``."""
        raise NotImplementedError

    def sample(self, n_ang: int = 64, n_rad: int = 64, r_cap: float = 1e3) -> np.ndarray:
        """Grid of points covering the region, including its boundary.

        Unbounded atoms are sampled up to radius ``r_cap``.
        """
        raise NotImplementedError

    def atoms(self) -> list["SectorDomain"]:
        return [self]

    def __or__(self, other: "SectorDomain") -> "Union":
        return Union((self, other))


def _radial_samples(r_min: float, r_max: float, n_rad: int, r_cap: float) -> np.ndarray:
    if math.isinf(r_max):
        top = max(r_cap, 10.0 * (1.0 + r_min))
        # dense near r_min, geometric towards the cap
        return r_min + np.expm1(np.linspace(0.0, math.log1p(top - r_min), n_rad))
    return np.linspace(r_min, r_max, n_rad)


@dataclass(frozen=True)
class Sector(SectorDomain):
    """Closed sector ``{|arg tau - direction| <= half_aperture, r_min <= |tau| <= r_max}``.

    A zero aperture gives a ray segment; an aperture of at least ``pi`` gives
    a full annulus.
    """

    direction: float
    half_aperture: float
    r_min: float = 0.0
    r_max: float = math.inf

    def __post_init__(self):
        if self.half_aperture < 0:
            raise ConfigurationError("half_aperture must be nonnegative")
        if self.r_min < 0 or self.r_max < self.r_min:
            raise ConfigurationError(f"invalid radii [{self.r_min}, {self.r_max}]")
        object.__setattr__(self, "direction", float(normalize_angle(self.direction)))

    def contains(self, tau) -> np.ndarray:
        tau = np.asarray(tau, dtype=complex)
        r = np.abs(tau)
        ok = (r >= self.r_min - SLACK) & (r <= self.r_max + SLACK)
        if self.half_aperture >= math.pi:
            return ok
        off = np.abs(angular_offset(np.angle(tau), self.direction))
        # the origin has no argument; it belongs to every sector reaching it
        return ok & ((off <= self.half_aperture + SLACK) | (r <= SLACK))

    def scaled(self, factor: float) -> "Sector":
        return Sector(self.direction, self.half_aperture, self.r_min * factor, self.r_max * factor)

    def sample(self, n_ang: int = 64, n_rad: int = 64, r_cap: float = 1e3) -> np.ndarray:
        if self.half_aperture >= math.pi:
            ang = np.linspace(0.0, TWO_PI, n_ang, endpoint=False)
        elif self.half_aperture == 0.0:
            ang = np.array([self.direction])
        else:
            ang = self.direction + np.linspace(-self.half_aperture, self.half_aperture, n_ang)
        rad = _radial_samples(self.r_min, self.r_max, n_rad, r_cap)
        return (rad[None, :] * np.exp(1j * ang)[:, None]).ravel()

    @property
    def angular_range(self) -> tuple[float, float]:
        return self.direction - self.half_aperture, self.direction + self.half_aperture


@dataclass(frozen=True)
class Disc(SectorDomain):
    """Closed disc of the given radius centred at the origin."""

    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ConfigurationError("radius must be nonnegative")

    def contains(self, tau) -> np.ndarray:
        return np.abs(np.asarray(tau, dtype=complex)) <= self.radius + SLACK

    def scaled(self, factor: float) -> "Disc":
        return Disc(self.radius * factor)

    def sample(self, n_ang: int = 64, n_rad: int = 64, r_cap: float = 1e3) -> np.ndarray:
        return Sector(0.0, math.pi, 0.0, self.radius).sample(n_ang, n_rad, r_cap)


@dataclass(frozen=True)
class Annulus(SectorDomain):
    """Closed annulus ``r_min <= |tau| <= r_max`` (``r_max`` may be infinite)."""

    r_min: float
    r_max: float = math.inf

    def __post_init__(self):
        if self.r_min < 0 or self.r_max < self.r_min:
            raise ConfigurationError(f"invalid radii [{self.r_min}, {self.r_max}]")

    def contains(self, tau) -> np.ndarray:
        r = np.abs(np.asarray(tau, dtype=complex))
        return (r >= self.r_min - SLACK) & (r <= self.r_max + SLACK)

    def scaled(self, factor: float) -> "Annulus":
        return Annulus(self.r_min * factor, self.r_max * factor)

    def sample(self, n_ang: int = 64, n_rad: int = 64, r_cap: float = 1e3) -> np.ndarray:
        return Sector(0.0, math.pi, self.r_min, self.r_max).sample(n_ang, n_rad, r_cap)


@dataclass(frozen=True)
class Union(SectorDomain):
    """Finite union of regions."""

    parts: tuple[SectorDomain, ...]

    def __post_init__(self):
        flat: list[SectorDomain] = []
        for part in self.parts:
            flat.extend(part.atoms())
        if not flat:
            raise ConfigurationError("empty union")
        object.__setattr__(self, "parts", tuple(flat))

    def atoms(self) -> list[SectorDomain]:
        return list(self.parts)

    def contains(self, tau) -> np.ndarray:
        tau = np.asarray(tau, dtype=complex)
        out = np.zeros(tau.shape, dtype=bool)
        for part in self.parts:
            out |= part.contains(tau)
        return out

    def scaled(self, factor: float) -> "Union":
        return Union(tuple(p.scaled(factor) for p in self.parts))

    def sample(self, n_ang: int = 64, n_rad: int = 64, r_cap: float = 1e3) -> np.ndarray:
        return np.concatenate([p.sample(n_ang, n_rad, r_cap) for p in self.parts])


# ---------------------------------------------------------------------------
# coverings and frames


@dataclass(frozen=True)
class GoodCovering:
    """Cyclic family of open sectors with a common radius ``eps0``.

    Parameters
    ----------
    sectors : sequence of Sector
        Ordered counterclockwise.  Consecutive sectors must overlap
        (cyclically), no three may share a point and together they must
        cover a punctured disc.
    """

    sectors: tuple[Sector, ...]

    def __post_init__(self):
        secs = tuple(self.sectors)
        object.__setattr__(self, "sectors", secs)
        if len(secs) < 2:
            raise ConfigurationError("a good covering needs at least two sectors")
        radii = {s.r_max for s in secs}
        if len(radii) != 1:
            raise ConfigurationError("covering sectors must share one radius")
        for p in range(len(secs)):
            if not self.overlap(p):
                raise ConfigurationError(f"sectors {p} and {(p + 1) % len(secs)} do not overlap")
        ang = np.linspace(0.0, TWO_PI, 2048, endpoint=False)
        counts = sum(np.abs(angular_offset(ang, s.direction)) < s.half_aperture for s in secs)
        if np.any(counts == 0):
            raise ConfigurationError("covering leaves a gap in the punctured disc")
        if np.any(counts >= 3):
            raise ConfigurationError("three sectors of the covering share a point")

    @property
    def eps0(self) -> float:
        return self.sectors[0].r_max

    def overlap(self, p: int) -> bool:
        a, b = self.sectors[p], self.sectors[(p + 1) % len(self.sectors)]
        gap = np.mod(b.direction - a.direction, TWO_PI)
        return gap < a.half_aperture + b.half_aperture

    def overlap_bisector(self, p: int) -> float:
        """Argument bisecting the overlap of sectors ``p`` and ``p + 1``."""
        a, b = self.sectors[p], self.sectors[(p + 1) % len(self.sectors)]
        lo = a.direction + a.half_aperture
        gap = np.mod(b.direction - a.direction, TWO_PI)
        hi = a.direction + gap - b.half_aperture
        return float(normalize_angle(0.5 * (lo + hi)))


@dataclass(frozen=True)
class FrameFamily:
    """Radii and directions defining the square and triangle frames.

    Attributes
    ----------
    mu0, mu1 : float
        Inner and outer radius of the annulus holding the symbol roots.
    q_hat, q_check : float
        Radial inflation ``> 1`` and deflation ``< 1`` factors.
    q, delta : float
        Dilation base and exponent; the dilation factor is ``q**delta``.
    directions : tuple of float
        Bisecting directions of the root-free sectors, counterclockwise.
    half_aperture : float
        Half aperture of each root-free sector around its direction.
    tol : float
        Tolerance on the constraint ``q_hat mu1 = q**delta q_check mu0``.
    """

    mu0: float
    mu1: float
    q_hat: float
    q_check: float
    q: float
    delta: float
    directions: tuple[float, ...]
    half_aperture: float
    tol: float = 1e-9

    def __post_init__(self):
        object.__setattr__(self, "directions", tuple(float(d) for d in self.directions))

    @property
    def dilation(self) -> float:
        return self.q**self.delta

    def mu0_h(self, h: int) -> float:
        return self.mu0 / self.dilation**h

    def mu1_h(self, h: int) -> float:
        return self.mu1 / self.dilation**h

    def validate(self) -> None:
        """Raise :class:`ConfigurationError` when a frame constraint fails."""
        if not (0.0 < self.mu0 < self.mu1):
            raise ConfigurationError("need 0 < mu0 < mu1")
        if not self.q_hat > 1.0:
            raise ConfigurationError("q_hat must exceed 1")
        if not 0.0 < self.q_check < 1.0:
            raise ConfigurationError("q_check must lie in (0, 1)")
        if self.q <= 1.0 or self.delta <= 0.0:
            raise ConfigurationError("need q > 1 and delta > 0")
        lhs, rhs = self.q_hat * self.mu1, self.dilation * self.q_check * self.mu0
        if abs(lhs - rhs) > self.tol * max(abs(lhs), 1.0):
            raise ConfigurationError(
                f"q_hat*mu1 = {lhs!r} differs from q**delta*q_check*mu0 = {rhs!r}"
            )
        if self.half_aperture <= 0.0:
            raise ConfigurationError("half_aperture must be positive")

    def next_direction(self, p: int) -> float:
        """Direction ``p + 1`` unwrapped so that it follows direction ``p``."""
        d = self.directions
        nxt = d[(p + 1) % len(d)]
        return d[p] + float(np.mod(nxt - d[p], TWO_PI))

    def frame_angular_sector(self, p: int, r_min: float, r_max: float) -> Sector:
        """Sector running from the far edge of sector ``p`` to that of ``p + 1``."""
        lo = self.directions[p] - self.half_aperture
        hi = self.next_direction(p) + self.half_aperture
        return Sector(0.5 * (lo + hi), min(0.5 * (hi - lo), math.pi), r_min, r_max)


@dataclass(frozen=True)
class FrameSet:
    """Square frames, triangle frame and truncated regions for one index ``p``."""

    frames: dict
    theta: SectorDomain
    truncated: dict


def build_frames(ff: FrameFamily, p: int, h_range: Iterable[int], j_max: int) -> FrameSet:
    """Build the square frames, the triangle frame and the truncated regions.

    Parameters
    ----------
    ff : FrameFamily
    p : int
        Index of the first of the two adjacent root-free sectors.
    h_range : iterable of int
        Frame levels to build.
    j_max : int
        The truncated regions are built for ``j = 0..j_max``.

    Returns
    -------
    FrameSet
        ``frames[h]`` is the square frame at level ``h``, ``theta`` is the
        triangle frame (two unbounded sectors plus an outer annulus) and
        ``truncated[j]`` is the union of the frames ``h <= j`` with the disc
        of radius ``q_check * mu0_j``.
    """
    ff.validate()
    nd = len(ff.directions)
    if not 0 <= p < nd:
        raise ConfigurationError(f"sector index {p} out of range")
    d0, d1 = ff.directions[p], ff.directions[(p + 1) % nd]
    U = ff.half_aperture

    def frame(h: int) -> Union:
        m0, m1 = ff.mu0_h(h), ff.mu1_h(h)
        return Union(
            (
                ff.frame_angular_sector(p, m1, ff.q_hat * m1),
                ff.frame_angular_sector(p, ff.q_check * m0, m0),
                Sector(d0, U, ff.q_check * m0, ff.q_hat * m1),
                Sector(d1, U, ff.q_check * m0, ff.q_hat * m1),
            )
        )

    hs = sorted(set(int(h) for h in h_range) | set(range(j_max + 1)))
    frames = {h: frame(h) for h in hs}
    theta = Union((Sector(d0, U), Sector(d1, U), Annulus(ff.q_hat * ff.mu1)))
    truncated = {
        j: Union(tuple(frames[h] for h in range(j + 1)) + (Disc(ff.q_check * ff.mu0_h(j)),))
        for j in range(j_max + 1)
    }
    return FrameSet({h: frames[h] for h in h_range}, theta, truncated)


# ---------------------------------------------------------------------------
# symbols and roots


def _check_root_residual(poly_vals: np.ndarray, scale: float, what: str) -> None:
    if np.any(np.abs(poly_vals) >= 1e-10 * scale):
        raise ArithmeticError(f"{what}: root back-substitution residual too large")


def compute_roots_q(Q_val: complex, RD_val: complex, k: int, dD: int) -> list[complex]:
    """Roots of ``Q - R_D (k tau^k)^{d_D}`` for fixed symbol values.

    Examples
    --------
    >>> [round(abs(r), 5) for r in compute_roots_q(1, 1, 2, 2)]
    [0.70711, 0.70711, 0.70711, 0.70711]
    """
    if Q_val == 0 or RD_val == 0:
        raise InvalidSymbolError("Q and R_D must be nonzero at the sampled m")
    if k < 1 or dD < 1:
        raise ConfigurationError("k and d_D must be positive integers")
    n = k * dD
    base = complex(Q_val) / (complex(RD_val) * float(k) ** dD)
    mod = abs(base) ** (1.0 / n)
    arg = np.angle(base)
    roots = mod * np.exp(1j * (arg + TWO_PI * np.arange(n)) / n)
    vals = Q_val - RD_val * (k * roots**k) ** dD
    _check_root_residual(vals, abs(Q_val), "compute_roots_q")
    return [complex(r) for r in roots]


def compute_roots_b(Qb_val: complex, RDb_val: complex, k: int, deltaD: int) -> list[complex]:
    """Roots of ``Qb k - Rb_D k^{delta_D} tau^{(delta_D - 1) k}``."""
    if deltaD < 2:
        raise DegenerateSymbolError("delta_D < 2 leaves a symbol constant in tau")
    if Qb_val == 0 or RDb_val == 0:
        raise InvalidSymbolError("Qb and Rb_D must be nonzero at the sampled m")
    n = (deltaD - 1) * k
    base = complex(Qb_val) / (complex(RDb_val) * float(k) ** (deltaD - 1))
    mod = abs(base) ** (1.0 / n)
    roots = mod * np.exp(1j * (np.angle(base) + TWO_PI * np.arange(n)) / n)
    vals = Qb_val * k - RDb_val * float(k) ** deltaD * roots**n
    _check_root_residual(vals, abs(Qb_val) * k, "compute_roots_b")
    return [complex(r) for r in roots]


@dataclass(frozen=True)
class QSymbol:
    """Borel symbol ``P_m(tau) = Q(im) - R_D(im) (k tau^k)^{d_D}``.

    ``Q`` and ``RD`` are ascending coefficient lists of polynomials in
    ``X``; the Fourier multiplier of ``Q(d/dz)`` is ``Q(im)``.
    """

    Q: tuple
    RD: tuple
    k: int
    dD: int

    def __post_init__(self):
        object.__setattr__(self, "Q", tuple(as_coeffs(self.Q)))
        object.__setattr__(self, "RD", tuple(as_coeffs(self.RD)))

    def P(self, tau, m) -> np.ndarray:
        """Symbol values, broadcasting ``tau`` against ``m``."""
        tau = np.asarray(tau, dtype=complex)
        Qm = symbol_on_m(self.Q, m)
        Rm = symbol_on_m(self.RD, m)
        return Qm - Rm * (self.k * tau**self.k) ** self.dD

    def roots(self, m: float) -> list[complex]:
        return compute_roots_q(
            complex(symbol_on_m(self.Q, m)), complex(symbol_on_m(self.RD, m)), self.k, self.dD
        )


@dataclass(frozen=True)
class SeparationReport:
    """Empirical root-separation constants of a region."""

    M1: float
    M2: float
    violation: bool
    n_samples: int
    n_ang: int
    n_rad: int


def root_separation(
    domain: SectorDomain,
    roots: Sequence[complex],
    n_ang: int = 64,
    n_rad: int = 64,
    r_cap: float = 1e3,
) -> SeparationReport:
    """Measure how far the roots stay from a region.

    ``M1`` is the sampled infimum of ``|tau - root| / (1 + |tau|)`` over
    points and roots; ``M2`` is the largest, over roots, of the sampled
    infimum of ``|tau - root| / |root|``.  A root inside the region gives
    ``(0, 0)`` with the violation flag set.
    """
    roots = np.asarray(list(roots), dtype=complex)
    if roots.size == 0:
        raise ConfigurationError("no roots given")
    pts = domain.sample(n_ang, n_rad, r_cap)
    if pts.size == 0:
        raise ConfigurationError("empty domain sample")
    if np.any(domain.contains(roots)):
        return SeparationReport(0.0, 0.0, True, pts.size, n_ang, n_rad)
    dist = np.abs(pts[:, None] - roots[None, :])
    M1 = float(np.min(dist / (1.0 + np.abs(pts))[:, None]))
    M2 = float(np.max(np.min(dist, axis=0) / np.abs(roots)))
    return SeparationReport(M1, M2, M1 == 0.0, pts.size, n_ang, n_rad)


@dataclass(frozen=True)
class PmBoundReport:
    """Empirical lower bound of the symbol on a region."""

    c_emp: float
    violation: bool
    n_samples: int
    argmin_tau: complex
    argmin_m: float

    def to_dict(self) -> dict:
        return {
            "c_emp": self.c_emp,
            "violation": self.violation,
            "n_samples": self.n_samples,
            "argmin_tau": [self.argmin_tau.real, self.argmin_tau.imag],
            "argmin_m": self.argmin_m,
        }


def pm_lower_bound_check(
    symbol,
    domain: SectorDomain,
    m_samples: Sequence[float],
    tau_samples: Sequence[complex] | None = None,
    n_ang: int = 64,
    n_rad: int = 64,
) -> PmBoundReport:
    """Empirical constant in ``|P_m(tau)| >= C |R_D(im)| (1 + |tau|)^{k d_D - 1}``.

    Parameters
    ----------
    symbol : QSymbol or object with a ``symbol`` attribute
    domain : SectorDomain
        Region sampled when ``tau_samples`` is not given.
    m_samples : sequence of float
    tau_samples : sequence of complex, optional

    Returns
    -------
    PmBoundReport
        ``c_emp`` is the minimum of the ratio over all samples; a zero
        minimum (a root hit) sets ``violation``.
    """
    sym = getattr(symbol, "symbol", symbol)
    if callable(sym) and not isinstance(sym, QSymbol):
        sym = sym()
    m = np.asarray(list(m_samples), dtype=float)
    if m.size == 0:
        raise ConfigurationError("no m samples")
    tau = domain.sample(n_ang, n_rad) if tau_samples is None else np.asarray(list(tau_samples), dtype=complex)
    if tau.size == 0:
        raise ConfigurationError("no tau samples")
    P = sym.P(tau[:, None], m[None, :])
    RD = np.abs(symbol_on_m(sym.RD, m))[None, :]
    ratio = np.abs(P) / (RD * (1.0 + np.abs(tau[:, None])) ** (sym.k * sym.dD - 1))
    idx = np.unravel_index(np.argmin(ratio), ratio.shape)
    c = float(ratio[idx])
    return PmBoundReport(c, c == 0.0 or bool(np.any(domain.contains(_all_roots(sym, m)))), ratio.size,
                         complex(tau[idx[0]]), float(m[idx[1]]))


def _all_roots(sym: QSymbol, m: np.ndarray) -> np.ndarray:
    return np.array([r for mm in m for r in sym.roots(mm)], dtype=complex)


def check_covering_root_condition(ff: FrameFamily, roots_by_m: Iterable[Sequence[complex]]) -> bool:
    """Whether every closed sector between consecutive directions holds a root.

    The check is repeated for every sampled ``m``.  A root exactly on a
    direction counts for both adjacent sectors; a family with more
    directions than roots is rejected outright.
    """
    dirs = list(ff.directions)
    if len(dirs) < 2:
        raise ConfigurationError("at least two directions are required")
    nd = len(dirs)
    for roots in roots_by_m:
        roots = list(roots)
        if len(roots) < nd:
            return False
        args = normalize_angle(np.angle(np.asarray(roots, dtype=complex)))
        for p in range(nd):
            lo = dirs[p]
            width = ff.next_direction(p) - lo
            rel = np.mod(args - lo + SLACK, TWO_PI) - SLACK
            if not np.any(rel <= width + SLACK):
                return False
    return True
