"""Closed-form coefficient descriptors.

Fourier-side profiles ``C(m, eps)``, polynomial forcings ``psi(tau, m, eps)``
and scalar coefficients vanishing at ``eps = 0``.  Every descriptor knows its
inverse Fourier transform so that physical-space residuals can be evaluated
without extra quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, SchemaError

__all__ = ["GaussianProfile", "EpsPoly", "CoefficientProfile", "PolynomialForcing", "VanishingScalar"]


def _cpx(x) -> complex:
    """Accept ``[re, im]`` pairs as used in scenario files."""
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise SchemaError(f"complex numbers are encoded as [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    return complex(x)


@dataclass(frozen=True)
class GaussianProfile:
    """``amplitude * exp(-(m - shift)^2 / (2 width^2))``.

    Its inverse Fourier transform
    ``(2 pi)^{-1/2} int G(m) e^{izm} dm`` equals
    ``amplitude * width * exp(i shift z - width^2 z^2 / 2)``.
    """

    amplitude: complex = 1.0
    width: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "amplitude", _cpx(self.amplitude))
        if self.width <= 0:
            raise ConfigurationError("Gaussian width must be positive")

    def __call__(self, m):
        m = np.asarray(m, dtype=float)
        return self.amplitude * np.exp(-((m - self.shift) ** 2) / (2.0 * self.width**2))

    def inverse_fourier(self, z):
        z = np.asarray(z, dtype=complex)
        return self.amplitude * self.width * np.exp(1j * self.shift * z - 0.5 * self.width**2 * z**2)

    def norm_E(self, beta: float, mu: float, m_max: float = 60.0, n: int = 24001) -> float:
        """Weighted sup-norm on a fine grid (profiles decay fast)."""
        m = np.linspace(-m_max, m_max, n)
        return float(np.max((1 + np.abs(m)) ** mu * np.exp(beta * np.abs(m)) * np.abs(self(m))))

    @classmethod
    def from_dict(cls, d: dict) -> "GaussianProfile":
        return cls(d.get("amplitude", 1.0), float(d.get("width", 1.0)), float(d.get("shift", 0.0)))

    def to_dict(self) -> dict:
        a = complex(self.amplitude)
        return {"kind": "gaussian", "amplitude": [a.real, a.imag], "width": self.width, "shift": self.shift}


@dataclass(frozen=True)
class EpsPoly:
    """Polynomial ``sum_n c_n eps^n`` with ascending coefficients."""

    coeffs: tuple = (1.0,)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_cpx(c) for c in self.coeffs))

    def __call__(self, eps):
        out = 0.0 * np.asarray(eps, dtype=complex)
        for c in reversed(self.coeffs):
            out = out * eps + c
        return out

    def sup_abs(self, radius: float) -> float:
        return float(sum(abs(c) * radius**n for n, c in enumerate(self.coeffs)))


@dataclass(frozen=True)
class CoefficientProfile:
    """``C(m, eps) = factor(eps) * profile(m)`` with a polynomial factor."""

    profile: GaussianProfile
    factor: EpsPoly = field(default_factory=EpsPoly)

    def __call__(self, m, eps=0.0):
        return self.factor(eps) * self.profile(m)

    def inverse_fourier(self, z, eps=0.0):
        return self.factor(eps) * self.profile.inverse_fourier(z)

    def sup_norm_E(self, beta: float, mu: float, eps0: float) -> float:
        return self.factor.sup_abs(eps0) * self.profile.norm_E(beta, mu)

    @property
    def is_zero(self) -> bool:
        return self.profile.amplitude == 0 or all(c == 0 for c in self.factor.coeffs)

    @classmethod
    def from_dict(cls, d: dict) -> "CoefficientProfile":
        kind = d.get("kind", "gaussian")
        if kind != "gaussian":
            raise ConfigurationError(f"unknown profile kind {kind!r}")
        return cls(GaussianProfile.from_dict(d), EpsPoly(tuple(d.get("eps_factor", [1.0]))))


@dataclass(frozen=True)
class PolynomialForcing:
    """``psi(tau, m, eps) = factor(eps) * sum_n a_n tau^n * profile(m)``, ``n >= 1``.

    A polynomial in ``tau`` is entire with q-exponential growth of any
    order, and its Laplace transform is explicit:
    ``k int psi(u) e^{-(u/T)^k} du/u = sum_n Gamma(n/k) a_n T^n``.
    """

    taylor: tuple
    profile: GaussianProfile
    factor: EpsPoly = field(default_factory=EpsPoly)

    def __post_init__(self):
        object.__setattr__(self, "taylor", tuple(_cpx(a) for a in self.taylor))

    def __call__(self, tau, m, eps=0.0):
        tau = np.asarray(tau, dtype=complex)
        s = 0.0 * tau
        for a in reversed(self.taylor):
            s = (s + a) * tau
        return self.factor(eps) * s * self.profile(m)

    def laplace(self, T, m, k: int, eps=0.0):
        T = np.asarray(T, dtype=complex)
        s = 0.0 * T
        for n, a in enumerate(self.taylor, start=1):
            s = s + math.gamma(n / k) * a * T**n
        return self.factor(eps) * s * self.profile(m)

    def physical(self, t, z, eps, k: int):
        """Forcing in physical variables: the Laplace transform at ``eps t``, inverse Fourier in ``m``."""
        T = np.asarray(eps * np.asarray(t, dtype=complex))
        s = 0.0 * T
        for n, a in enumerate(self.taylor, start=1):
            s = s + math.gamma(n / k) * a * T**n
        return self.factor(eps) * s * self.profile.inverse_fourier(z)

    @property
    def is_zero(self) -> bool:
        return self.profile.amplitude == 0 or all(a == 0 for a in self.taylor)

    @classmethod
    def from_dict(cls, d: dict) -> "PolynomialForcing":
        return cls(tuple(d["taylor"]), GaussianProfile.from_dict(d.get("profile", {})),
                   EpsPoly(tuple(d.get("eps_factor", [1.0]))))


@dataclass(frozen=True)
class VanishingScalar:
    """``c(eps) = eps * quotient(eps)``; ``quotient`` is evaluated directly.

    Keeps ``c(eps) / eps`` analytic instead of dividing at small ``eps``.
    """

    quotient: EpsPoly = field(default_factory=lambda: EpsPoly((0.0,)))

    def __call__(self, eps):
        return eps * self.quotient(eps)

    def over_eps(self, eps):
        return self.quotient(eps)

    def sup_over_eps(self, radius: float) -> float:
        return self.quotient.sup_abs(radius)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.quotient.coeffs)

    @classmethod
    def from_dict(cls, d) -> "VanishingScalar":
        if isinstance(d, dict):
            return cls(EpsPoly(tuple(d.get("quotient", [0.0]))))
        return cls(EpsPoly(tuple(d)))
