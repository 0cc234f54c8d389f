"""Small helpers for complex polynomials stored as ascending coefficient lists."""

from __future__ import annotations

from typing import Sequence

import numpy as np


def as_coeffs(coeffs) -> np.ndarray:
    """Return ``coeffs`` as a complex array with trailing zeros stripped.

    Coefficients are ascending: ``[c0, c1, c2]`` means ``c0 + c1 X + c2 X**2``.
    A bare scalar is read as a constant polynomial.
    """
    arr = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    nz = np.nonzero(arr)[0]
    if nz.size == 0:
        return np.zeros(1, dtype=complex)
    return arr[: nz[-1] + 1].copy()


def degree(coeffs: Sequence[complex]) -> int:
    """Degree of the polynomial, with ``-1`` for the zero polynomial."""
    arr = as_coeffs(coeffs)
    if arr.size == 1 and arr[0] == 0:
        return -1
    return arr.size - 1


def polyval(coeffs: Sequence[complex], x) -> np.ndarray:
    """Evaluate an ascending coefficient list at ``x`` (Horner)."""
    arr = as_coeffs(coeffs)
    x = np.asarray(x, dtype=complex)
    out = np.full(x.shape, arr[-1], dtype=complex)
    for c in arr[-2::-1]:
        out = out * x + c
    return out


def symbol_on_m(coeffs: Sequence[complex], m) -> np.ndarray:
    """Fourier multiplier ``P(i m)`` of the differential operator ``P(d/dz)``."""
    return polyval(coeffs, 1j * np.asarray(m, dtype=float))
