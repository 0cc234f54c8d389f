"""Formal series, flatness fits, remainder bounds and the Dirichlet-sum estimate.

Formal coefficients are stored on the Fourier side as polynomials in ``t``
whose coefficients are functions on the m grid: ``coeffs[m][n]`` is the
array multiplying ``t**n`` in ``h_m``.  Euler operators and dilations act
exactly on this representation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._poly import symbol_on_m
from ._report import to_jsonable
from .borel_solver import ProblemSpecB
from .errors import ConfigurationError, InsufficientDataError
from .qconv_solver import GridConfig, ProblemSpecQ
from .transforms import fourier_matrix, trapezoid_weights

__all__ = [
    "FormalSeriesF",
    "FlatnessReport",
    "RemainderReport",
    "DirichletReport",
    "formal_coeffs_q",
    "formal_coeffs_b",
    "remainder_check",
    "fit_flatness",
    "dirichlet_sum",
    "dirichlet_bound_check",
    "euler_maclaurin_check",
]

SQRT_2PI = math.sqrt(2.0 * math.pi)


def _falling(n: int, p: int) -> int:
    out = 1
    for i in range(p):
        out *= n - i
    return out


def eps_power_over_factorial(eps: complex, m: int) -> complex:
    """``eps**m / m!``, through logarithms once ``m > 20``."""
    if m <= 20:
        return complex(eps) ** m / math.factorial(m)
    if eps == 0:
        return 0j
    return cmath.exp(m * cmath.log(complex(eps)) - math.lgamma(m + 1))


# ---------------------------------------------------------------------------
# t-polynomial helpers; a polynomial is an array (n_terms, n_m)


def _pad(a: np.ndarray, n: int) -> np.ndarray:
    if a.shape[0] >= n:
        return a
    return np.vstack([a, np.zeros((n - a.shape[0], a.shape[1]), dtype=complex)])


def _add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = max(a.shape[0], b.shape[0])
    return _pad(a, n) + _pad(b, n)


def _euler(a: np.ndarray, k: int, power: int) -> np.ndarray:
    """``(t^{k+1} d/dt)^power`` applied to a t-polynomial."""
    for _ in range(power):
        out = np.zeros((a.shape[0] + k, a.shape[1]), dtype=complex)
        n = np.arange(a.shape[0])
        out[k:] = n[:, None] * a
        a = out
    return a


def _dilate(a: np.ndarray, factor: float) -> np.ndarray:
    return a * (factor ** np.arange(a.shape[0]))[:, None]


def _t_monomial_op(a: np.ndarray, d: int, delta: int) -> np.ndarray:
    """``t^d (d/dt)^delta`` applied to a t-polynomial."""
    n_out = max(a.shape[0] - delta + d, 1)
    out = np.zeros((n_out, a.shape[1]), dtype=complex)
    for n in range(delta, a.shape[0]):
        out[n - delta + d] += _falling(n, delta) * a[n]
    return out


def _integrate(a: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + 1, a.shape[1]), dtype=complex)
    out[1:] = a / np.arange(1, a.shape[0] + 1)[:, None]
    return out


def _trim(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.any(a != 0, axis=1))
    return a[: (nz[-1] + 1 if nz.size else 1)]


@dataclass
class FormalSeriesF:
    """Formal series ``sum_m h_m eps^m / m!`` with t-polynomial coefficients.

    Attributes
    ----------
    coeffs : list of ndarray
        ``coeffs[m]`` has shape ``(deg_m + 1, n_m)``; row ``n`` multiplies ``t**n``.
    m : ndarray
        Fourier grid.
    kind : str
        ``"q"`` or ``"b"``.
    """

    coeffs: list
    m: np.ndarray
    kind: str = "q"

    @property
    def n_max(self) -> int:
        return len(self.coeffs) - 1

    def fourier(self, index: int, t) -> np.ndarray:
        """``h_index(t, m)`` on the m grid; shape ``(len(t), n_m)``."""
        t = np.atleast_1d(np.asarray(t, dtype=complex))
        a = self.coeffs[index]
        out = np.zeros((t.size, a.shape[1]), dtype=complex)
        for row in a[::-1]:
            out = out * t[:, None] + row[None, :]
        return out

    def physical(self, index: int, t, z) -> np.ndarray:
        """``h_index(t, z)`` on the tensor grid ``t x z``."""
        return self.fourier(index, t) @ fourier_matrix(self.m, np.atleast_1d(z)).T

    def partial_sum(self, eps: complex, n: int, t, z) -> np.ndarray:
        """``sum_{m <= n} h_m(t, z) eps^m / m!``."""
        if n > self.n_max:
            raise ConfigurationError(f"series only holds terms up to {self.n_max}")
        out = 0.0
        for i in range(n + 1):
            out = out + eps_power_over_factorial(eps, i) * self.physical(i, t, z)
        return np.asarray(out)

    def to_rows(self) -> list[list]:
        """Rows ``(m_index, t_power, m, re, im)`` for CSV output."""
        rows = []
        for i, a in enumerate(self.coeffs):
            for n, row in enumerate(a):
                for mm, v in zip(self.m, row):
                    rows.append([i, n, repr(float(mm)), repr(float(v.real)), repr(float(v.imag))])
        return rows


def _conv_matrix(profile, R, m: np.ndarray) -> np.ndarray:
    wts = trapezoid_weights(m)
    return profile(m[:, None] - m[None, :]) * (symbol_on_m(R, m) * wts)[None, :] / SQRT_2PI


def formal_coeffs_q(spec: ProblemSpecQ, n_max: int, grid: GridConfig | None = None) -> FormalSeriesF:
    """Coefficients ``h_0..h_{n_max}`` of the formal solution of the q-problem.

    Each ``h_m`` solves ``Q(im) h_m = R_D(im) m!/(m - k d_D)! (t^{k+1} d_t)^{d_D} h_{m - k d_D}
    + sum_l sum_{m1 + m2 = m - Delta_l} m!/(m1! m2!) (t^{k+1} d_t)^{d_l} [C_{l, m1} * R_l h_{m2}](q^delta t)
    + d_eps^m F(t, m, 0)`` where ``*`` is the m-convolution and ``C_{l, m1}``
    is the ``m1``-th eps-derivative of ``C_l`` at zero.  Terms with negative
    indices are absent.

    Parameters
    ----------
    spec : ProblemSpecQ
    n_max : int
    grid : GridConfig, optional
        Supplies the m grid.
    """
    if n_max < 0:
        raise ConfigurationError("n_max must be nonnegative")
    m = (grid or GridConfig()).m
    k = spec.k
    Qm = symbol_on_m(spec.Q, m)
    RD = symbol_on_m(spec.R[-1], m)
    dD = spec.d[-1]
    shift_D = k * dD
    dil = spec.dilation
    base = {}
    for l in range(spec.D - 1):
        if not spec.C[l].is_zero:
            base[l] = _conv_matrix(spec.C[l].profile, spec.R[l], m)
    psi = spec.psi
    G = psi.profile(m)
    coeffs: list[np.ndarray] = []
    for mi in range(n_max + 1):
        acc = np.zeros((1, m.size), dtype=complex)
        # forcing: m! [eps^m] factor(eps) sum_n Gamma(n/k) a_n (eps t)^n
        if not psi.is_zero:
            f = np.zeros((mi + 1, m.size), dtype=complex)
            for n, a in enumerate(psi.taylor, start=1):
                i = mi - n
                if 0 <= i < len(psi.factor.coeffs):
                    f[n] += math.factorial(mi) * psi.factor.coeffs[i] * math.gamma(n / k) * a * G
            acc = _add(acc, f)
        if mi >= shift_D:
            prev = coeffs[mi - shift_D]
            term = _euler(prev, k, dD) * RD[None, :] * (math.factorial(mi) / math.factorial(mi - shift_D))
            acc = _add(acc, term)
        for l, K in base.items():
            top = mi - spec.Delta[l]
            fac = spec.C[l].factor.coeffs
            for m1 in range(0, top + 1):
                if m1 >= len(fac) or fac[m1] == 0:
                    continue
                m2 = top - m1
                # C_{l, m1} = m1! fac[m1] profile, so the multinomial weight is m!/m2! fac[m1]
                w = math.factorial(mi) / math.factorial(m2) * fac[m1]
                inner = _dilate(coeffs[m2], dil) @ K.T
                acc = _add(acc, w * _euler(inner, k, spec.d[l]))
        coeffs.append(_trim(acc / Qm[None, :]))
    return FormalSeriesF(coeffs, m, "q")


def formal_coeffs_b(spec: ProblemSpecB, spec_q: ProblemSpecQ, formal_q: FormalSeriesF, n_max: int
                    ) -> FormalSeriesF:
    """Coefficients ``H_0..H_{n_max}`` of the formal solution of the Borel-plane problem.

    ``Q(im) d_t H_m = sum_l m!/(m - Delta_l)! t^{d_l} d_t^{delta_l} R_l(im) H_{m - Delta_l}
    + sum m!/(m1! m2! m3!) c00_{m1} [C00_{m2} * R_0 H_{m3}] + sum m!/(m1! m2!) cF_{m1} h_{m2}``,
    integrated in ``t`` from 0 with ``H_m(0) = 0``.
    """
    if n_max < 0:
        raise ConfigurationError("n_max must be nonnegative")
    if formal_q.n_max < n_max:
        raise ConfigurationError("formal q-series is shorter than n_max")
    if min(spec.Delta) < 1:
        raise ConfigurationError("every Delta_l must be at least 1 for the recursion to be explicit")
    m = formal_q.m
    Qm = symbol_on_m(spec.Q, m)
    Rl = [symbol_on_m(r, m) for r in spec.R]
    # eps-derivatives at 0: c(eps) = eps * quotient(eps)
    c00 = [0j] + list(spec.c00.quotient.coeffs)
    cF = [0j] + list(spec.cF.quotient.coeffs)
    K0 = None if spec.C00.is_zero else _conv_matrix(spec.C00.profile, spec.R[0], m)
    fac0 = spec.C00.factor.coeffs
    coeffs: list[np.ndarray] = []
    for mi in range(n_max + 1):
        acc = np.zeros((1, m.size), dtype=complex)
        for l in range(spec.D):
            j = mi - spec.Delta[l]
            if j < 0:
                continue
            term = _t_monomial_op(coeffs[j], spec.d[l], spec.delta[l]) * Rl[l + 1][None, :]
            acc = _add(acc, term * (math.factorial(mi) / math.factorial(j)))
        if K0 is not None:
            for m1 in range(1, min(mi, len(c00) - 1) + 1):
                if c00[m1] == 0:
                    continue
                for m2 in range(0, mi - m1 + 1):
                    if m2 >= len(fac0) or fac0[m2] == 0:
                        continue
                    m3 = mi - m1 - m2
                    if m3 >= mi:
                        continue
                    # c00_{m1} = m1! c00[m1], C00_{m2} = m2! fac0[m2] profile
                    w = math.factorial(mi) / math.factorial(m3) * c00[m1] * fac0[m2]
                    acc = _add(acc, w * (coeffs[m3] @ K0.T))
        for m1 in range(1, min(mi, len(cF) - 1) + 1):
            if cF[m1] == 0:
                continue
            m2 = mi - m1
            acc = _add(acc, formal_q.coeffs[m2] * (math.factorial(mi) / math.factorial(m2) * cF[m1]))
        coeffs.append(_trim(_integrate(acc / Qm[None, :])))
    return FormalSeriesF(coeffs, m, "b")


# ---------------------------------------------------------------------------
# remainder bounds


@dataclass
class RemainderReport:
    """Remainders ``R_n(eps)`` and the fitted q-Gevrey bound for each ``kappa``."""

    status: str
    eps: np.ndarray
    n: np.ndarray
    remainders: np.ndarray
    fits: dict = field(default_factory=dict)
    valley: list = field(default_factory=list)
    kappa: float = math.nan

    @property
    def holds(self) -> bool:
        return self.status == "ok"

    def to_dict(self) -> dict:
        return to_jsonable({
            "status": self.status, "kappa": self.kappa,
            "eps_mod": [abs(e) for e in self.eps], "eps_arg": [float(np.angle(e)) for e in self.eps],
            "n": [int(x) for x in self.n], "remainders": self.remainders.tolist(),
            "fits": self.fits, "valley": self.valley,
        })


def _fit_remainder(R: np.ndarray, eps_mod: np.ndarray, n: np.ndarray, kappa: float, q: float,
                   inflation: float) -> dict:
    # y[n, e] = log R - (n+1) log|eps| - n(n+1)/(2 kappa) log q = log C + (n+1) log A
    with np.errstate(divide="ignore"):
        logR = np.log(R)
    y = logR - (n[:, None] + 1) * np.log(eps_mod)[None, :] - (n * (n + 1) / (2 * kappa) * math.log(q))[:, None]
    env = np.max(np.where(np.isfinite(y), y, -np.inf), axis=1)
    ok = np.isfinite(env)
    if ok.sum() < 2:
        return {"kappa": kappa, "degenerate": True, "holds": True, "rms": 0.0}
    # slope by least squares on all but the largest n, intercept lifted to cover those points;
    # the largest n is then a held-out prediction of the q^{n(n+1)/(2 kappa)} growth
    cal = ok.copy()
    if cal.sum() >= 3:
        cal[np.flatnonzero(ok)[-1]] = False
    X = np.c_[np.ones(cal.sum()), n[cal] + 1.0]
    (logC, logA), *_ = np.linalg.lstsq(X, env[cal], rcond=None)
    rms = float(np.sqrt(np.mean((X @ [logC, logA] - env[cal]) ** 2)))
    logC = float(np.max(env[cal] - logA * (n[cal] + 1.0)))
    C, A = math.exp(logC) * inflation, math.exp(logA) * inflation
    bound = (C * A ** (n[:, None] + 1.0) * q ** (n * (n + 1) / (2 * kappa))[:, None]
             * eps_mod[None, :] ** (n[:, None] + 1.0))
    ratio = np.where(R > 0, R / bound, 0.0)
    return {"kappa": kappa, "degenerate": False, "C": C, "A": A, "rms": rms,
            "worst_ratio": float(np.max(ratio)), "holds": bool(np.all(ratio <= 1.0))}


def remainder_check(u_eval: Callable[[complex], np.ndarray], formal: FormalSeriesF, kappa: float, q: float,
                    eps_samples: Sequence[complex], n_range: Sequence[int], t, z,
                    kappa_grid: Sequence[float] | None = None, inflation: float = 1.05) -> RemainderReport:
    """Check the q-Gevrey remainder bound of a formal series against an actual solution.

    ``R_n(eps) = sup |u(eps) - sum_{m <= n} h_m eps^m / m!|`` over the probe grid
    ``t x z``.  For each ``kappa`` the constants ``(C, A)`` are fitted by least
    squares on the per-n envelope (maximum over ``eps``) of
    ``log R_n - (n+1) log|eps| - n(n+1)/(2 kappa) log q`` against ``n``
    (the largest ``n`` held out), ``C`` is raised until the bound covers the
    fitted orders, both are inflated by ``inflation`` and the bound is then
    tested on every sample including the held-out order.

    Parameters
    ----------
    u_eval : callable
        ``eps -> u(t, z, eps)`` on the probe grid, shape ``(len(t), len(z))``.
    kappa_grid : sequence of float, optional
        Extra values of ``kappa`` to report; defaults to ``kappa * (2/3, 5/6, 1)``.

    Returns
    -------
    RemainderReport
        ``status`` is ``"ok"`` when the bound holds at ``kappa``, ``"fails"``
        when it does not and ``"inconclusive"`` when the fit RMS exceeds 1.
    """
    n = np.asarray(sorted(set(int(x) for x in n_range)))
    if n.size == 0 or n[0] < 0:
        raise ConfigurationError("n_range must hold nonnegative integers")
    if n[-1] > formal.n_max:
        raise ConfigurationError(f"formal series only reaches n = {formal.n_max}")
    if kappa <= 0 or q <= 1:
        raise ConfigurationError("need kappa > 0 and q > 1")
    eps = np.asarray(eps_samples, dtype=complex)
    if eps.size < 2 or np.any(eps == 0):
        raise InsufficientDataError("need at least two nonzero eps samples")
    zz = np.atleast_1d(z)
    R = np.zeros((n.size, eps.size))
    for j, e in enumerate(eps):
        u = np.asarray(u_eval(e))
        s = 0.0
        top = 0
        for i, nn in enumerate(n):
            while top <= nn:
                s = s + eps_power_over_factorial(e, top) * formal.physical(top, t, zz)
                top += 1
            R[i, j] = float(np.max(np.abs(u - s)))
    grid = list(kappa_grid) if kappa_grid is not None else [kappa * 2 / 3, kappa * 5 / 6, kappa]
    if not any(abs(g - kappa) < 1e-15 for g in grid):
        grid.append(kappa)
    mod = np.abs(eps)
    fits = {repr(float(g)): _fit_remainder(R, mod, n, float(g), q, inflation) for g in grid}
    main = fits[repr(float(kappa))]
    if main.get("degenerate"):
        status = "ok"
    elif main["rms"] > 1.0:
        status = "inconclusive"
    else:
        status = "ok" if main["holds"] else "fails"
    valley = []
    for j in range(eps.size):
        col = R[:, j]
        i = int(np.argmin(col))
        valley.append({"eps_mod": float(mod[j]), "n_min": int(n[i]), "interior": bool(0 < i < n.size - 1)})
    return RemainderReport(status, eps, n, R, fits, valley, float(kappa))


# ---------------------------------------------------------------------------
# flatness fits


@dataclass
class FlatnessReport:
    """Fits of a sampled flat function against the Gevrey and q-Gevrey models.

    ``model`` names the model with the smaller RMS.  For the q-Gevrey model
    ``log Delta = -kappa/(2 log q) log^2|eps| + K log|eps| + log M``; for the
    Gevrey model ``log Delta = -M/|eps|^k + log C``.
    """

    model: str
    exponent: float
    log_prefactor: float
    power: float | None
    rms: float
    n_samples: int
    q_gevrey: dict = field(default_factory=dict)
    gevrey: dict = field(default_factory=dict)
    margin: float = math.nan
    degenerate: bool = False

    def to_dict(self) -> dict:
        return to_jsonable(dict(self.__dict__))


def _rms(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    return beta, float(np.sqrt(np.mean((X @ beta - y) ** 2)))


def _as_samples(sample) -> tuple[np.ndarray, np.ndarray]:
    if hasattr(sample, "delta_sup"):
        return np.abs(np.asarray(sample.eps)), np.asarray(sample.delta_sup, dtype=float)
    eps, delta = sample
    return np.abs(np.asarray(eps)), np.asarray(delta, dtype=float)


def fit_flatness(sample, q: float, model: str = "auto", k_max: int = 4) -> FlatnessReport:
    """Fit ``log Delta`` against both flatness models and report the winner.

    Parameters
    ----------
    sample : CocycleSample or (eps, delta)
    q : float
        Dilation base of the q-Gevrey model.
    model : {"auto", "q_gevrey", "gevrey"}
        Which model fills the headline fields; ``"auto"`` uses the winner.
    k_max : int
        Largest Gevrey exponent tried.

    Raises
    ------
    InsufficientDataError
        Fewer than six positive samples, or a span under two decades.
    """
    if model not in ("auto", "q_gevrey", "gevrey"):
        raise ConfigurationError(f"unknown model {model!r}")
    eps, delta = _as_samples(sample)
    if eps.size < 6:
        raise InsufficientDataError("need at least six samples")
    if np.all(delta == 0):
        return FlatnessReport("degenerate", math.inf, -math.inf, None, 0.0, int(eps.size), degenerate=True)
    keep = delta > 0
    eps, delta = eps[keep], delta[keep]
    if eps.size < 6:
        raise InsufficientDataError("need at least six positive samples")
    if math.log10(eps.max() / eps.min()) < 2.0 - 1e-9:
        raise InsufficientDataError("samples must span at least two decades in |eps|")
    y = np.log(delta)
    L = np.log(eps)
    (a, K, c), rms_q = _rms(np.c_[L**2, L, np.ones_like(L)], y)
    qg = {"kappa": float(-2.0 * math.log(q) * a), "K": float(K), "log_prefactor": float(c), "rms": rms_q}
    best = None
    for kk in range(1, k_max + 1):
        (b, c2), r = _rms(np.c_[eps ** (-float(kk)), np.ones_like(eps)], y)
        if best is None or r < best["rms"]:
            best = {"k": kk, "M": float(-b), "log_prefactor": float(c2), "rms": r}
    floor = 1e-300
    if rms_q <= best["rms"]:
        win, margin = "q_gevrey", best["rms"] / max(rms_q, floor)
    else:
        win, margin = "gevrey", rms_q / max(best["rms"], floor)
    head = win if model == "auto" else model
    if head == "q_gevrey":
        rep = FlatnessReport(win, qg["kappa"], qg["log_prefactor"], qg["K"], rms_q, int(eps.size))
    else:
        rep = FlatnessReport(win, float(best["k"]), best["log_prefactor"], None, best["rms"], int(eps.size))
    rep.q_gevrey, rep.gevrey, rep.margin = qg, best, float(margin)
    return rep


# ---------------------------------------------------------------------------
# Dirichlet sum


def dirichlet_sum(D1: float, D2: float, D3: float, D4: float, q: float, eps: float, tail: float = 1e-18) -> float:
    """``S(eps) = sum_{j >= 0} D1^j q^{-D2 j^2} exp(-D3 D4^j / eps)``, truncated once the tail is below ``tail``.

    Raises
    ------
    ConfigurationError
        Parameters out of range.
    """
    if min(D1, D2, D3) <= 0 or not 0 < D4 < 1 or q <= 1 or eps <= 0:
        raise ConfigurationError("need D1, D2, D3 > 0, 0 < D4 < 1, q > 1 and eps > 0")
    lq = math.log(q)
    s = 0.0
    j = 0
    while True:
        logw = j * math.log(D1) - D2 * lq * j * j
        term = math.exp(logw - D3 * D4**j / eps)
        s += term
        # ratio of successive weights; once below 1/2 the tail is at most twice the next weight
        ratio = math.exp(math.log(D1) - D2 * lq * (2 * j + 1))
        nxt = math.exp(logw + math.log(D1) - D2 * lq * (2 * j + 1))
        if ratio < 0.5 and 2.0 * nxt < tail:
            return s
        j += 1


@dataclass
class DirichletReport:
    """Calibrated bound ``S <= D2' exp(-kappa/(2 log q) log^2 eps) eps^{D1'}`` and its test."""

    D1_fit: float
    D2_fit: float
    fraction_held: float
    calibration: np.ndarray
    test: np.ndarray
    ratios: np.ndarray

    @property
    def holds(self) -> bool:
        return self.fraction_held >= 0.95

    def to_dict(self) -> dict:
        return to_jsonable({"D1_fit": self.D1_fit, "D2_fit": self.D2_fit, "fraction_held": self.fraction_held,
                            "calibration": self.calibration.tolist(), "test": self.test.tolist(),
                            "ratios": self.ratios.tolist()})


def dirichlet_bound_check(D1: float, D2: float, D3: float, D4: float, q: float, kappa: float,
                          calibration: Sequence[float] = (1e-2, 1e-1), test: Sequence[float] = (1e-4, 1e-2),
                          n: int = 16) -> DirichletReport:
    """Fit the q-exponential bound of the Dirichlet sum on one range and test it on another.

    The exponent ``D1'`` is the least-squares slope of
    ``log S + kappa/(2 log q) log^2 eps`` against ``log eps`` on the
    calibration range; ``log D2'`` is the smallest intercept that makes the
    bound hold there.  ``test`` must not overlap ``calibration``.

    Raises
    ------
    ConfigurationError
        ``kappa`` outside ``(0, 2 D2 log^2 q / log^2 D4)`` or overlapping ranges.
    """
    lq = math.log(q)
    kmax = 2.0 * D2 * lq**2 / math.log(D4) ** 2
    if not 0 < kappa < kmax:
        raise ConfigurationError(f"kappa must lie in (0, {kmax:.6g})")
    c0, c1 = sorted(calibration)
    t0, t1 = sorted(test)
    if max(c0, t0) < min(c1, t1):
        raise ConfigurationError("calibration and test ranges overlap")
    ec = np.geomspace(c0, c1, n)
    et = np.geomspace(t0, t1, n + 1)[:-1] if t1 == c0 else np.geomspace(t0, t1, n)

    def g(e):
        S = np.array([dirichlet_sum(D1, D2, D3, D4, q, float(x)) for x in e])
        L = np.log(e)
        return np.log(S) + kappa / (2 * lq) * L**2, L

    yc, Lc = g(ec)
    (a, b), *_ = np.linalg.lstsq(np.c_[np.ones_like(Lc), Lc], yc, rcond=None)
    a = float(np.max(yc - b * Lc))
    yt, Lt = g(et)
    ratios = np.exp(yt - a - b * Lt)
    return DirichletReport(float(b), math.exp(a), float(np.mean(ratios <= 1.0 + 1e-12)), ec, et, ratios)


# ---------------------------------------------------------------------------
# Euler-Maclaurin


_BUILTIN = {
    "t": (lambda t: t, lambda t: np.ones_like(t)),
    "t2": (lambda t: t**2, lambda t: 2 * t),
    "exp": (lambda t: np.exp(-t), lambda t: -np.exp(-t)),
    "const": (lambda t: np.ones_like(t), lambda t: np.zeros_like(t)),
}


def euler_maclaurin_check(f, n: int, fprime: Callable | None = None, nodes: int = 16) -> float:
    """Residual of the first-order Euler-Maclaurin identity on ``[0, n]``.

    ``sum_{j=0}^n f(j) = (f(0) + f(n))/2 + int_0^n f + int_0^n B1(t - floor t) f'(t) dt``
    with ``B1(x) = x - 1/2``; integrals use Gauss-Legendre rules on each unit interval.

    Parameters
    ----------
    f : str or callable
        ``"t"``, ``"t2"``, ``"exp"`` (for ``e^{-t}``), ``"const"`` or a vectorised callable.
    n : int
        Positive integer.
    fprime : callable, optional
        Derivative; required when ``f`` is a callable.
    """
    if isinstance(f, str):
        if f not in _BUILTIN:
            raise ConfigurationError(f"unknown function {f!r}; choose from {sorted(_BUILTIN)}")
        f, fprime = _BUILTIN[f]
    elif fprime is None:
        raise ConfigurationError("fprime is required for a callable f")
    if int(n) != n or n < 1:
        raise ConfigurationError("n must be a positive integer")
    n = int(n)
    x, w = np.polynomial.legendre.leggauss(nodes)
    s = 0.5 * (x + 1.0)
    w = 0.5 * w
    t = (np.arange(n)[:, None] + s[None, :]).ravel()
    ww = np.tile(w, n)
    lhs = float(np.sum(f(np.arange(n + 1, dtype=float))))
    integral = float(np.sum(ww * f(t)))
    b1 = float(np.sum(ww * np.tile(s - 0.5, n) * fprime(t)))
    rhs = 0.5 * (float(f(np.array(0.0))) + float(f(np.array(float(n))))) + integral + b1
    return abs(lhs - rhs)
