"""Scenario files: problem data, grids, coverings and run settings in one JSON document.

Complex numbers are written as ``[re, im]`` pairs.  Polynomials in ``m`` are
coefficient lists in ascending powers of ``im``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .borel_solver import ProblemSpecB
from .errors import ConfigurationError, SchemaError
from .geometry import FrameFamily, GoodCovering, Sector
from .profiles import CoefficientProfile, PolynomialForcing, VanishingScalar, _cpx
from .qconv_solver import GridConfig, ProblemSpecQ

__all__ = ["RunConfig", "Scenario", "load_scenario", "reference_scenario", "reference_path"]

REQUIRED_KEYS = ("problem_q", "problem_b", "grids", "coverings", "run", "seed")


@dataclass(frozen=True)
class RunConfig:
    """Solver tolerances, probe grids and the ``eps`` sampling plan.

    ``eps_range`` holds the smallest and largest modulus as fractions of ``eps0``.
    """

    tol: float = 1e-10
    j_max: int = 40
    n_max: int = 5
    t_probes: tuple = (0.4, 1.0, 5)
    z_probes: tuple = (-1.0, 1.0, 5)
    arc_nodes: int = 32
    eps_samples: int = 10
    eps_range: tuple = (0.005, 0.5)
    remainder_samples: int = 8
    kappa: float = 0.9
    delta1: float = 0.5

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise SchemaError(f"unknown run keys {sorted(unknown)}")
        kw = {k: (tuple(v) if isinstance(v, list) else v) for k, v in d.items()}
        return cls(**kw)


@dataclass
class Scenario:
    """Everything needed to run the pipelines on one problem."""

    spec_q: ProblemSpecQ
    spec_b: ProblemSpecB
    grid: GridConfig
    covering: GoodCovering
    run: RunConfig
    seed: int
    continuation_radius: float
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def n_sectors(self) -> int:
        return self.spec_q.n_sectors

    def t_probes(self) -> np.ndarray:
        a, b, n = self.run.t_probes
        return np.linspace(a, b, int(n)).astype(complex)

    def z_probes(self) -> np.ndarray:
        a, b, n = self.run.z_probes
        return np.linspace(a, b, int(n))

    def eps_moduli(self, n: int | None = None) -> np.ndarray:
        """Log-spaced moduli, largest first."""
        lo, hi = self.run.eps_range
        n = self.run.eps_samples if n is None else n
        return self.covering.eps0 * np.geomspace(hi, lo, n)

    def eps_cross(self, p: int, n: int | None = None) -> np.ndarray:
        """Samples on the bisector of the overlap of covering sectors ``p`` and ``p + 1``."""
        return self.eps_moduli(n) * np.exp(1j * self.covering.overlap_bisector(p))

    def eps_same(self, p: int, n: int | None = None) -> np.ndarray:
        """Samples on the bisector of the two Borel sub-sectors of sector ``p``."""
        return self.eps_moduli(n) * np.exp(1j * self.spec_q.frames.directions[p])


def _poly(x) -> list[complex]:
    return [_cpx(c) for c in x]


def _build_q(d: dict, cov: dict) -> ProblemSpecQ:
    ff = FrameFamily(cov["mu0"], cov["mu1"], cov["q_hat"], cov["q_check"], float(d["q"]), float(d["delta"]),
                     tuple(cov["directions"]), cov["root_free_half_aperture"])
    return ProblemSpecQ(
        k=int(d["k"]), D=int(d["D"]), delta=float(d["delta"]), k1=float(d["k1"]), q=float(d["q"]),
        alpha=float(d["alpha"]), d=tuple(d["d"]), Delta=tuple(d["Delta"]), Q=_poly(d["Q"]),
        R=tuple(_poly(r) for r in d["R"]), C=tuple(CoefficientProfile.from_dict(c) for c in d["C"]),
        gamma=tuple(d["gamma"]), psi=PolynomialForcing.from_dict(d["psi"]), eps0=float(cov["eps0"]),
        beta=float(d["beta"]), mu=float(d["mu"]), tau0=float(d["tau0"]), frames=ff,
        annulus=tuple(d["annulus"]), ray_offset=float(d.get("ray_offset", 0.6)),
    )


def _build_b(d: dict, spec_q: ProblemSpecQ) -> ProblemSpecB:
    a = spec_q.ray_offset
    dirs = tuple((dp - a, dp + a) for dp in spec_q.frames.directions)
    C00 = d.get("C00", {"amplitude": 0.0})
    return ProblemSpecB(
        D=int(d["D"]), d=tuple(d["d"]), delta=tuple(d["delta"]), Delta=tuple(d["Delta"]), Q=_poly(d["Q"]),
        R=tuple(_poly(r) for r in d["R"]), c00=VanishingScalar.from_dict(d.get("c00", {})),
        cF=VanishingScalar.from_dict(d.get("cF", {})), C00=CoefficientProfile.from_dict(C00),
        budgets=tuple(d["budgets"]), nu=float(d["nu"]), directions=dirs,
        half_aperture=float(d["half_aperture"]), rho=float(d["rho"]), sector=tuple(d["sector"]),
    )


def load_scenario(source) -> Scenario:
    """Build a :class:`Scenario` from a path, a JSON string or a parsed dict.

    Raises
    ------
    json.JSONDecodeError
        Malformed JSON.
    SchemaError
        Missing keys or fields of the wrong type.
    ConfigurationError
        Well-formed data violating a precondition.
    """
    if isinstance(source, dict):
        raw = source
    else:
        text = Path(source).read_text() if not str(source).lstrip().startswith("{") else str(source)
        raw = json.loads(text)
    if not isinstance(raw, dict):
        raise SchemaError("scenario must be a JSON object")
    missing = [k for k in REQUIRED_KEYS if k not in raw]
    if missing:
        raise SchemaError(f"scenario lacks keys {missing}")
    try:
        cov = raw["coverings"]
        spec_q = _build_q(raw["problem_q"], cov)
        spec_b = _build_b(raw["problem_b"], spec_q)
        grid = GridConfig.from_dict(raw["grids"])
        half = float(cov["eps_half_aperture"])
        covering = GoodCovering(tuple(Sector(dp, half, 0.0, float(cov["eps0"])) for dp in cov["directions"]))
        run = RunConfig.from_dict(raw["run"])
        seed = int(raw["seed"])
        rc = float(raw["problem_b"].get("continuation_radius", 0.0))
    except ConfigurationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad scenario field: {exc!r}") from exc
    return Scenario(spec_q, spec_b, grid, covering, run, seed, rc, raw)


def reference_path() -> Path:
    return Path(str(resources.files("qgevrey") / "data" / "reference.json"))


def reference_scenario() -> Scenario:
    """The shipped reference scenario."""
    return load_scenario(reference_path())


def _zero_forcing(raw: dict) -> dict:
    """Copy of a scenario dict with the q-forcing switched off (used by tests and demos)."""
    out = json.loads(json.dumps(raw))
    out["problem_q"]["psi"]["taylor"] = [[0.0, 0.0]]
    return out

