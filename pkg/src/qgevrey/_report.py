"""Small report containers shared by the validation routines."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field


def _clean(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if hasattr(x, "item") and callable(x.item):
        return _clean(x.item())
    return x


@dataclass
class Check:
    name: str
    passed: bool
    margin: float | None = None
    detail: str = ""


@dataclass
class ValidationReport:
    """List of named checks with pass flags and measured margins."""

    checks: list[Check] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, margin: float | None = None, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), None if margin is None else float(margin), detail))

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return _clean({"ok": self.ok, "checks": [asdict(c) for c in self.checks], "info": self.info})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def to_jsonable(x):
    return _clean(x)
