"""Check reports and their json / csv / text serializations."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, List

SCHEMA_VERSION = 1


@dataclass
class Check:
    name: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool
    skipped: int = 0

    @classmethod
    def from_residuals(cls, name: str, residuals: Iterable[float], tolerance: float, skipped: int = 0) -> "Check":
        residuals = [float(r) for r in residuals]
        worst = max(residuals) if residuals else math.inf
        usable = len(residuals) >= skipped and bool(residuals)
        ok = usable and all(math.isfinite(r) for r in residuals) and worst < tolerance
        return cls(name, len(residuals) + skipped, worst, tolerance, ok, skipped)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "skipped": self.skipped,
        }


def _jsonable(value):
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass
class CheckReport:
    suite: str
    params: dict
    checks: List[Check] = field(default_factory=list)

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def extend(self, other: "CheckReport") -> None:
        self.checks.extend(Check(f"{other.suite}.{c.name}", c.samples, c.max_residual, c.tolerance, c.passed, c.skipped) for c in other.checks)

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "params": _jsonable(self.params),
            "checks": [c.as_dict() for c in self.checks],
            "overall_pass": self.overall_pass,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "samples", "max_residual", "tolerance", "pass", "skipped"])
        for c in self.checks:
            w.writerow([c.name, c.samples, repr(c.max_residual), repr(c.tolerance), str(c.passed).lower(), c.skipped])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"suite: {self.suite}"]
        width = max((len(c.name) for c in self.checks), default=4)
        for c in self.checks:
            flag = "PASS" if c.passed else "FAIL"
            extra = f"  skipped={c.skipped}" if c.skipped else ""
            lines.append(f"{flag}  {c.name:<{width}}  max_residual={c.max_residual:.3e}  tol={c.tolerance:.1e}  n={c.samples}{extra}")
        lines.append(f"overall: {'PASS' if self.overall_pass else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        return {"json": self.to_json, "csv": self.to_csv, "text": self.to_text}[fmt]()
