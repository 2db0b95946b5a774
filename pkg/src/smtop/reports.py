"""Uniform pass/fail reporting for the verification checkers.

Every checker in this package returns either a single :class:`CheckResult`
or a :class:`Report` bundling several of them.  A failing result always
carries a concrete witness; unexplained failures are useless in a verifier.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: tuple | None = None
    detail: str = ""

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [f"{self.name}: {status}"]
        if self.witness is not None:
            parts.append(f"witness={plain(self.witness)!r}")
        if self.detail:
            parts.append(self.detail)
        return "  ".join(parts)


@dataclass(frozen=True)
class Report:
    title: str
    results: tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def result(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def lines(self) -> list[str]:
        status = "PASS" if self.ok else "FAIL"
        out = [f"{self.title}: {status}"]
        out.extend(f"  {r}" for r in self.results)
        return out

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "results": [
                {
                    "name": r.name,
                    "passed": r.passed,
                    "witness": plain(r.witness),
                    "detail": r.detail,
                }
                for r in self.results
            ],
        }


def plain(obj: Any) -> Any:
    """Recursively convert witnesses to JSON-friendly plain data."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):  # only +inf ever appears
        return "inf" if obj == float("inf") else obj
    if isinstance(obj, (list, tuple)):
        return [plain(x) for x in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((plain(x) for x in obj), key=repr)
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if hasattr(obj, "to_plain"):
        return obj.to_plain()
    return str(obj)
