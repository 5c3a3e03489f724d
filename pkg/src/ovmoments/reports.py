"""Verification reports shared by every suite, with a lossless JSON form."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

SCHEMA = "ovmoments.report/1"
MAX_RECORDED_FAILURES = 50


def exact_str(x: Any) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


@dataclass
class Failure:
    location: str
    expected: str
    actual: str


@dataclass
class Report:
    suite: str
    parameters: dict[str, Any] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)
    failure_count: int = 0
    checks: int = 0
    wall_time: float = 0.0
    notes: list[str] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "fail" if self.failure_count else "pass"

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def check(self, location: str, expected: Any, actual: Any) -> bool:
        self.checks += 1
        if expected == actual:
            return True
        self.fail(location, expected, actual)
        return False

    def fail(self, location: str, expected: Any, actual: Any) -> None:
        self.failure_count += 1
        if len(self.failures) < MAX_RECORDED_FAILURES:
            self.failures.append(Failure(location, exact_str(expected), exact_str(actual)))

    def merge(self, other: "Report", prefix: str = "") -> None:
        self.checks += other.checks
        self.failure_count += other.failure_count
        for f in other.failures:
            if len(self.failures) < MAX_RECORDED_FAILURES:
                self.failures.append(Failure(prefix + f.location, f.expected, f.actual))
        self.notes.extend(other.notes)

    def first_failure(self) -> Failure | None:
        return self.failures[0] if self.failures else None

    def to_dict(self, include_time: bool = True) -> dict[str, Any]:
        d = {
            "schema": SCHEMA,
            "suite": self.suite,
            "status": self.status,
            "parameters": self.parameters,
            "checks": self.checks,
            "failure_count": self.failure_count,
            "failures": [asdict(f) for f in self.failures],
            "notes": self.notes,
            "data": self.data,
        }
        if include_time:
            d["wall_time"] = round(self.wall_time, 3)
        return d

    def to_json(self, include_time: bool = True) -> str:
        return json.dumps(self.to_dict(include_time), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Report":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        return cls(
            suite=d["suite"],
            parameters=d["parameters"],
            failures=[Failure(**f) for f in d["failures"]],
            failure_count=d["failure_count"],
            checks=d["checks"],
            wall_time=d.get("wall_time", 0.0),
            notes=list(d.get("notes", [])),
            data=dict(d.get("data", {})),
        )

    @classmethod
    def from_json(cls, s: str) -> "Report":
        return cls.from_dict(json.loads(s))

    def summary(self) -> str:
        line = f"{self.suite}: {self.status.upper()} ({self.checks} checks"
        if self.failure_count:
            f = self.failures[0]
            line += f", {self.failure_count} failed; first at {f.location}: expected {f.expected}, got {f.actual}"
        return line + ")"


class timed:
    """Context manager filling ``report.wall_time``."""

    def __init__(self, report: Report):
        self.report = report

    def __enter__(self) -> Report:
        self._t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc) -> None:
        self.report.wall_time = time.perf_counter() - self._t0
