"""Verification reports shared by the calculus, kappa and cli modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List

SCHEMA = 1


@dataclass
class Report:
    """Outcome of one checked identity over a batch of inputs."""

    id: str
    anchor: str
    checked: int = 0
    failures: List[Dict[str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, label: str, expected, got) -> bool:
        self.checked += 1
        if expected == got:
            return True
        self.failures.append({"input": str(label), "expected": str(expected), "got": str(got)})
        return False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "checked": self.checked,
            "pass": self.passed,
            "failures": list(self.failures),
        }


@dataclass
class SuiteReport:
    suite: str
    params: Dict[str, Any] = field(default_factory=dict)
    entries: List[Report] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def checked(self) -> int:
        return sum(e.checked for e in self.entries)

    def entry(self, id: str, anchor: str) -> Report:
        r = Report(id, anchor)
        self.entries.append(r)
        return r

    def get(self, id: str) -> Report:
        for e in self.entries:
            if e.id == id:
                return e
        raise KeyError(id)

    def extend(self, other: "SuiteReport") -> "SuiteReport":
        self.entries.extend(other.entries)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA,
            "suite": self.suite,
            "params": dict(self.params),
            "checked": self.checked,
            "pass": self.passed,
            "relations": [e.to_dict() for e in self.entries],
        }

    def summary(self) -> str:
        lines = [f"{self.suite}: {'PASS' if self.passed else 'FAIL'} ({self.checked} cases)"]
        for e in self.entries:
            lines.append(f"  {'ok  ' if e.passed else 'FAIL'} {e.id} [{e.checked}]")
            for f in e.failures[:3]:
                lines.append(f"       {f['input']}: expected {f['expected']}, got {f['got']}")
        return "\n".join(lines)
