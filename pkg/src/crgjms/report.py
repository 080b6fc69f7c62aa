from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    id: str
    anchor: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "status": "pass" if self.passed else "fail",
            "detail": self.detail,
        }


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, id: str, anchor: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(id, anchor, bool(passed), detail))
        return bool(passed)

    def extend(self, other: Report) -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }
