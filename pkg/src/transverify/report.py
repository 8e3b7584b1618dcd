"""Pass/fail records shared by the numerical checks and the CLI suites."""

from __future__ import annotations

from dataclasses import dataclass, field


def cjson(z: complex) -> list:
    """Complex number as a [real, imag] pair for JSON."""
    z = complex(z)
    return [z.real, z.imag]


@dataclass
class CheckResult:
    id: str
    anchor: str
    passed: bool
    detail: dict = field(default_factory=dict)
    orders: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        return {"id": self.id, "anchor": self.anchor, "status": self.status,
                "detail": self.detail, "orders": self.orders}


@dataclass
class VerificationReport:
    suite: str
    checks: list = field(default_factory=list)
    attachments: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        out = {"suite": self.suite, "pass": self.passed,
               "checks": [c.to_json() for c in self.checks]}
        out.update(self.attachments)
        return out
