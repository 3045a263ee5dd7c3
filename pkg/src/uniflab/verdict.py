"""Structured pass/fail results carried by every check."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Verdict:
    check: str
    tag: str
    passed: bool
    applicable: bool = True
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "tag": self.tag,
            "passed": self.passed,
            "applicable": self.applicable,
            "details": self.details,
        }
