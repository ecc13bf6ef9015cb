"""Verification report records shared across modules and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    """Outcome of one verified identity: residual against a tolerance."""

    identity: str
    residual: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "identity": self.identity,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        out.update(self.details)
        return out
