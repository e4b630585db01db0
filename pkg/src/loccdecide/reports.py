"""Machine-checkable decision reports.

A report always carries enough raw input data for the certificate to be
re-verified without rerunning the decider (see :mod:`loccdecide.audit`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = ["DecisionReport"]


@dataclass
class DecisionReport:
    verdict: bool
    method: str
    certificate: dict
    inputs: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "method": self.method,
            "certificate": self.certificate,
            "inputs": self.inputs,
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> "DecisionReport":
        return cls(
            verdict=bool(obj["verdict"]),
            method=str(obj["method"]),
            certificate=dict(obj["certificate"]),
            inputs=dict(obj.get("inputs", {})),
        )
