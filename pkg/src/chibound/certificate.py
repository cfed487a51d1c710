"""Certificates comparing a synthesized coloring with a bounding function."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive-precision"


@dataclass
class Certificate:
    """Claim ``colors_used <= bound(omega)`` together with its verdict.

    ``trace`` holds whatever the producing algorithm logged (recursion
    ledger, bucket tables, constraint budgets) as JSON-ready data.
    """

    bound: Any  # bounds.BoundFn
    omega: int
    colors_used: int
    verdict: Verdict = Verdict.INCONCLUSIVE
    bound_interval: tuple[Any, Any] | None = None
    method: str = ""
    trace: Any = None
    notes: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        out = {
            "method": self.method,
            "bound": str(self.bound),
            "omega": self.omega,
            "colors_used": self.colors_used,
            "verdict": self.verdict.value,
        }
        if self.bound_interval is not None:
            out["bound_interval"] = [str(self.bound_interval[0]), str(self.bound_interval[1])]
        if self.notes:
            out["notes"] = self.notes
        if self.trace is not None:
            trace = self.trace
            out["trace"] = trace.to_json() if hasattr(trace, "to_json") else trace
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"
