"""Structured verification reports shared by the library, tests, and CLI."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
ERROR = "error"
BUDGET = "budget_exceeded"


@dataclass
class VerificationReport:
    check: str
    status: str = PASS
    residual_terms: dict[str, int] = field(default_factory=dict)
    scalars: dict[str, str] = field(default_factory=dict)
    kernel_dims: list[int] = field(default_factory=list)
    millis: int = 0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def record_residual(self, name: str, n_terms: int) -> None:
        self.residual_terms[name] = n_terms
        if n_terms:
            self.status = FAIL

    def record_scalar(self, name: str, value) -> None:
        self.scalars[name] = str(value)

    def to_json(self) -> str:
        return json.dumps(
            {
                "check": self.check,
                "status": self.status,
                "residual_terms": self.residual_terms,
                "scalars": self.scalars,
                "kernel_dims": self.kernel_dims,
                "millis": self.millis,
                "details": self.details,
            },
            sort_keys=True,
        )

    def summary(self) -> str:
        extras = []
        if self.scalars:
            extras.append(", ".join(f"{k}={v}" for k, v in sorted(self.scalars.items())))
        if self.kernel_dims:
            extras.append(f"kernel_dims={self.kernel_dims}")
        bad = {k: v for k, v in self.residual_terms.items() if v}
        if bad:
            extras.append(f"residuals={bad}")
        tail = f"  [{('; '.join(extras))}]" if extras else ""
        return f"{self.status.upper():>5}  {self.check}{tail}"


class Stopwatch:
    def __init__(self):
        self.t0 = time.monotonic()

    def millis(self) -> int:
        return int((time.monotonic() - self.t0) * 1000)
