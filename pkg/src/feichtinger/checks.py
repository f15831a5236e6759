"""Pass/fail records for identity and inequality verification."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = ["Check", "equality", "inequality", "merge", "RTOL", "ATOL"]

RTOL = 1e-9
ATOL = 1e-12


@dataclass(frozen=True)
class Check:
    """Outcome of one verified relation.

    ``status`` is ``"fail"`` exactly when ``max_abs_err > tolerance``, where
    ``tolerance`` is the effective absolute tolerance used for the decision.
    """

    name: str
    max_abs_err: float
    tolerance: float
    details: str = ""
    skipped: bool = False

    @property
    def status(self) -> str:
        if self.skipped:
            return "skip"
        return "fail" if not self.max_abs_err <= self.tolerance else "pass"

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "max_abs_err": float(self.max_abs_err),
            "tolerance": float(self.tolerance),
            "details": self.details,
        }


def equality(name: str, lhs, rhs, rtol: float = RTOL, atol: float = ATOL, details: str = "") -> Check:
    """``lhs == rhs`` up to ``max(rtol * scale, atol)``; works for arrays."""
    a = np.asarray(lhs, dtype=complex)
    b = np.asarray(rhs, dtype=complex)
    err = float(np.max(np.abs(a - b), initial=0.0))
    scale = float(max(np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0)))
    return Check(name, err, max(rtol * scale, atol), details)


def inequality(name: str, lhs: float, rhs: float, rtol: float = RTOL, atol: float = ATOL, details: str = "") -> Check:
    """``lhs <= rhs`` with slack ``max(rtol * |rhs|, atol)``."""
    err = max(0.0, float(lhs) - float(rhs))
    if not details:
        details = f"lhs={float(lhs):.12g} rhs={float(rhs):.12g}"
    return Check(name, err, max(rtol * abs(float(rhs)), atol), details)


def merge(name: str, checks: Iterable[Check]) -> Check:
    """Collapse repeated trials of one relation into the worst case."""
    checks = list(checks)
    if not checks:
        return Check(name, 0.0, 0.0, "no trials", skipped=True)
    if all(c.skipped for c in checks):
        return Check(name, 0.0, 0.0, checks[0].details, skipped=True)
    live = [c for c in checks if not c.skipped]
    worst = max(live, key=lambda c: (c.max_abs_err - c.tolerance, c.max_abs_err))
    return Check(name, worst.max_abs_err, worst.tolerance, f"{len(live)} trials; worst: {worst.details}")
