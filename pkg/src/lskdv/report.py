"""Structured verification records: one JSON object per check plus a summary."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .numerics import format_scalar

PASS = "PASS"
FAIL = "FAIL"
INFO = "INFO"


def to_jsonable(v):
    """Rationals become ``"p/q"``; numpy scalars and containers are unwrapped."""
    if isinstance(v, Fraction):
        return format_scalar(v)
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, dict):
        return {str(k): to_jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [to_jsonable(x) for x in v]
    if hasattr(v, "to_record"):
        return to_jsonable(v.to_record())
    return v


@dataclass
class Check:
    """Outcome of one verification.

    ``passed`` is None for informational measurements that carry no verdict.
    """

    name: str
    anchor: str
    kind: str  # "exact" or "float"
    passed: bool | None
    value: object = None
    threshold: object = None
    detail: dict = field(default_factory=dict)

    @property
    def verdict(self):
        if self.passed is None:
            return INFO
        return PASS if self.passed else FAIL

    def to_record(self):
        rec = {
            "check": self.name,
            "anchor": self.anchor,
            "kind": self.kind,
            "verdict": self.verdict,
            "value": to_jsonable(self.value),
        }
        if self.threshold is not None:
            rec["threshold"] = to_jsonable(self.threshold)
        if self.detail:
            rec["detail"] = to_jsonable(self.detail)
        return rec


@dataclass
class Report:
    command: list
    checks: list = field(default_factory=list)
    started: float = field(default_factory=time.perf_counter)
    status: str | None = None  # overrides the verdict, e.g. "DEGENERATE"
    error: str | None = None

    def add(self, check):
        self.checks.append(check)
        return check

    def extend(self, checks):
        for c in checks:
            self.add(c)

    @property
    def verdict(self):
        if self.status:
            return self.status
        return FAIL if any(c.passed is False for c in self.checks) else PASS

    def summary(self):
        out = {
            "summary": True,
            "command": self.command,
            "verdict": self.verdict,
            "checks": len(self.checks),
            "failed": sum(c.passed is False for c in self.checks),
            "informational": sum(c.passed is None for c in self.checks),
            "elapsed_s": round(time.perf_counter() - self.started, 3),
        }
        if self.error:
            out["error"] = self.error
        return out

    def lines(self):
        for c in self.checks:
            yield json.dumps(c.to_record(), sort_keys=True)
        yield json.dumps(self.summary(), sort_keys=True)

    def write(self, stream):
        for line in self.lines():
            stream.write(line + "\n")
