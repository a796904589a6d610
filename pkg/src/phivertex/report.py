"""Verification reports.

Every checker in the package returns a :class:`Report` instead of a bare
boolean so that counterexamples (witnesses) and the window a claim was
checked on travel with the verdict.
"""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

MAX_WITNESSES = 25


class Verdict(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"
    EXPECTED_NEGATIVE = "EXPECTED_NEGATIVE"


@dataclass
class Report:
    suite: str
    anchor: str
    params: dict = field(default_factory=dict)
    verdict: Verdict = Verdict.PASS
    checked: int = 0
    failures: int = 0
    witnesses: list = field(default_factory=list)
    window: dict | None = None
    overflow: bool = False
    note: str = ""
    elapsed: float = 0.0
    data: Any = field(default=None, repr=False, compare=False)

    def __bool__(self):
        return self.verdict in (Verdict.PASS, Verdict.EXPECTED_NEGATIVE)

    @property
    def passed(self):
        return bool(self)

    def record(self, ok, witness=None):
        """Count one checked identity; keep the witness when it fails."""
        self.checked += 1
        if not ok:
            self.failures += 1
            if self.verdict is Verdict.PASS:
                self.verdict = Verdict.FAIL
            if witness is not None and len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(witness)
        return ok

    def compare(self, key, lhs, rhs):
        return self.record(lhs == rhs, {"at": key, "lhs": lhs, "rhs": rhs})

    def inconclusive(self, note):
        self.verdict = Verdict.INCONCLUSIVE
        self.note = note

    def merge(self, other: "Report"):
        """Fold a sub-report into this one (verdict is the worst of the two)."""
        self.checked += other.checked
        self.failures += other.failures
        self.overflow = self.overflow or other.overflow
        room = MAX_WITNESSES - len(self.witnesses)
        if room > 0:
            self.witnesses.extend(other.witnesses[:room])
        rank = [Verdict.PASS, Verdict.EXPECTED_NEGATIVE, Verdict.INCONCLUSIVE, Verdict.FAIL]
        if rank.index(other.verdict) > rank.index(self.verdict):
            self.verdict = other.verdict
        if other.note and not self.note:
            self.note = other.note
        return self

    def to_record(self, timing=True):
        rec = {
            "suite": self.suite,
            "identity": self.anchor,
            "parameters": jsonable(self.params),
            "verdict": self.verdict.value,
            "checked": self.checked,
            "failures": self.failures,
            "overflow": self.overflow,
            "window": jsonable(self.window),
            "witness": jsonable(self.witnesses[:5]),
        }
        if self.note:
            rec["note"] = self.note
        if timing:
            rec["seconds"] = round(self.elapsed, 4)
        return rec

    def line(self):
        params = " ".join(f"{k}={_short(v)}" for k, v in self.params.items())
        text = f"{self.verdict.value:<17} {self.suite:<9} {self.anchor:<34} {params}"
        text += f"  [{self.checked} checked"
        if self.failures:
            text += f", {self.failures} failed"
        text += "]"
        if self.note:
            text += f"  ({self.note})"
        return text


class timed:
    """Context manager that stamps ``elapsed`` on a report."""

    def __init__(self, report):
        self.report = report

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.elapsed = time.perf_counter() - self._t0
        return False


def _short(v):
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    return str(v)


def jsonable(obj):
    """Convert nested containers of Fractions / custom objects to JSON-safe values."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, float):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [jsonable(x) for x in obj]
        return sorted(items, key=repr) if isinstance(obj, (set, frozenset)) else items
    return str(obj)
