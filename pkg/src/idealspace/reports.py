"""Outcome records for law checks, with text and JSON-lines serialization.

A record line is one JSON object with sorted keys::

    {"details": [...], "instances": 200, "law": "modularity", "max_violation": 3.1e-09,
     "seed": 7, "tol": 0.0001, "undetermined": 0, "verdict": "pass",
     "witness": {"masses": [...], "spaces": [...], "vector": [...]}}

The text form is a fixed-width table with one row per report.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

PASS, FAIL, UNDETERMINED = "pass", "fail", "undetermined"


@dataclass
class LawReport:
    law: str
    tol: float
    seed: Optional[int] = None
    instances: int = 0
    undetermined: int = 0
    max_violation: float = 0.0
    witness: Optional[dict] = None
    details: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if self.max_violation > self.tol:
            return FAIL
        if self.undetermined or self.instances == 0:
            return UNDETERMINED
        return PASS

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def record(self, violation: float, witness: Optional[dict] = None) -> None:
        """Count one instance with the given (nonnegative) violation."""
        self.instances += 1
        if math.isnan(violation):
            self.undetermined += 1
            return
        if violation > self.max_violation or (violation == self.max_violation
                                              and self.witness is None):
            self.max_violation = float(violation)
            self.witness = witness

    def skip(self, note: Optional[str] = None) -> None:
        """Count one instance whose outcome could not be decided."""
        self.instances += 1
        self.undetermined += 1
        if note:
            self.details.append(note)

    def merge(self, other: "LawReport") -> "LawReport":
        best = self if self.max_violation >= other.max_violation else other
        wit = best.witness if best.witness is not None else (self.witness or other.witness)
        return LawReport(self.law, self.tol, self.seed, self.instances + other.instances,
                         self.undetermined + other.undetermined, best.max_violation, wit,
                         self.details + other.details)

    def as_record(self) -> dict:
        return {
            "law": self.law,
            "instances": self.instances,
            "undetermined": self.undetermined,
            "max_violation": _clean(self.max_violation),
            "tol": self.tol,
            "verdict": self.verdict,
            "seed": self.seed,
            "witness": self.witness,
            "details": list(self.details),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_record(), sort_keys=True, default=_clean)


def _clean(v):
    if isinstance(v, float):
        return float(f"{v:.12g}")
    if hasattr(v, "tolist"):
        return [_clean(float(t)) for t in v.tolist()]
    return str(v)


def witness(spaces, vector=None, masses=None, **extra) -> dict:
    w = {"spaces": [str(s) for s in spaces]}
    if vector is not None:
        w["vector"] = [_clean(float(t)) for t in vector]
    if masses is not None:
        w["masses"] = [_clean(float(t)) for t in masses]
    w.update(extra)
    return w


HEADER = f"{'law':<28} {'verdict':<13} {'instances':>9} {'undet.':>6} {'max violation':>14} {'tol':>9}"


def to_table(reports: Iterable[LawReport]) -> str:
    lines = [HEADER, "-" * len(HEADER)]
    for r in reports:
        lines.append(f"{r.law:<28} {r.verdict:<13} {r.instances:>9d} {r.undetermined:>6d} "
                     f"{r.max_violation:>14.3e} {r.tol:>9.1e}")
    return "\n".join(lines)


def write_records(path, reports: Iterable[LawReport]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in reports:
            fh.write(r.to_json() + "\n")


def read_records(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def exit_status(reports: Iterable[LawReport]) -> int:
    """0 when all pass, 1 on any failure, 2 when something is undetermined."""
    verdicts = {r.verdict for r in reports}
    if FAIL in verdicts:
        return 1
    if UNDETERMINED in verdicts:
        return 2
    return 0
