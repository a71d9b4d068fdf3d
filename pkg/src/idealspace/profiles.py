"""Rearrangement profiles: norms evaluated on decreasing step functions.

A profile maps the rearrangement ``x*`` (a ``StepFunction`` on ``[0, T)``)
to a nonnegative number.  All profiles here are monotone in the pointwise
order of step functions, so ``profile(rearrangement(x))`` is a symmetric
lattice norm on any finite measure space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .expr import INF, Number, as_number, format_number
from .measure import StepFunction
from .orlicz import luxemburg_norm, young


@dataclass(frozen=True)
class LpProfile:
    p: Number
    domain: Optional[float] = None

    def __post_init__(self):
        p = as_number(self.p)
        if not p >= 1:
            raise ValueError(f"profile exponent must lie in [1, inf], got {self.p!r}")
        object.__setattr__(self, "p", p)

    norming = True

    def __call__(self, step: StepFunction) -> float:
        lv = np.array(step.levels)
        if not lv.size or lv[0] == 0.0:
            return 0.0
        if self.p == INF:
            return float(lv[0])
        p = float(self.p)
        top = lv[0]
        return float(top * step.integral(lambda v: (v / top) ** p) ** (1.0 / p))

    def __str__(self):
        return f"sym.Lp({format_number(self.p)})"


@dataclass(frozen=True)
class OrliczProfile:
    """Luxemburg gauge computed on the step function by quadrature."""

    name: str
    domain: Optional[float] = None

    def __post_init__(self):
        young(self.name)

    norming = True

    def __call__(self, step: StepFunction) -> float:
        return luxemburg_norm(young(self.name).M, step.levels, step.widths)

    def __str__(self):
        return f"sym.orlicz({self.name})"


@dataclass(frozen=True)
class LorentzProfile:
    """``int_0^T x*(t) w(t) dt`` with ``w`` constant on ``k`` equal pieces.

    The weights must be nonnegative and non-increasing, which makes the
    functional a norm (it is a supremum of linear functionals over
    rearrangements of ``w``).
    """

    weights: tuple
    domain: Optional[float] = None

    def __post_init__(self):
        w = tuple(as_number(v) for v in self.weights)
        if not w or w[0] <= 0 or any(v < 0 for v in w):
            raise ValueError("Lorentz weights must be nonnegative with a positive first weight")
        if any(b > a for a, b in zip(w, w[1:])):
            raise ValueError("Lorentz weights must be non-increasing")
        if any(v == INF for v in w):
            raise ValueError("Lorentz weights must be finite")
        object.__setattr__(self, "weights", w)

    @property
    def norming(self) -> bool:
        # the indicator of [0, 1) has norm mean(w) when the domain is [0, 1)
        return sum(self.weights, Fraction(0)) / len(self.weights) == 1

    def weight_breakpoints(self, total: float) -> np.ndarray:
        k = len(self.weights)
        return np.array([total * j / k for j in range(k + 1)])

    def __call__(self, step: StepFunction) -> float:
        total = step.total
        wb = self.weight_breakpoints(total)
        cuts = np.union1d(np.array(step.breakpoints), wb)
        acc = []
        for a, b in zip(cuts, cuts[1:]):
            mid = 0.5 * (a + b)
            j = min(int(np.searchsorted(wb, mid, side="right")) - 1, len(self.weights) - 1)
            acc.append((b - a) * step(mid) * float(self.weights[j]))
        return math.fsum(acc)

    def __str__(self):
        return f"sym.lorentz({','.join(format_number(w) for w in self.weights)})"


PROFILE_TYPES = (LpProfile, OrliczProfile, LorentzProfile)
