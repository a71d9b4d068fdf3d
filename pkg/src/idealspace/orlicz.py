"""Young functions, the Luxemburg gauge and its Köthe dual (Amemiya form)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize_scalar

_C = math.e - 1.0


@dataclass(frozen=True)
class YoungFunction:
    """A Young function normalized so that ``M(1) = 1``.

    ``delta2``: M satisfies the Delta_2 growth condition (so L_M has order
    continuous norm).  ``nabla2``: the complementary function satisfies it.
    ``power`` is set when ``M(t) = t**power``.
    """

    name: str
    M: Callable[[np.ndarray], np.ndarray]
    conjugate: Callable[[np.ndarray], np.ndarray]
    delta2: bool
    nabla2: bool
    power: Optional[float] = None


def _exp_M(t):
    with np.errstate(over="ignore"):
        return np.expm1(t) / _C


def _exp_conj(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    big = _C * s > 1.0
    sb = s[big]
    out[big] = sb * np.log(_C * sb) - sb + 1.0 / _C
    return out


def _power(p):
    q = p / (p - 1.0)
    k = (p - 1.0) * p ** (-q)
    return (lambda t: np.asarray(t, dtype=float) ** p,
            lambda s: k * np.asarray(s, dtype=float) ** q)


CATALOG = {
    "square": YoungFunction("square", *_power(2.0), delta2=True, nabla2=True, power=2.0),
    "cube": YoungFunction("cube", *_power(3.0), delta2=True, nabla2=True, power=3.0),
    # (e^t - 1)/(e - 1): the exponential class, not Delta_2
    "exp": YoungFunction("exp", _exp_M, _exp_conj, delta2=False, nabla2=True),
}


def young(name: str) -> YoungFunction:
    try:
        return CATALOG[name]
    except KeyError:
        raise ValueError(f"unknown Young function {name!r}; known: {sorted(CATALOG)}") from None


def luxemburg_norm(M, values, masses, rtol=1e-13) -> float:
    """``inf{lam > 0 : sum_i mu_i M(|x_i|/lam) <= 1}`` by bisection.

    Works for any normalized Young function ``M`` (``M(1) = 1``); the
    returned value is the feasible endpoint of the final bracket.
    """
    a = np.abs(np.asarray(values, dtype=float))
    masses = np.asarray(masses, dtype=float)
    top = a.max(initial=0.0)
    if top == 0.0:
        return 0.0
    y = a / top

    def modular(lam):
        with np.errstate(over="ignore"):
            return float(np.dot(masses, M(y / lam)))

    hi = max(1.0, float(masses.sum()))
    lo = hi / 2.0
    while modular(lo) <= 1.0:
        hi, lo = lo, lo / 2.0
    for _ in range(200):
        if hi - lo <= rtol * hi:
            break
        mid = 0.5 * (lo + hi)
        if modular(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return top * hi


def amemiya_dual_norm(yf: YoungFunction, values, masses) -> float:
    """Köthe dual of the Luxemburg norm: ``inf_s s(1 + sum mu M*(|f|/s))``."""
    a = np.abs(np.asarray(values, dtype=float))
    masses = np.asarray(masses, dtype=float)
    top = a.max(initial=0.0)
    if top == 0.0:
        return 0.0
    y = a / top

    def h(logs):
        s = math.exp(logs)
        return s * (1.0 + float(np.dot(masses, yf.conjugate(y / s))))

    # h is convex in s; scan for a bracket, then refine
    grid = np.linspace(-30.0, 30.0, 241)
    vals = [h(g) for g in grid]
    k = int(np.argmin(vals))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    res = minimize_scalar(h, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12, "maxiter": 500})
    return top * min(float(res.fun), vals[k])
