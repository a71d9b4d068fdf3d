"""Symmetric (rearrangement-invariant) spaces and transfer between measure spaces.

A symmetric space is a profile on decreasing step functions bound to a
measure space.  Transferring it to another space of the same total mass is a
rebinding: the profile is kept and only the atoms change.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .expr import Expr, Intersect, Lp, Sum, Sym, INF
from .measure import FunctionVector, MeasureError, MeasureSpace, StepFunction, rearrangement
from .norms import ConvergenceError, NormResult, dual_norm, norm
from .profiles import PROFILE_TYPES, LorentzProfile, LpProfile, OrliczProfile
from .reports import LawReport, witness

MASS_TOL = 1e-12

CATALOG_PROFILES = (
    LpProfile(1), LpProfile("3/2"), LpProfile(2), LpProfile(3), LpProfile(INF),
    OrliczProfile("square"), OrliczProfile("cube"), OrliczProfile("exp"),
    LorentzProfile(("3/2", 1, "1/2")),
)


@dataclass(frozen=True)
class SymmetricSpace:
    profile: object
    space: MeasureSpace

    def __post_init__(self):
        if not isinstance(self.profile, PROFILE_TYPES):
            raise TypeError(f"unsupported profile {self.profile!r}")
        dom = self.profile.domain
        if dom is not None and abs(dom - self.space.total) > MASS_TOL * max(1.0, dom):
            raise MeasureError(f"profile {self.profile} is declared on total mass {dom}, "
                               f"the space has total mass {self.space.total}")

    @property
    def expr(self) -> Sym:
        return Sym(self.profile)

    def __str__(self):
        return f"{self.profile} on {self.space}"


def symmetric_norm(S: SymmetricSpace, x: FunctionVector) -> NormResult:
    if x.space != S.space:
        raise MeasureError(f"vector lives on {x.space}, the symmetric space on {S.space}")
    return NormResult(float(S.profile(rearrangement(x))), None, 0.0)


def _same_total(a: float, b: float) -> bool:
    return abs(a - b) <= MASS_TOL * max(1.0, a, b)


def mekler_transfer(S: SymmetricSpace, target: MeasureSpace) -> SymmetricSpace:
    """The same profile bound to ``target``; total masses must agree."""
    total = S.profile.domain if S.profile.domain is not None else S.space.total
    if not _same_total(total, target.total):
        raise MeasureError(f"cannot transfer between total masses {total!r} and {target.total!r}")
    return SymmetricSpace(S.profile, target)


def norming_value(profile, total: float) -> float:
    """Norm of the indicator of a set of measure one (the unit interval if ``total <= 1``)."""
    if total > 1.0:
        step = StepFunction((0.0, 1.0, total), (1.0, 0.0))
    else:
        step = StepFunction((0.0, 1.0), (1.0,))
    return float(profile(step))


# --- transfer checks -------------------------------------------------------

def common_blocks(mu: MeasureSpace, nu: MeasureSpace) -> tuple[list, list]:
    """Atom groups of ``mu`` and ``nu`` over their common cumulative breakpoints.

    Returns two lists of index lists; block ``j`` has the same measure in both
    spaces, so block-constant functions correspond equimeasurably.
    """
    if not _same_total(mu.total, nu.total):
        raise MeasureError("spaces have different total masses")
    cm = np.cumsum(mu.masses)
    cn = np.cumsum(nu.masses)
    shared = [t for t in cm[:-1] if np.any(np.abs(cn[:-1] - t) <= MASS_TOL)]
    cuts = [0.0, *shared, max(mu.total, nu.total) + 1.0]

    def groups(c):
        out = []
        for lo, hi in zip(cuts, cuts[1:]):
            out.append([i for i, t in enumerate(c) if lo + MASS_TOL < t <= hi + MASS_TOL])
        return out

    return groups(cm), groups(cn)


def _spread(c, blocks, n):
    v = np.zeros(n)
    for val, idx in zip(c, blocks):
        v[idx] = val
    return v


def block_inclusion_constant(E: SymmetricSpace, F: SymmetricSpace, blocks, samples: int = 16,
                             seed: int = 0, maxfev: int = 200) -> float:
    """Estimate of ``sup ||x||_F / ||x||_E`` over functions constant on ``blocks``."""
    k = len(blocks)
    n = E.space.n
    rng = np.random.default_rng(seed)

    def ratio(c):
        x = FunctionVector(_spread(c, blocks, n), E.space)
        den = symmetric_norm(E, x).value
        return symmetric_norm(F, x).value / den if den > 0 else 0.0

    starts = [np.eye(k)[j] for j in range(k)] + [np.ones(k)]
    starts += list(rng.exponential(size=(samples, k)))
    scored = sorted(((ratio(c), c) for c in starts), key=lambda t: -t[0])
    best = scored[0][0]
    for _, c0 in scored[:2]:
        z0 = np.log(np.maximum(c0, 1e-8 * c0.max()))
        res = minimize(lambda z: -ratio(np.exp(z - z.max())), z0, method="Nelder-Mead",
                       options={"maxfev": maxfev, "xatol": 1e-10, "fatol": 1e-13})
        best = max(best, ratio(np.exp(res.x - res.x.max())))
    return best


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def check_transfer_isomorphism(E: SymmetricSpace, F: SymmetricSpace, target: MeasureSpace,
                               samples: int = 6, tol: float = 1e-4, seed: int = 0,
                               inclusion_tol: float = 1e-3) -> LawReport:
    """Compare norms, meet, join, duals and inclusion constants across a transfer.

    Test vectors are constant on the blocks common to both spaces, so each
    vector on ``E.space`` has an equimeasurable partner on ``target``.
    Norms of partners must agree exactly; meet, join and dual to ``tol``;
    inclusion constants (over block-constant functions) to ``inclusion_tol``.
    Inclusion gaps are recorded scaled by ``tol / inclusion_tol`` so that one
    report threshold applies; ``details`` keeps the raw maxima per check.
    """
    if E.space != F.space:
        raise MeasureError("E and F must share a measure space")
    Et, Ft = mekler_transfer(E, target), mekler_transfer(F, target)
    bm, bn = common_blocks(E.space, target)
    rng = np.random.default_rng(seed)
    rep = LawReport("transfer", tol, seed)
    raw = {"norm": 0.0, "meet": 0.0, "join": 0.0, "dual": 0.0, "inclusion": 0.0}
    e, f = E.expr, F.expr
    meet_e, join_e = Intersect(e, f), Sum(e, f)

    for _ in range(samples):
        c = rng.normal(size=len(bm)) * rng.exponential(size=len(bm))
        if not np.any(c):
            c[0] = 1.0
        x = FunctionVector(_spread(c, bm, E.space.n), E.space)
        y = FunctionVector(_spread(c, bn, target.n), target)
        wit = witness([E.profile, F.profile], c, E.space.masses, target=list(target.masses))
        gaps = {"norm": max(abs(symmetric_norm(E, x).value - symmetric_norm(Et, y).value),
                            abs(symmetric_norm(F, x).value - symmetric_norm(Ft, y).value))}
        try:
            gaps["meet"] = _rel(norm(meet_e, x).value, norm(meet_e, y).value)
            gaps["join"] = _rel(norm(join_e, x).value, norm(join_e, y).value)
            gaps["dual"] = max(_rel(dual_norm(e, x).value, dual_norm(e, y).value),
                               _rel(dual_norm(f, x).value, dual_norm(f, y).value))
        except ConvergenceError as err:
            rep.skip(f"solver: {err}")
            continue
        for key, g in gaps.items():
            raw[key] = max(raw[key], g)
        # the norm check demands exact equality: any difference is a violation
        v = max(gaps["meet"], gaps["join"], gaps["dual"])
        if gaps["norm"] > 0:
            v = math.inf
        rep.record(v, wit)

    cm = block_inclusion_constant(E, F, bm, seed=seed)
    cn = block_inclusion_constant(Et, Ft, bn, seed=seed)
    raw["inclusion"] = abs(cm - cn)
    rep.record(raw["inclusion"] * tol / inclusion_tol,
               witness([E.profile, F.profile], None, E.space.masses,
                       constants=[float(cm), float(cn)]))
    rep.details.append({k: float(v) for k, v in raw.items()})
    return rep


# --- inclusion chain -------------------------------------------------------

def _chain_vectors(space: MeasureSpace, samples: int, rng) -> list:
    n = space.n
    out = []
    if n <= 8:
        for r in range(1, n + 1):
            for idx in itertools.combinations(range(n), r):
                v = np.zeros(n)
                v[list(idx)] = 1.0
                out.append(v)
    out += list(rng.exponential(size=(samples, n)) * (rng.random((samples, n)) > 0.2))
    return [FunctionVector(v, space) for v in out if np.any(v)]


def chain_ends(space: MeasureSpace) -> tuple[Expr, Expr]:
    """The spaces bracketing every norming symmetric space on ``space``."""
    if space.kind == "probability":
        return Lp(INF), Lp(1)
    return Intersect(Lp(1), Lp(INF)), Sum(Lp(1), Lp(INF))


def check_inclusion_chain(S: SymmetricSpace, samples: int = 32, tol: float = 1e-6,
                          seed: int = 0) -> LawReport:
    """``lower ⊂¹ S ⊂¹ upper`` on sampled vectors, with ``chain_ends`` as the bracket.

    A profile that fails the norming condition yields an undetermined report
    naming the precondition, not a chain failure.
    """
    rep = LawReport("chain", tol, seed)
    nv = norming_value(S.profile, S.space.total)
    if abs(nv - 1.0) > 1e-12:
        rep.skip(f"norming condition fails for {S.profile}: indicator norm {nv!r}")
        return rep
    lower, upper = chain_ends(S.space)
    rng = np.random.default_rng(seed)
    c_low = c_up = 0.0
    for x in _chain_vectors(S.space, samples, rng):
        s = symmetric_norm(S, x).value
        try:
            lo, up = norm(lower, x).value, norm(upper, x).value
        except ConvergenceError as err:
            rep.skip(f"solver: {err}")
            continue
        r_low, r_up = s / lo, up / s
        c_low, c_up = max(c_low, r_low), max(c_up, r_up)
        rep.record(max(0.0, r_low - 1.0, r_up - 1.0),
                   witness([lower, S.profile, upper], x.values, S.space.masses))
    rep.details.append({"lower": str(lower), "upper": str(upper),
                        "lower_constant": float(c_low), "upper_constant": float(c_up)})
    return rep
