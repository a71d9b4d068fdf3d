"""The lattice layer: inclusion constants, interval projections, law checks.

Order ``E ⊂¹ F`` means ``||x||_F <= ||x||_E`` for all ``x``.  Meet is the
intersection (max norm) and join the sum (infimal convolution).  Sampling
can only refute an inclusion; "holds" needs an analytic rule, which here is
the certified upper bound ``inclusion_bound`` for Lp trees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .expr import (INF, BigIntersect, BigSum, Dual, Expr, Intersect, Lp, Scale, Sum, Sym)
from .generators import random_tree, random_vector
from .measure import FunctionVector, MeasureSpace, probability_space
from .norms import ConvergenceError, push_dual, value
from .profiles import LpProfile
from .reports import LawReport, witness

HOLDS, FAILS, UNDETERMINED = "holds", "fails", "undetermined"


@dataclass(frozen=True)
class OrderVerdict:
    relation: str
    constant_estimate: float
    witness: Optional[FunctionVector] = None
    upper_bound: Optional[float] = None


def meet(E: Expr, F: Expr) -> Expr:
    return Intersect(E, F)


def join(E: Expr, F: Expr) -> Expr:
    return Sum(E, F)


def lambda_proj(E: Expr, F: Expr, H: Expr) -> Expr:
    """``(H ∩ F) + E``, the lower modular projection onto ``[E, F]``."""
    return Sum(Intersect(H, F), E)


def rho_proj(E: Expr, F: Expr, H: Expr) -> Expr:
    """``(H + E) ∩ F``, the upper modular projection onto ``[E, F]``."""
    return Intersect(Sum(H, E), F)


# --- inclusion constants ---------------------------------------------------

def _exponent(e) -> Optional[float]:
    if isinstance(e, Lp):
        return e.p
    if isinstance(e, Sym) and isinstance(e.profile, LpProfile):
        return e.profile.p
    return None


def lp_constant(p, r, space: MeasureSpace) -> float:
    """Exact ``c(Lp, Lr)`` on a weighted atomic space.

    With ``e = 1/r - 1/p`` it is ``total^e`` for ``p >= r`` (Hölder, attained
    at constants) and ``min_mass^e`` for ``p < r`` (attained at an atom).
    """
    inv = lambda s: 0.0 if s == INF else 1.0 / float(s)
    e = inv(r) - inv(p)
    m = float(np.min(space.weights))
    return max(space.total ** e, m ** e)


def inclusion_bound(E: Expr, F: Expr, space: MeasureSpace) -> Optional[float]:
    """Certified upper bound on ``c(E, F)`` for trees over Lp leaves, else None.

    Uses ``c(E, F1 ∩ F2) = max c(E, Fi)``, ``c(E1 + E2, F) = max c(Ei, F)``,
    ``c(E1 ∩ E2, F) <= min c(Ei, F)``, ``c(E, F1 + F2) <= min c(E, Fi)`` and
    exact leaf constants.
    """
    if E == F:
        return 1.0
    if isinstance(E, Dual):
        return inclusion_bound(push_dual(E.inner), F, space)
    if isinstance(F, Dual):
        return inclusion_bound(E, push_dual(F.inner), space)
    if isinstance(F, (Intersect, BigIntersect)):
        parts = [inclusion_bound(E, c, space) for c in F.children()]
        return None if any(b is None for b in parts) else max(parts)
    if isinstance(E, (Sum, BigSum)):
        parts = [inclusion_bound(c, F, space) for c in E.children()]
        return None if any(b is None for b in parts) else max(parts)
    if isinstance(F, Scale):
        b = inclusion_bound(E, F.inner, space)
        return None if b is None else float(F.c) * b
    if isinstance(E, Scale):
        b = inclusion_bound(E.inner, F, space)
        return None if b is None else b / float(E.c)
    if isinstance(E, (Intersect, BigIntersect)):
        parts = [b for b in (inclusion_bound(c, F, space) for c in E.children()) if b is not None]
        return min(parts) if parts else None
    if isinstance(F, (Sum, BigSum)):
        parts = [b for b in (inclusion_bound(E, c, space) for c in F.children()) if b is not None]
        return min(parts) if parts else None
    p, r = _exponent(E), _exponent(F)
    if p is not None and r is not None:
        return lp_constant(p, r, space)
    return None


def _ratio(E, F, a, space):
    x = FunctionVector(a, space)
    den = value(E, x)
    return value(F, x) / den if den > 0 else 0.0


def inclusion_constant(E: Expr, F: Expr, space: MeasureSpace, samples: int = 64,
                       seed: int = 0, tol: float = 1e-6, ascent: bool = True,
                       maxfev: int = 200) -> OrderVerdict:
    """Lower estimate of ``c(E, F) = sup ||x||_F / ||x||_E`` with a verdict.

    Directions: atom indicators, the constant one, ``samples`` random
    nonnegative vectors, then Nelder-Mead ascent in log coordinates from the
    two best.  "holds" only comes from ``E == F`` or an analytic bound.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n = space.n
    ones = np.ones(n)
    if E == F:
        return OrderVerdict(HOLDS, 1.0, FunctionVector(ones, space), 1.0)
    rng = np.random.default_rng(seed)
    cands = [np.eye(n)[i] for i in range(n)] + [ones]
    cands += list(rng.exponential(size=(samples, n)) * (rng.random((samples, n)) > 0.2))
    scored = []
    for a in cands:
        if not np.any(a):
            continue
        try:
            scored.append((_ratio(E, F, a, space), a))
        except ConvergenceError:
            continue
    scored.sort(key=lambda t: -t[0])
    best, best_a = scored[0]
    if ascent:
        for r0, a0 in scored[:2]:
            z0 = np.log(np.maximum(a0, 1e-8 * a0.max()))

            def neg(z):
                try:
                    return -_ratio(E, F, np.exp(z - z.max()), space)
                except ConvergenceError:
                    return 0.0

            res = minimize(neg, z0, method="Nelder-Mead",
                           options={"maxfev": maxfev, "xatol": 1e-9, "fatol": 1e-12})
            a1 = np.exp(res.x - res.x.max())
            r1 = _ratio(E, F, a1, space)
            if r1 > best:
                best, best_a = r1, a1
    bound = inclusion_bound(E, F, space)
    wit = FunctionVector(best_a, space)
    if best > 1 + tol:
        return OrderVerdict(FAILS, best, wit, bound)
    if bound is not None and bound <= 1 + tol:
        return OrderVerdict(HOLDS, best, wit, bound)
    return OrderVerdict(UNDETERMINED, best, wit, bound)


# --- sampled identities ----------------------------------------------------

def sample_vectors(space: MeasureSpace, samples: int, rng: np.random.Generator) -> list:
    return [random_vector(rng, space) for _ in range(samples)]


def relative_gap(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _safe_value(E, x):
    try:
        return value(E, x)
    except ConvergenceError:
        return math.nan


def check_identities(law: str, pairs, space: MeasureSpace, xs, tol: float,
                     seed=None, one_sided: Sequence[str] = ()) -> LawReport:
    """Compare ``||x||_lhs`` with ``||x||_rhs`` for every labelled pair and vector.

    Labels in ``one_sided`` only count ``lhs > rhs`` as a violation.
    """
    rep = LawReport(law, tol, seed)
    worst = {}
    for label, lhs, rhs in pairs:
        for x in xs:
            a, b = _safe_value(lhs, x), _safe_value(rhs, x)
            if math.isnan(a) or math.isnan(b):
                rep.skip(f"{label}: solver failure")
                continue
            if label in one_sided:
                v = max(0.0, a - b) / max(abs(b), 1e-300)
            else:
                v = relative_gap(a, b)
            worst[label] = max(worst.get(label, 0.0), v)
            rep.record(v, witness([lhs, rhs], x.values, space.masses, check=label))
    for label, v in worst.items():
        rep.details.append(f"{label}: max violation {v:.3e}")
    return rep


def lattice_axiom_pairs(E, F, G):
    return [
        ("join commutative", Sum(E, F), Sum(F, E)),
        ("meet commutative", Intersect(E, F), Intersect(F, E)),
        ("join associative", Sum(E, Sum(F, G)), Sum(Sum(E, F), G)),
        ("meet associative", Intersect(E, Intersect(F, G)), Intersect(Intersect(E, F), G)),
        ("absorption join", Sum(E, Intersect(E, F)), E),
        ("absorption meet", Intersect(E, Sum(E, F)), E),
    ]


def check_lattice_axioms(E, F, G, space: MeasureSpace, samples: int = 5,
                         tol: float = 1e-4, seed: int = 0) -> LawReport:
    """Commutativity, associativity and absorption as isometries on samples."""
    xs = sample_vectors(space, samples, np.random.default_rng(seed))
    return check_identities("lattice-axioms", lattice_axiom_pairs(E, F, G), space, xs, tol, seed)


def check_modularity(E, F, H, space: MeasureSpace, samples: int = 5, tol: float = 1e-4,
                     seed: int = 0) -> LawReport:
    """``E + (H ∩ F) = (E + H) ∩ F`` for ``E ⊂¹ F``, i.e. ``λ(H) = ρ(H)``."""
    xs = sample_vectors(space, samples, np.random.default_rng(seed))
    rep = check_identities("modularity", [("modular law", lambda_proj(E, F, H),
                                           rho_proj(E, F, H))], space, xs, tol, seed)
    pre = inclusion_constant(E, F, space, samples=8, seed=seed, ascent=False)
    if pre.relation != HOLDS:
        rep.details.append(f"precondition {E} ⊂¹ {F}: {pre.relation} "
                           f"(estimate {pre.constant_estimate:.6g})")
    return rep


def distributivity_parts(E, F, G, space: MeasureSpace, samples: int = 5, tol: float = 1e-4,
                         seed: int = 0, parts: Sequence[str] = ("equalities", "inequality")) -> dict:
    xs = sample_vectors(space, samples, np.random.default_rng(seed))
    out = {}
    if "equalities" in parts:
        out["equalities"] = check_identities("distributivity", [
            ("meet over join", Intersect(E, Sum(F, G)), Sum(Intersect(E, F), Intersect(E, G))),
            ("join over meet", Sum(E, Intersect(F, G)), Intersect(Sum(E, F), Sum(E, G))),
        ], space, xs, tol, seed)
    if "inequality" in parts:
        out["inequality"] = check_identities("distributive-inequality", [
            ("(E+F)∩G ⊂¹ E+(F∩G)", Sum(E, Intersect(F, G)), Intersect(Sum(E, F), G)),
        ], space, xs, tol, seed, one_sided=("(E+F)∩G ⊂¹ E+(F∩G)",))
    return out


def check_distributivity(E, F, G, space: MeasureSpace, samples: int = 5, tol: float = 1e-4,
                         seed: int = 0) -> LawReport:
    """Both distributive equalities and the one-sided inequality on samples."""
    parts = distributivity_parts(E, F, G, space, samples, tol, seed)
    rep = parts["equalities"].merge(parts["inequality"])
    rep.law = "distributivity"
    return rep


def isometry_gap(E, F, xs) -> float:
    """Largest relative norm difference over ``xs`` (nan on solver failure)."""
    return max(relative_gap(_safe_value(E, x), _safe_value(F, x)) for x in xs)


def probe_vectors(space: MeasureSpace, samples: int, rng: np.random.Generator) -> list:
    """Atom indicators, the constant one, then ``samples`` random vectors."""
    eye = np.eye(space.n)
    xs = [FunctionVector(eye[i], space) for i in range(space.n)]
    xs.append(FunctionVector(np.ones(space.n), space))
    return xs + sample_vectors(space, samples, rng)


def uniqueness_probe(E, F, G, space: MeasureSpace, samples: int = 4, tol: float = 1e-4,
                     seed: int = 0, mode: str = "first") -> LawReport:
    """Cancellation: equal meets and joins with ``G`` force ``E = F``.

    The premises are tested on atom indicators, the constant one and
    ``samples`` random vectors, stopping at the first vector that separates
    them; the conclusion is then tested on the same vectors.
    ``mode="second"`` asserts the weaker conclusion that two of ``E, F, G``
    coincide.  When a premise fails the probe passes by contraposition.
    """
    if mode not in ("first", "second"):
        raise ValueError(f"unknown mode {mode!r}")
    xs = probe_vectors(space, samples, np.random.default_rng(seed))
    rep = LawReport(f"uniqueness[{mode}]", tol, seed)
    premise = 0.0
    for x in xs:
        premise = max(premise, isometry_gap(Intersect(G, E), Intersect(G, F), [x]),
                      isometry_gap(Sum(G, E), Sum(G, F), [x]))
        if math.isnan(premise):
            rep.skip("solver failure while testing the premises")
            return rep
        if premise > tol:
            rep.record(0.0)
            rep.details.append(f"premise fails (gap {premise:.3e}); conclusion not required")
            return rep
    if mode == "first":
        gaps = [isometry_gap(E, F, [x]) for x in xs]
    else:
        gaps = [min(isometry_gap(G, E, [x]), isometry_gap(F, E, [x]), isometry_gap(G, F, [x]))
                for x in xs]
    k = int(np.nanargmax(gaps)) if not all(math.isnan(g) for g in gaps) else 0
    rep.record(max(gaps), witness([E, F, G], xs[k].values, space.masses))
    rep.details.append(f"premises hold (gap {premise:.3e}); conclusion gap {max(gaps):.3e}")
    return rep


def dedekind_demo(n_max: int = 1000, family: Sequence[Expr] = (Lp(1), Lp(2)),
                  space: Optional[MeasureSpace] = None, lower_bounds: int = 100,
                  samples: int = 3, tol: float = 1e-6, seed: int = 0) -> dict:
    """Unbounded scale chain and the greatest lower bound of a finite family.

    Returns three reports: ``chain`` (``c(L2, Scale(n, L2)) = n`` for every
    ``n <= n_max``, so no space lies ⊂¹ below the whole chain), ``glb``
    (``Cap(family)`` is below each member and above every sampled lower
    bound) and ``norming`` (``Linf ⊂¹ Cap(family)``).
    """
    rng = np.random.default_rng(seed)
    if space is None:
        space = probability_space(4)
    chain = LawReport("dedekind-chain", tol, seed)
    for n in range(1, n_max + 1):
        v = inclusion_constant(Lp(2), Scale(n, Lp(2)), space, samples=2, seed=seed,
                               ascent=False)
        chain.record(abs(v.constant_estimate - n) / n,
                     witness([Lp(2), Scale(n, Lp(2))], v.witness.values, space.masses))
    chain.details.append(f"c(L2, scale(n,L2)) = n for n = 1..{n_max}")

    B = BigIntersect(tuple(family))
    glb = LawReport("dedekind-glb", tol, seed)
    for Ei in family:
        b = inclusion_bound(B, Ei, space)
        glb.record(max(0.0, b - 1.0), witness([B, Ei], masses=space.masses, check="below member"))
    for _ in range(lower_bounds):
        T = random_tree(rng, depth=3)
        c = max(inclusion_bound(T, Ei, space) for Ei in family)
        G = Scale(c, T) if abs(c - 1.0) > 1e-15 else T
        b = inclusion_bound(G, B, space)
        glb.record(max(0.0, b - 1.0), witness([G, B], masses=space.masses,
                                              check="lower bound below intersection (analytic)"))
        for x in sample_vectors(space, samples, rng):
            gb, gg = _safe_value(B, x), _safe_value(G, x)
            if math.isnan(gg):
                glb.skip("solver failure")
                continue
            glb.record(max(0.0, gb - gg) / gg, witness([G, B], x.values, space.masses,
                                                      check="lower bound below intersection"))
    norming = LawReport("dedekind-norming", tol, seed)
    v = inclusion_constant(Lp(INF), B, space, samples=16, seed=seed)
    norming.record(max(0.0, v.constant_estimate - 1.0),
                   witness([Lp(INF), B], v.witness.values, space.masses))
    if v.relation != HOLDS:
        norming.skip(f"Linf ⊂¹ {B}: {v.relation}")
    return {"chain": chain, "glb": glb, "norming": norming}
