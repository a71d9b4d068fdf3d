"""Numeric norm calculus on finite atomic measure spaces.

Every norm here is a lattice norm, so values depend only on ``|x|`` and the
solvers work with nonnegative vectors.  Closed-form leaves (weighted Lp,
Luxemburg gauges, rearrangement profiles) are evaluated directly; a subtree
containing sums is compiled into one conic program and handed to Clarabel
through cvxpy.  The weighted pairing ``sum_i mu_i f_i x_i`` defines duals.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import cvxpy as cp
import numpy as np

from .expr import (INF, BigIntersect, BigSum, Dual, Expr, Intersect, Lp, Orlicz,
                   Scale, Sum, Sym, conjugate_exponent)
from .measure import FunctionVector, MeasureError, MeasureSpace, rearrangement
from .orlicz import amemiya_dual_norm, luxemburg_norm, young
from .profiles import LorentzProfile, LpProfile, OrliczProfile

DEFAULT_TOL = 1e-6
DEFAULT_BUDGET = 10 ** 5

_SOLVER_OPTS = dict(tol_gap_abs=1e-11, tol_gap_rel=1e-11, tol_feas=1e-11,
                    tol_ktratio=1e-9, max_iter=400)


class NormError(ValueError):
    """Unsupported node or family, or a measure-space mismatch."""


class ConvergenceError(RuntimeError):
    """A solver failed; ``bound`` is the best certified bound available."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


@dataclass(frozen=True)
class NormResult:
    value: float
    witness: Optional[FunctionVector] = None
    tol: float = 0.0
    converged: bool = True
    lower_bound: Optional[float] = None
    parts: tuple = field(default=(), compare=False)

    def __float__(self):
        return self.value


# --- direct evaluation -----------------------------------------------------

def _check_domain(profile, space):
    dom = getattr(profile, "domain", None)
    if dom is not None and abs(dom - space.total) > 1e-12 * max(1.0, dom):
        raise NormError(f"profile {profile} is declared on total mass {dom}, "
                        f"the space has total mass {space.total}")


def _profile_value(profile, a, space):
    _check_domain(profile, space)
    return profile(rearrangement(FunctionVector(a, space)))


def _lp_value(p, a, w):
    top = a.max(initial=0.0)
    if top == 0.0:
        return 0.0
    if p == INF:
        return float(top)
    if p == 1:
        return float(np.dot(w, a))
    pf = float(p)
    return float(top * np.dot(w, (a / top) ** pf) ** (1.0 / pf))


def _evaluate(e: Expr, a: np.ndarray, space: MeasureSpace, tol: float, budget: int) -> float:
    if not np.any(a):
        return 0.0
    w = space.weights
    if isinstance(e, Lp):
        return _lp_value(e.p, a, w)
    if isinstance(e, Orlicz):
        return luxemburg_norm(young(e.name).M, a, w)
    if isinstance(e, Sym):
        return _profile_value(e.profile, a, space)
    if isinstance(e, Scale):
        return float(e.c) * _evaluate(e.inner, a, space, tol, budget)
    if isinstance(e, (Intersect, BigIntersect)):
        return max(_evaluate(c, a, space, tol, budget) for c in e.children())
    if isinstance(e, (Sum, BigSum)):
        return _solve_sum(e.children(), a, space, tol, budget)[0]
    if isinstance(e, Dual):
        return _dual_value(e.inner, a, space, tol, budget)
    raise NormError(f"no numeric norm for {type(e).__name__} nodes ({e})")


def _dual_value(inner, a, space, tol, budget):
    pushed = push_dual(inner)
    if isinstance(pushed, Dual):
        leaf = pushed.inner
        if isinstance(leaf, Orlicz):
            return amemiya_dual_norm(young(leaf.name), a, space.weights)
        return _generic_dual(leaf, a, space, tol, budget)[0]
    return _evaluate(pushed, a, space, tol, budget)


def push_dual(e: Expr) -> Expr:
    """An expression isometric to ``Dual(e)`` with duals pushed to the leaves.

    Uses the finite-dimensional identities ``(A cap B)' = A' + B'``,
    ``(A + B)' = A' cap B'``, ``(cA)' = A'/c``, ``A'' = A`` and the Hölder
    pairing ``Lp' = Lq``.  Orlicz leaves and Lorentz profiles keep an explicit
    ``Dual`` wrapper.
    """
    if isinstance(e, Lp):
        return Lp(conjugate_exponent(e.p))
    if isinstance(e, Orlicz):
        return Dual(e)
    if isinstance(e, Sym):
        pr = e.profile
        if isinstance(pr, LpProfile):
            return Lp(conjugate_exponent(pr.p))
        if isinstance(pr, OrliczProfile):
            return Dual(Orlicz(pr.name))
        return Dual(e)
    if isinstance(e, Intersect):
        return Sum(push_dual(e.left), push_dual(e.right))
    if isinstance(e, Sum):
        return Intersect(push_dual(e.left), push_dual(e.right))
    if isinstance(e, BigIntersect):
        return BigSum(tuple(push_dual(c) for c in e.items))
    if isinstance(e, BigSum):
        return BigIntersect(tuple(push_dual(c) for c in e.items))
    if isinstance(e, Scale):
        return Scale(1 / e.c, push_dual(e.inner))
    if isinstance(e, Dual):
        return e.inner
    raise NormError(f"no numeric dual for {type(e).__name__} nodes ({e})")


# --- conic formulation -----------------------------------------------------

class _Conic:
    """Builds cvxpy expressions that are exact in convex (upper-bounded) position."""

    def __init__(self, space: MeasureSpace):
        self.space = space
        self.w = np.array(space.masses)
        self.n = space.n
        self.constraints = []

    def build(self, e: Expr, v):
        if isinstance(e, Lp):
            return self.lp(e.p, v)
        if isinstance(e, Orlicz):
            yf = young(e.name)
            if yf.power is not None:
                return self.lp(yf.power, v)
            return self.orlicz_exp(v)
        if isinstance(e, Sym):
            pr = e.profile
            _check_domain(pr, self.space)
            if isinstance(pr, LpProfile):
                return self.lp(pr.p, v)
            if isinstance(pr, OrliczProfile):
                return self.build(Orlicz(pr.name), v)
            return self.lorentz(pr, v)
        if isinstance(e, Scale):
            return float(e.c) * self.build(e.inner, v)
        if isinstance(e, (Intersect, BigIntersect)):
            parts = [self.build(c, v) for c in e.children()]
            return parts[0] if len(parts) == 1 else cp.maximum(*parts)
        if isinstance(e, (Sum, BigSum)):
            items = e.children()
            us = [cp.Variable(self.n) for _ in items[:-1]]
            rest = v - sum(us) if us else v
            return sum(self.build(c, u) for c, u in zip(items, us)) + self.build(items[-1], rest)
        if isinstance(e, Dual):
            pushed = push_dual(e.inner)
            if isinstance(pushed, Dual):
                leaf = pushed.inner
                if isinstance(leaf, Orlicz) and young(leaf.name).power is None:
                    return self.orlicz_exp_dual(v)
                if isinstance(leaf, Orlicz):
                    return self.lp(conjugate_exponent(young(leaf.name).power), v)
                return self.lorentz_dual(leaf.profile, v)
            return self.build(pushed, v)
        raise NormError(f"no numeric norm for {type(e).__name__} nodes ({e})")

    def lp(self, p, v):
        if p == INF:
            return cp.norm_inf(v)
        if p == 1:
            return cp.sum(cp.multiply(self.w, cp.abs(v)))
        pf = float(p)
        return cp.pnorm(cp.multiply(self.w ** (1.0 / pf), v), pf)

    def orlicz_exp(self, v):
        # Luxemburg gauge of (e^t - 1)/(e - 1): t e^{a/t} <= s elementwise
        t = cp.Variable(nonneg=True)
        a = cp.Variable(self.n)
        s = cp.Variable(self.n)
        c = math.e - 1.0
        self.constraints += [a >= v, a >= -v,
                             cp.constraints.ExpCone(a, t * np.ones(self.n), s),
                             self.w @ s - self.space.total * t <= c * t]
        return t

    def orlicz_exp_dual(self, v):
        # Amemiya form: inf_sig sig + sum mu [rel_entr(b, sig) + (ln c - 1) b + sig/c],
        # b >= max(|v|, sig/c)
        c = math.e - 1.0
        sig = cp.Variable(nonneg=True)
        b = cp.Variable(self.n)
        ones = np.ones(self.n)
        self.constraints += [b >= v, b >= -v, b >= sig * ones / c]
        terms = cp.rel_entr(b, sig * ones) + (math.log(c) - 1.0) * b + sig * ones / c
        return sig + self.w @ terms

    def lorentz(self, pr: LorentzProfile, v):
        total = self.space.total
        k = len(pr.weights)
        w = [float(x) for x in pr.weights] + [0.0]
        out = 0
        for j in range(1, k + 1):
            coef = w[j - 1] - w[j]
            if coef == 0:
                continue
            t = total * j / k
            s = cp.Variable(nonneg=True)
            out = out + coef * (t * s + self.w @ cp.pos(cp.abs(v) - s))
        return out

    def lorentz_dual(self, pr: LorentzProfile, v):
        # the Lorentz norm is max over z in Z of sum mu z |x|, with Z the
        # Minkowski sum of c_j * {0 <= th <= 1, sum mu th <= t_j}; its dual
        # ball is {|f| <= z, z in Z}
        total = self.space.total
        k = len(pr.weights)
        w = [float(x) for x in pr.weights] + [0.0]
        r = cp.Variable(nonneg=True)
        dom = 0
        for j in range(1, k + 1):
            coef = w[j - 1] - w[j]
            if coef == 0:
                continue
            phi = cp.Variable(self.n, nonneg=True)
            self.constraints += [phi <= r, self.w @ phi <= r * total * j / k]
            dom = dom + coef * phi
        self.constraints += [v <= dom, -v <= dom]
        return r


def _solve(problem, budget=DEFAULT_BUDGET):
    opts = dict(_SOLVER_OPTS, max_iter=min(budget, _SOLVER_OPTS["max_iter"]))
    with warnings.catch_warnings():
        # inaccurate solutions are reported through the status instead
        warnings.simplefilter("ignore", UserWarning)
        try:
            problem.solve(solver=cp.CLARABEL, **opts)
        except cp.error.SolverError:
            problem.solve(solver=cp.SCS, eps=1e-10, max_iters=budget)
    return problem.status


def _build_sum(items: tuple, space: MeasureSpace, y):
    conic = _Conic(space)
    parts = [cp.Variable(space.n, nonneg=True) for _ in items]
    objective = sum(conic.build(c, u) for c, u in zip(items, parts))
    cons = conic.constraints + [sum(parts) == y]
    return cp.Problem(cp.Minimize(objective), cons), parts


@functools.lru_cache(maxsize=512)
def _cached_sum(items: tuple, space: MeasureSpace):
    y = cp.Parameter(space.n, nonneg=True)
    prob, parts = _build_sum(items, space, y)
    # the first solve canonicalizes from scratch and rounds differently from
    # later parameter re-solves; spend it here so results do not depend on history
    y.value = np.ones(space.n)
    _solve(prob)
    return prob, y, parts


def _sum_program(items: tuple, space: MeasureSpace, y: np.ndarray):
    """Infimal-convolution program at the scaled input ``y``.

    Programs are cached per (items, space) with the input as a parameter, so
    re-solves skip the modelling overhead of cvxpy and every request for the
    same data solves the same program.
    """
    prob, param, parts = _cached_sum(items, space)
    param.value = y
    return prob, parts


def _dominated(e: Expr, others) -> bool:
    # E ∩ F ⊂¹ E, so a summand meeting another summand adds nothing to the sum
    return isinstance(e, (Intersect, BigIntersect)) and any(o in e.children() for o in others)


def _prune(items: Sequence[Expr]) -> list[int]:
    """Indices of summands that can change the infimal convolution."""
    keep = []
    for i, e in enumerate(items):
        if e in items[:i]:
            continue
        if _dominated(e, [o for j, o in enumerate(items) if j != i and o != e]):
            continue
        keep.append(i)
    return keep


def _solve_sum(items: Sequence[Expr], a, space, tol, budget):
    """Infimal convolution of ``items`` at ``a >= 0``; returns (value, parts, converged)."""
    if not np.any(a):
        return 0.0, [np.zeros_like(a) for _ in items], True
    if any(isinstance(e, (Sum, BigSum)) for e in items):
        # nested sums flatten exactly; parts are gathered back per summand
        owner, flat = [], []
        for i, e in enumerate(items):
            kids = e.children() if isinstance(e, (Sum, BigSum)) else (e,)
            owner += [i] * len(kids)
            flat += kids
        val, fparts, ok = _solve_sum(flat, a, space, tol, budget)
        parts = [np.zeros_like(a) for _ in items]
        for i, v in zip(owner, fparts):
            parts[i] = parts[i] + v
        return val, parts, ok
    keep = _prune(items)
    if len(keep) < len(items):
        val, kept, ok = _solve_sum([items[i] for i in keep], a, space, tol, budget)
        parts = [np.zeros_like(a) for _ in items]
        for i, v in zip(keep, kept):
            parts[i] = v
        return val, parts, ok
    if len(items) == 1:
        return _evaluate(items[0], a, space, tol, budget), [a.copy()], True
    fast = _clipping_path(items, a, space)
    if fast is not None:
        return fast
    top = float(a.max())
    y = a / top
    prob, parts = _sum_program(tuple(items), space, y)
    status = _solve(prob, budget)
    if status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        bound = min(_evaluate(c, a, space, tol, budget) for c in items)
        raise ConvergenceError(f"sum-norm solver ended with status {status}", bound=bound)
    V = np.clip(np.array([u.value for u in parts]), 0.0, None)
    col = V.sum(axis=0)
    V = np.where(col > 0, V * (y / np.where(col > 0, col, 1.0)), 0.0)
    if col.min() == 0:  # give uncovered mass to the first item
        V[0] += np.where(col > 0, 0.0, y)
    V *= top
    value = top * float(prob.value)
    if all(_is_direct(c) for c in items):
        value = sum(_evaluate(c, v, space, tol, budget) for c, v in zip(items, V))
    return value, list(V), status == cp.OPTIMAL


def _is_direct(e):
    return not any(isinstance(n, (Sum, BigSum, Dual)) for n in e.walk())


def _is_lp(e, p):
    if isinstance(e, Lp):
        return e.p == p
    return isinstance(e, Sym) and isinstance(e.profile, LpProfile) and e.profile.p == p \
        and e.profile.domain is None


def _clipping_path(items, a, space):
    """Exact L1 + Linf: minimize ``sum mu (a - lam)_+ + lam`` over breakpoints."""
    if len(items) != 2:
        return None
    one_first = _is_lp(items[0], 1) and _is_lp(items[1], INF)
    if not (one_first or (_is_lp(items[0], INF) and _is_lp(items[1], 1))):
        return None
    w = space.weights
    cands = np.concatenate([[0.0], a])
    costs = [math.fsum(w * np.clip(a - lam, 0.0, None)) + lam for lam in cands]
    lam = float(cands[int(np.argmin(costs))])
    v1 = np.clip(a - lam, 0.0, None)
    v_inf = a - v1
    parts = [v1, v_inf] if one_first else [v_inf, v1]
    return float(min(costs)), parts, True


# --- duals -----------------------------------------------------------------

def _generic_dual(E, a, space, tol, budget):
    """Maximize the pairing with ``a >= 0`` over the unit ball of ``E``.

    Returns (certified lower bound, maximizer scaled to norm one, converged).
    """
    if not np.any(a):
        return 0.0, np.zeros_like(a), True
    top = float(a.max())
    g = a / top
    w = space.weights
    support = g > 0
    conic = _Conic(space)
    y = cp.Variable(space.n, nonneg=True)
    ball = conic.build(E, y)
    cons = conic.constraints + [ball <= 1]
    if not support.all():
        cons.append(y[~support] == 0)
    prob = cp.Problem(cp.Maximize((w * g) @ y), cons)
    status = _solve(prob, budget)
    if status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        raise ConvergenceError(f"dual solver ended with status {status}")
    yh = np.clip(np.asarray(y.value, dtype=float), 0.0, None)
    yh[~support] = 0.0
    upper = top * float(prob.value)
    nrm = _evaluate(E, yh, space, tol, budget)
    if nrm == 0:
        raise ConvergenceError("dual maximizer collapsed to zero", bound=0.0)
    lower = top * float(np.dot(w * g, yh)) / nrm
    converged = status == cp.OPTIMAL and abs(upper - lower) <= max(tol, 1e-7) * max(1.0, lower)
    return lower, yh / nrm, converged


# --- public API ------------------------------------------------------------

def _abs(x: FunctionVector):
    return np.abs(x.values)


def norm(E: Expr, x: FunctionVector, tol: float = DEFAULT_TOL,
         budget: int = DEFAULT_BUDGET) -> NormResult:
    """The norm of ``x`` in the space ``E``.

    Sums report their decomposition in ``witness``/``parts`` and duals their
    maximizer; every other node is evaluated in closed form or by bisection.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if x.is_zero():
        return NormResult(0.0, None, tol)
    if isinstance(E, Sum):
        return sum_norm(E.left, E.right, x, tol, budget)
    if isinstance(E, BigSum):
        return big_sum_norm(E.items, x, tol, budget)
    if isinstance(E, Dual):
        return dual_norm(E.inner, x, tol)
    return NormResult(_evaluate(E, _abs(x), x.space, tol, budget), None, tol)


def value(E: Expr, x: FunctionVector, tol: float = DEFAULT_TOL) -> float:
    return norm(E, x, tol).value


def intersect_norm(E: Expr, F: Expr, x: FunctionVector, tol: float = DEFAULT_TOL) -> NormResult:
    a, b = norm(E, x, tol), norm(F, x, tol)
    return NormResult(max(a.value, b.value), None, tol, a.converged and b.converged)


def big_intersect_norm(spaces: Sequence[Expr], x: FunctionVector,
                       tol: float = DEFAULT_TOL) -> NormResult:
    if not spaces:
        raise NormError("an intersection family must be nonempty")
    results = [norm(E, x, tol) for E in spaces]
    return NormResult(max(r.value for r in results), None, tol,
                      all(r.converged for r in results))


def _signed_parts(x, parts):
    s = np.sign(x.values)
    return tuple(FunctionVector(s * v, x.space) for v in parts)


def sum_norm(E: Expr, F: Expr, x: FunctionVector, tol: float = DEFAULT_TOL,
             budget: int = DEFAULT_BUDGET) -> NormResult:
    """``inf{||u||_E + ||x - u||_F}``; ``witness`` is the ``E`` part ``u``."""
    return big_sum_norm((E, F), x, tol, budget)


def big_sum_norm(spaces: Sequence[Expr], x: FunctionVector, tol: float = DEFAULT_TOL,
                 budget: int = DEFAULT_BUDGET) -> NormResult:
    if not spaces:
        raise NormError("a sum family must be nonempty")
    if x.is_zero():
        zero = FunctionVector(np.zeros(x.space.n), x.space)
        return NormResult(0.0, zero, tol, parts=(zero,) * len(spaces))
    val, parts, ok = _solve_sum(tuple(spaces), _abs(x), x.space, tol, budget)
    signed = _signed_parts(x, parts)
    return NormResult(val, signed[0], tol, ok, parts=signed)


def dual_norm(E: Expr, f: FunctionVector, tol: float = DEFAULT_TOL,
              method: str = "auto", budget: int = DEFAULT_BUDGET) -> NormResult:
    """Köthe dual norm ``sup{sum mu f x : ||x||_E <= 1}``.

    ``method="auto"`` rewrites the dual down to the leaves first (closed form
    for Lp, Amemiya formula for Orlicz, sum/intersection identities for
    composites); ``method="generic"`` maximizes the pairing over the unit
    ball directly and reports a certified lower bound.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = _abs(f)
    if not np.any(a):
        return NormResult(0.0, None, tol, lower_bound=0.0)
    if method == "generic":
        lower, y, ok = _generic_dual(E, a, f.space, tol, budget)
        wit = FunctionVector(np.sign(f.values) * y, f.space)
        return NormResult(lower, wit, tol, ok, lower_bound=lower)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    pushed = push_dual(E)
    if isinstance(pushed, (Sum, BigSum)):
        return big_sum_norm(pushed.children(), f, tol, budget)
    return NormResult(_dual_value(E, a, f.space, tol, budget), None, tol)


def bidual_gap(E: Expr, x: FunctionVector, tol: float = DEFAULT_TOL) -> float:
    """``||x||_E - ||x||_E''``, the bidual computed as a nested dual maximization."""
    if x.is_zero():
        return 0.0
    return norm(E, x, tol).value - dual_norm(Dual(E), x, tol, method="generic").value


def pairing(f: FunctionVector, x: FunctionVector) -> float:
    if f.space != x.space:
        raise MeasureError("measure-space mismatch in pairing")
    return f.pairing(x)
