"""Brute-force reference evaluators, independent of the conic engine.

They are slow and only meant for tiny spaces (n <= 3): grid search with
zooming over decompositions for sum norms, a dense grid over the clipping
level for L1 + Linf, and random sampling of the unit ball for duals.
"""

from __future__ import annotations

import numpy as np

from .expr import (INF, BigIntersect, BigSum, Dual, Expr, Intersect, Lp, Orlicz, Scale, Sum,
                   Sym, conjugate_exponent)
from .measure import FunctionVector, make_space, rearrangement
from .orlicz import luxemburg_norm, young


def batch_norm(e: Expr, A: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Norms of the rows of ``A`` (sums by nested grid search).

    Leaves are evaluated directly: Lp in closed form, Orlicz by the
    Luxemburg bisection, profiles on the rearrangement.
    """
    A = np.abs(np.atleast_2d(A))
    if isinstance(e, Lp):
        if e.p == INF:
            return A.max(axis=1)
        p = float(e.p)
        return (A ** p @ w) ** (1.0 / p)
    if isinstance(e, Scale):
        return float(e.c) * batch_norm(e.inner, A, w)
    if isinstance(e, Orlicz):
        M = young(e.name).M
        return np.array([luxemburg_norm(M, a, w) for a in A])
    if isinstance(e, Sym):
        space = make_space(w)
        return np.array([e.profile(rearrangement(FunctionVector(a, space))) for a in A])
    if isinstance(e, (Intersect, BigIntersect)):
        return np.max([batch_norm(c, A, w) for c in e.children()], axis=0)
    if isinstance(e, Dual) and isinstance(e.inner, Lp):
        return batch_norm(Lp(conjugate_exponent(e.inner.p)), A, w)
    if isinstance(e, (Sum, BigSum)):
        items = e.children()
        left = items[0]
        right = items[1] if len(items) == 2 else BigSum(items[1:])
        return np.array([grid_sum_norm(left, right, a, w, k=7, rounds=12) for a in A])
    raise TypeError(f"the grid oracle does not evaluate {e}")


def grid_sum_norm(E: Expr, F: Expr, a: np.ndarray, w: np.ndarray, k: int = 9,
                  rounds: int = 14, sign_aligned: bool = True) -> float:
    """``min_u ||u||_E + ||a - u||_F`` by nested grid bracketing over ``u``.

    The partial minimum of a convex function over trailing coordinates is
    convex in the leading ones, and for a convex function of one variable
    the minimizer lies within one cell of the grid argmin.  Each coordinate
    is therefore bracketed by repeated ``k``-point grids (shrinking by
    ``2/(k-1)`` per round), with all inner minimizations vectorized.

    With ``sign_aligned`` the box is ``[0, a]``; otherwise every coordinate
    ranges over ``[-max a, 2 max a]``.
    """
    a = np.abs(np.asarray(a, dtype=float))
    top = a.max(initial=0.0)
    if top == 0:
        return 0.0
    n = a.size
    if sign_aligned:
        lo0, hi0 = np.zeros(n), a.copy()
    else:
        lo0, hi0 = np.full(n, -top), np.full(n, 2 * top)
    t = np.linspace(0.0, 1.0, k)

    def objective(U):
        return batch_norm(E, U, w) + batch_norm(F, a - U, w)

    def solve(P, d):
        if d == n:
            return objective(P)
        B = P.shape[0]
        lo, hi = np.full(B, lo0[d]), np.full(B, hi0[d])
        best = np.full(B, np.inf)
        rows = np.arange(B)
        for _ in range(rounds):
            grid = lo[:, None] + (hi - lo)[:, None] * t[None, :]
            Pk = np.hstack([np.repeat(P, k, axis=0), grid.reshape(-1, 1)])
            vals = solve(Pk, d + 1).reshape(B, k)
            i = np.argmin(vals, axis=1)
            best = np.minimum(best, vals[rows, i])
            step = (hi - lo) / (k - 1)
            c = grid[rows, i]
            lo, hi = np.maximum(lo0[d], c - step), np.minimum(hi0[d], c + step)
        return best

    return float(solve(np.zeros((1, 0)), 0)[0])


def clipping_grid(a: np.ndarray, w: np.ndarray, points: int = 200001) -> float:
    """``min over lam of sum mu (|a| - lam)_+ + lam`` on a dense grid of ``lam``."""
    a = np.abs(np.asarray(a, dtype=float))
    lam = np.linspace(0.0, a.max(initial=0.0), points)
    cost = np.clip(a[None, :] - lam[:, None], 0.0, None) @ w + lam
    return float(cost.min())


def sampled_dual(E: Expr, f: FunctionVector, samples: int = 20000, seed: int = 0) -> float:
    """Lower bound for the dual norm: best pairing over sampled unit vectors of ``E``."""
    rng = np.random.default_rng(seed)
    w = f.space.weights
    g = np.abs(f.values)
    n = g.size
    Y = np.vstack([np.eye(n), np.ones((1, n)), rng.dirichlet(np.ones(n) * 0.5, size=samples)])
    nrm = batch_norm(E, Y, w)
    return float(np.max((Y * w) @ g / nrm))
