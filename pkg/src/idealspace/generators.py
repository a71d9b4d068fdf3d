"""Random instances for the law suites: spaces, Lp expression trees, symbolic terms."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .expr import INF, Dual, Expr, Intersect, Lp, Orlicz, Sum, ZeroPart
from .measure import FunctionVector, MeasureSpace, make_space

LP_EXPONENTS = (Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3), INF)
SYM_EXPONENTS = (Fraction(1), Fraction(5, 4), Fraction(3, 2), Fraction(2), Fraction(3),
                 Fraction(4), INF)


def random_space(rng: np.random.Generator, n_min: int = 2, n_max: int = 6,
                 kind: str = "finite") -> MeasureSpace:
    """Random positive masses (normalized to one for ``kind="probability"``)."""
    n = int(rng.integers(n_min, n_max + 1))
    if kind == "counting":
        return make_space([1.0] * n, "counting")
    masses = rng.uniform(0.1, 1.0, n)
    if kind == "probability":
        masses = masses / masses.sum()
        masses[-1] = 1.0 - sum(masses[:-1])
    return make_space(masses, kind)


def dyadic_probability(rng: np.random.Generator, blocks, denominator: int = 64) -> MeasureSpace:
    """A probability space refining the given dyadic ``blocks`` at random.

    Every mass is a multiple of ``1/denominator``, so partial sums are exact
    in floating point and block-constant functions on two such refinements
    have identical rearrangements.
    """
    masses = []
    for b in blocks:
        units = int(round(b * denominator))
        k = int(rng.integers(1, min(units, 3) + 1))
        cuts = np.sort(rng.choice(np.arange(1, units), size=k - 1, replace=False)) if k > 1 else []
        edges = [0, *cuts, units]
        masses += [(hi - lo) / denominator for lo, hi in zip(edges, edges[1:])]
    return make_space(masses, "probability")


def random_blocks(rng: np.random.Generator, k: int = 3, denominator: int = 64) -> list[float]:
    cuts = np.sort(rng.choice(np.arange(4, denominator - 3, 4), size=k - 1, replace=False))
    edges = [0, *cuts, denominator]
    return [(hi - lo) / denominator for lo, hi in zip(edges, edges[1:])]


def random_vector(rng: np.random.Generator, space: MeasureSpace, sparsity: float = 0.2) -> FunctionVector:
    """Signed random vector; some atoms are zeroed to exercise the support."""
    v = rng.normal(size=space.n) * rng.exponential(size=space.n)
    mask = rng.random(space.n) < sparsity
    if mask.all():
        mask[int(rng.integers(space.n))] = False
    v[mask] = 0.0
    if not np.any(v):
        v[0] = 1.0
    return FunctionVector(v, space)


def random_leaf(rng: np.random.Generator, exponents=LP_EXPONENTS) -> Lp:
    return Lp(exponents[int(rng.integers(len(exponents)))])


def random_tree(rng: np.random.Generator, depth: int = 3, exponents=LP_EXPONENTS,
                leaf_prob: float = 0.35) -> Expr:
    """Expression tree of depth at most ``depth`` over Lp leaves with cap/plus nodes."""
    if depth <= 1 or rng.random() < leaf_prob:
        return random_leaf(rng, exponents)
    node = Intersect if rng.random() < 0.5 else Sum
    return node(random_tree(rng, depth - 1, exponents, leaf_prob),
                random_tree(rng, depth - 1, exponents, leaf_prob))


def closed_form_tree(rng: np.random.Generator, depth: int = 2, exponents=LP_EXPONENTS) -> Expr:
    """Tree without sum nodes (intersections of Lp leaves)."""
    if depth <= 1 or rng.random() < 0.5:
        return random_leaf(rng, exponents)
    return Intersect(closed_form_tree(rng, depth - 1, exponents),
                     closed_form_tree(rng, depth - 1, exponents))


def chain_pair(rng: np.random.Generator, exponents=LP_EXPONENTS) -> tuple[Lp, Lp]:
    """``(Lp, Lr)`` with ``p >= r``, so the first is ⊂¹ the second on probability spaces."""
    i, j = sorted(rng.choice(len(exponents), size=2, replace=True))
    return Lp(exponents[j]), Lp(exponents[i])


def equivalent_rewrite(rng: np.random.Generator, e: Expr, other: Expr) -> Expr:
    """An expression isometric to ``e`` built with a random lattice identity."""
    k = int(rng.integers(6))
    if k == 0 and isinstance(e, (Intersect, Sum)):
        return type(e)(e.right, e.left)  # commutativity
    if k == 1:
        return Intersect(e, Sum(e, other))  # absorption
    if k == 2:
        return Sum(e, Intersect(e, other))  # absorption
    if k == 3:
        return Dual(Dual(e))  # finite-dimensional reflexivity
    if k == 4:
        return Intersect(e, e)
    return Sum(e, e)


def random_sym_term(rng: np.random.Generator, depth: int = 5) -> Expr:
    """Symbolic term over the catalog with dual, zero part, cap and plus."""
    if depth <= 1 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.8:
            return random_leaf(rng, SYM_EXPONENTS)
        return Orlicz(("exp", "square", "cube")[int(rng.integers(3))])
    r = rng.random()
    if r < 0.35:
        return Dual(random_sym_term(rng, depth - 1))
    if r < 0.55:
        return ZeroPart(random_sym_term(rng, depth - 1))
    node = Intersect if r < 0.8 else Sum
    return node(random_sym_term(rng, depth - 1), random_sym_term(rng, depth - 1))


def instantiable_sym_term(rng: np.random.Generator, depth: int = 4) -> Expr:
    """Like ``random_sym_term`` but without zero parts (so every node has a finite-atom norm)."""
    if depth <= 1 or rng.random() < 0.3:
        return random_leaf(rng, SYM_EXPONENTS)
    r = rng.random()
    if r < 0.4:
        return Dual(instantiable_sym_term(rng, depth - 1))
    node = Intersect if r < 0.7 else Sum
    return node(instantiable_sym_term(rng, depth - 1), instantiable_sym_term(rng, depth - 1))
