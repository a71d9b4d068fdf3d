"""Randomized law suites, one runner per acceptance property.

Every runner takes a seed and instance counts and returns a list of
``LawReport``; identical arguments give identical reports.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .expr import INF, Dual, Intersect, Lp, Orlicz, Sum, ZeroPart, ZERO, conjugate_exponent
from .generators import (SYM_EXPONENTS, chain_pair, closed_form_tree,
                         dyadic_probability, equivalent_rewrite, instantiable_sym_term,
                         random_blocks, random_leaf, random_space, random_sym_term, random_tree,
                         random_vector)
from .lattice import (check_lattice_axioms, check_modularity, dedekind_demo, distributivity_parts,
                      lambda_proj, rho_proj, uniqueness_probe)
from .measure import FunctionVector
from .norms import ConvergenceError, bidual_gap, dual_norm, norm, sum_norm
from .oracles import batch_norm, grid_sum_norm
from .reports import LawReport, witness
from .symbolic import (CLOSURE_OPS, LP_CATALOG, check_closure, check_galois,
                       check_rewrite_soundness, check_sublattice, fixed_points, membership, reduce)
from .symmetric import (CATALOG_PROFILES, SymmetricSpace, check_inclusion_chain,
                        check_transfer_isomorphism, symmetric_norm)

DEFAULT_SEED = 20240


def _absorb(total: LawReport, part: LawReport) -> None:
    """Add the counts and worst witness of ``part`` to ``total`` (details dropped)."""
    total.instances += part.instances
    total.undetermined += part.undetermined
    if part.max_violation > total.max_violation or (part.max_violation == total.max_violation
                                                    and total.witness is None):
        total.max_violation = part.max_violation
        total.witness = part.witness


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


# --- lattice laws ----------------------------------------------------------

def run_axioms(seed: int = DEFAULT_SEED, triples: int = 200, samples: int = 3,
               tol: float = 1e-4) -> list[LawReport]:
    rng = np.random.default_rng(seed)
    rep = LawReport("lattice-axioms", tol, seed)
    for i in range(triples):
        space = random_space(rng, 2, 6)
        E, F, G = (random_tree(rng, 3) for _ in range(3))
        _absorb(rep, check_lattice_axioms(E, F, G, space, samples, tol, seed + i))
    rep.details.append(f"{triples} random triples of depth <= 3 on 2..6 atoms")
    return [rep]


def run_modularity(seed: int = DEFAULT_SEED, instances: int = 200, oracle_instances: int = 40,
                   tol: float = 1e-4, oracle_tol: float = 1e-3) -> list[LawReport]:
    """Modular law for ``E ⊂¹ F`` from the probability Lp chain, plus a grid oracle check."""
    rng = np.random.default_rng(seed)
    rep = LawReport("modularity", tol, seed)
    for i in range(instances):
        space = random_space(rng, 2, 6, "probability")
        E, F = chain_pair(rng)
        H = random_tree(rng, 2)
        _absorb(rep, check_modularity(E, F, H, space, 1, tol, seed + i))
    rep.details.append(f"{instances} instances, E ⊂¹ F from the probability chain")

    orc = LawReport("modularity-oracle", oracle_tol, seed)
    for _ in range(oracle_instances):
        space = random_space(rng, 2, 3, "probability")
        E, F = chain_pair(rng)
        H = closed_form_tree(rng, 2)
        x = random_vector(rng, space, sparsity=0.0)
        w = space.weights
        for side in (lambda_proj(E, F, H), rho_proj(E, F, H)):
            try:
                a = norm(side, x).value
            except ConvergenceError as err:
                orc.skip(f"solver: {err}")
                continue
            b = float(batch_norm(side, x.values[None, :], w)[0])
            orc.record(_rel(a, b), witness([side], x.values, space.masses, oracle=b, solver=a))
    orc.details.append("both modular sides against nested grid bracketing, n <= 3")
    return [rep, orc]


def run_distributivity(seed: int = DEFAULT_SEED, equalities: int = 200, inequalities: int = 1000,
                       tol: float = 1e-4) -> list[LawReport]:
    rng = np.random.default_rng(seed)
    eq = LawReport("distributivity", tol, seed)
    ineq = LawReport("distributive-inequality", tol, seed)
    for i in range(max(equalities, inequalities)):
        space = random_space(rng, 2, 6)
        E, F, G = (random_tree(rng, 2) for _ in range(3))
        which = [p for p, n in (("equalities", equalities), ("inequality", inequalities)) if i < n]
        parts = distributivity_parts(E, F, G, space, 1, tol, seed + i, which)
        if i < equalities:
            _absorb(eq, parts["equalities"])
        if i < inequalities:
            _absorb(ineq, parts["inequality"])
    eq.details.append(f"{equalities} instances of meet-over-join and join-over-meet")
    ineq.details.append(f"{inequalities} instances of (E+F)∩G ⊂¹ E+(F∩G)")
    return [eq, ineq]


def run_uniqueness(seed: int = DEFAULT_SEED, pairs: int = 500, samples: int = 3,
                   tol: float = 1e-4) -> list[LawReport]:
    """Cancellation search; half the pairs are isometric rewrites of each other."""
    rng = np.random.default_rng(seed)
    rep = LawReport("uniqueness", tol, seed)
    premises = 0
    for i in range(pairs):
        space = random_space(rng, 2, 6)
        E = random_tree(rng, 2)
        F = equivalent_rewrite(rng, E, random_tree(rng, 2)) if i % 2 == 0 else random_tree(rng, 2)
        G = random_tree(rng, 2)
        r = uniqueness_probe(E, F, G, space, samples, tol, seed + i)
        premises += any(d.startswith("premises hold") for d in r.details)
        _absorb(rep, r)
    rep.details.append(f"{pairs} pairs, premises held on {premises}")
    return [rep]


# --- duality ---------------------------------------------------------------

def _unit(x: FunctionVector) -> FunctionVector:
    return FunctionVector(x.values / np.abs(x.values).max(), x.space)


def run_duality(seed: int = DEFAULT_SEED, lp_instances: int = 100, koethe_instances: int = 60,
                bidual_instances: int = 60, lp_tol: float = 1e-9, koethe_tol: float = 1e-4,
                bidual_tol: float = 1e-5) -> list[LawReport]:
    rng = np.random.default_rng(seed)
    exps = SYM_EXPONENTS

    lp = LawReport("dual-lp", lp_tol, seed)
    for i in range(lp_instances):
        space = random_space(rng, 2, 6)
        p = exps[i % len(exps)]
        x = random_vector(rng, space)
        try:
            a = dual_norm(Lp(p), x, method="generic").value
        except ConvergenceError as err:
            lp.skip(f"solver: {err}")
            continue
        b = norm(Lp(conjugate_exponent(p)), x).value
        lp.record(_rel(a, b), witness([Lp(p)], x.values, space.masses))
    lp.details.append("unit-ball maximization against the conjugate exponent")

    ko = LawReport("koethe-identities", koethe_tol, seed)
    for _ in range(koethe_instances):
        space = random_space(rng, 2, 4)
        E, F = random_tree(rng, 2), random_tree(rng, 2)
        x = random_vector(rng, space)
        for lhs, rhs in ((Intersect(E, F), Sum(Dual(E), Dual(F))),
                         (Sum(E, F), Intersect(Dual(E), Dual(F)))):
            try:
                a = dual_norm(lhs, x, method="generic").value
                b = norm(rhs, x).value
            except ConvergenceError as err:
                ko.skip(f"solver: {err}")
                continue
            ko.record(_rel(a, b), witness([Dual(lhs), rhs], x.values, space.masses))
    ko.details.append("left side by unit-ball maximization, right side by dual pushing")

    leaves = LawReport("bidual-leaves", bidual_tol, seed)
    trees = LawReport("bidual-trees", bidual_tol, seed)
    for i in range(bidual_instances):
        space = random_space(rng, 2, 6)
        x = _unit(random_vector(rng, space))
        for rep, E in ((leaves, random_leaf(rng, exps)), (trees, random_tree(rng, 3))):
            try:
                g = bidual_gap(E, x)
            except ConvergenceError as err:
                rep.skip(f"solver: {err}")
                continue
            v = abs(g) if rep is leaves else max(0.0, -g)
            rep.record(v, witness([E], x.values, space.masses, gap=g))
    leaves.details.append("|gap| for Lp leaves, vectors scaled to sup norm 1")
    trees.details.append("negative part of the gap for random trees")
    return [lp, ko, leaves, trees]


def run_sum_oracle(seed: int = DEFAULT_SEED, instances: int = 100,
                   tol: float = 1e-3) -> list[LawReport]:
    rng = np.random.default_rng(seed)
    rep = LawReport("sum-vs-oracle", tol, seed)
    for _ in range(instances):
        space = random_space(rng, 2, 3)
        E, F = closed_form_tree(rng, 2), closed_form_tree(rng, 2)
        x = random_vector(rng, space, sparsity=0.0)
        try:
            a = sum_norm(E, F, x).value
        except ConvergenceError as err:
            rep.skip(f"solver: {err}")
            continue
        b = grid_sum_norm(E, F, x.values, space.weights)
        rep.record(_rel(a, b), witness([E, F], x.values, space.masses, oracle=b, solver=a))
    rep.details.append("solver against sign-aligned grid decompositions, n <= 3")
    return [rep]


# --- symbolic calculus -----------------------------------------------------

def run_galois(seed: int = DEFAULT_SEED) -> list[LawReport]:
    rep = check_galois(LP_CATALOG)
    rep.seed = seed
    return [rep]


def run_closure(seed: int = DEFAULT_SEED) -> list[LawReport]:
    out = []
    for op in CLOSURE_OPS:
        r = check_closure(op)
        r.seed = seed
        out.append(r)
    return out


def run_sublattice(seed: int = DEFAULT_SEED) -> list[LawReport]:
    out = [check_sublattice("in_J00"), check_sublattice("in_Jprime")]
    for r in out:
        r.seed = seed
    return out


def membership_examples() -> LawReport:
    rep = LawReport("membership-examples", 0.5)

    def expect(label, ok):
        rep.record(0.0 if ok else 1.0, {"check": label})
        rep.details.append(f"{label}: {'yes' if ok else 'no'}")

    expect("(Linf)0 = {0}", reduce(ZeroPart(Lp(INF))) == ZERO)
    expect("L1 not in J0", membership(Lp(1)).in_J0 is False)
    expect("L2 in J0, J00 and J'", all(getattr(membership(Lp(2)), f) is True
                                       for f in ("in_J0", "in_J00", "in_Jprime")))
    catalog = LP_CATALOG + (Lp(1), Lp(INF), Orlicz("exp"), Orlicz("square"))
    fixed = set(fixed_points("bidual", catalog))
    jprime = {reduce(S) for S in catalog if membership(S).in_Jprime is True}
    expect("fixed points of the bidual are the J' members", fixed == jprime)
    return rep


def run_symbolic(seed: int = DEFAULT_SEED, terms: int = 300, sound_terms: int = 120,
                 samples: int = 50) -> list[LawReport]:
    rng = np.random.default_rng(seed)
    idem = LawReport("reduce-idempotent", 0.0, seed)
    for _ in range(terms):
        t = random_sym_term(rng, 5)
        once = reduce(t)
        idem.record(0.0 if reduce(once) == once else 1.0, {"spaces": [str(t), str(once)]})
    idem.details.append(f"{terms} random terms of depth <= 5")
    pool = [instantiable_sym_term(rng, 4) for _ in range(sound_terms)]
    pool += [Dual(Dual(Dual(Lp(2)))), Dual(Intersect(Lp(1), Lp(INF))), Dual(Sum(Lp(1), Lp(3))),
             Intersect(Lp(3), Lp(3)), Sum(Lp("1.5"), Lp("1.5"))]
    sound = check_rewrite_soundness(pool, samples=samples, seed=seed)
    return [idem, sound, *run_galois(seed), *run_closure(seed), membership_examples()]


# --- symmetric spaces ------------------------------------------------------

def _equimeasurable_pair(rng, n_min=2, n_max=6):
    """A vector and an equimeasurable partner on a permuted, refined copy of its space."""
    blocks = random_blocks(rng, int(rng.integers(n_min, n_max + 1)))
    mu = dyadic_probability(rng, blocks)
    vals = rng.normal(size=len(blocks))
    # partner: permute the blocks, then refine each block at random
    perm = rng.permutation(len(blocks))
    nu = dyadic_probability(rng, [blocks[j] for j in perm])
    x = np.zeros(mu.n)
    y = np.zeros(nu.n)
    cm, cn = np.cumsum(mu.masses), np.cumsum(nu.masses)
    edges_m = np.cumsum(blocks)
    edges_n = np.cumsum([blocks[j] for j in perm])
    for i, t in enumerate(cm):
        x[i] = vals[int(np.searchsorted(edges_m, t - 1e-12))]
    for i, t in enumerate(cn):
        y[i] = vals[perm[int(np.searchsorted(edges_n, t - 1e-12))]]
    return FunctionVector(x, mu), FunctionVector(y, nu)


def run_equimeasurable(seed: int = DEFAULT_SEED, pairs: int = 100) -> list[LawReport]:
    rng = np.random.default_rng(seed)
    rep = LawReport("equimeasurable-invariance", 0.0, seed)
    for _ in range(pairs):
        x, y = _equimeasurable_pair(rng)
        for pr in CATALOG_PROFILES:
            a = symmetric_norm(SymmetricSpace(pr, x.space), x).value
            b = symmetric_norm(SymmetricSpace(pr, y.space), y).value
            rep.record(abs(a - b), witness([pr], x.values, x.space.masses,
                                           partner=[float(v) for v in y.values]))
    rep.details.append("exact equality across permuted and refined dyadic spaces")
    return [rep]


def run_transfer(seed: int = DEFAULT_SEED, pairs: int = 50, samples: int = 4,
                 tol: float = 1e-4, inclusion_tol: float = 1e-3) -> list[LawReport]:
    rng = np.random.default_rng(seed)
    rep = LawReport("transfer", tol, seed)
    raw: dict = {}
    for i in range(pairs):
        blocks = random_blocks(rng, int(rng.integers(2, 5)))
        mu, nu = dyadic_probability(rng, blocks), dyadic_probability(rng, blocks)
        pe, pf = (CATALOG_PROFILES[j] for j in rng.choice(len(CATALOG_PROFILES), 2))
        r = check_transfer_isomorphism(SymmetricSpace(pe, mu), SymmetricSpace(pf, mu), nu,
                                       samples, tol, seed + i, inclusion_tol)
        for k, v in r.details[-1].items():
            raw[k] = max(raw.get(k, 0.0), v)
        _absorb(rep, r)
    rep.details.append({k: float(v) for k, v in raw.items()})
    return [rep]


def run_chain(seed: int = DEFAULT_SEED, spaces: int = 5, samples: int = 32,
              tol: float = 1e-6) -> list[LawReport]:
    rng = np.random.default_rng(seed)
    rep = LawReport("chain", tol, seed)
    worst: dict = {}
    for i in range(spaces):
        space = random_space(rng, 2, 6, "probability")
        for pr in CATALOG_PROFILES:
            r = check_inclusion_chain(SymmetricSpace(pr, space), samples, tol, seed + i)
            d = r.details[-1]
            if isinstance(d, dict):
                c = max(d["lower_constant"], d["upper_constant"])
                worst[str(pr)] = max(worst.get(str(pr), 0.0), c)
            else:
                rep.details.append(d)
            _absorb(rep, r)
    rep.details.append({k: float(v) for k, v in worst.items()})
    return [rep]


def run_symmetric(seed: int = DEFAULT_SEED, pairs: int = 50) -> list[LawReport]:
    return [*run_equimeasurable(seed), *run_transfer(seed, pairs), *run_chain(seed)]


def run_dedekind(seed: int = DEFAULT_SEED, n_max: int = 1000,
                 lower_bounds: int = 100) -> list[LawReport]:
    out = dedekind_demo(n_max=n_max, lower_bounds=lower_bounds, seed=seed)
    return [out["chain"], out["glb"], out["norming"]]


# law names accepted by the command line ``check`` subcommand
LAWS: dict[str, Callable[..., list]] = {
    "axioms": run_axioms,
    "modularity": run_modularity,
    "distributivity": run_distributivity,
    "uniqueness": run_uniqueness,
    "duality": run_duality,
    "sum-oracle": run_sum_oracle,
    "symbolic": run_symbolic,
    "galois": run_galois,
    "closure": run_closure,
    "sublattice": run_sublattice,
    "equimeasurable": run_equimeasurable,
    "chain": run_chain,
    "transfer": run_transfer,
    "symmetric": run_symmetric,
    "dedekind": run_dedekind,
}

# acceptance property number -> (title, runner)
CRITERIA: dict[int, tuple[str, Callable[..., list]]] = {
    1: ("lattice axioms", run_axioms),
    2: ("modularity", run_modularity),
    3: ("distributivity", run_distributivity),
    4: ("uniqueness", run_uniqueness),
    5: ("duality engine", run_duality),
    6: ("sum solver vs brute force", run_sum_oracle),
    7: ("symbolic calculus", run_symbolic),
    8: ("symmetric spaces and transfer", run_symmetric),
    9: ("Dedekind completeness", run_dedekind),
}


def run_law(name: str, seed: int = DEFAULT_SEED, **counts) -> list[LawReport]:
    if name not in LAWS:
        raise KeyError(f"unknown law {name!r}; choose from {sorted(LAWS)}")
    return LAWS[name](seed=seed, **counts)
