import numpy as np
import pytest
from hypothesis import given, strategies as st

from idealspace.expr import L1, L2, ZERO, Dual, Intersect, LInfty, Lp, Orlicz, Sum, ZeroPart
from idealspace.generators import random_sym_term
from idealspace.norms import norm
from idealspace.symbolic import (LP_CATALOG, chain, check_closure, check_galois,
                                 check_rewrite_soundness, check_sublattice, fixed_points, k_map,
                                 koethe_dual, kprime_map, membership, order_leq, reduce,
                                 reduce_with_trace, zero_part)

FULL_CATALOG = LP_CATALOG + (L1, LInfty, Orlicz("exp"), Orlicz("square"))
lp_st = st.sampled_from(LP_CATALOG + (L1, LInfty))


def test_reduce_examples():
    assert reduce(Dual(Dual(Dual(Lp(2))))) == Lp(2)
    e = ZeroPart(ZeroPart(Orlicz("exp")))
    assert reduce(e) == ZeroPart(Orlicz("exp"))
    assert reduce(Dual(Intersect(L1, LInfty))) == Sum(LInfty, L1)


def test_reduce_trace_records_rules():
    out, steps = reduce_with_trace(Dual(Dual(Dual(Lp(2)))))
    assert out == Lp(2) and steps
    assert all(s.rule for s in steps)


def test_zero_rules():
    assert reduce(ZeroPart(LInfty)) == ZERO
    assert reduce(ZeroPart(Orlicz("square"))) == Orlicz("square")
    assert reduce(Intersect(ZERO, L2)) == ZERO
    assert reduce(Sum(ZERO, L2)) == L2


def test_zero_part_and_dual_examples():
    assert zero_part(L1) == L1
    assert koethe_dual(L1) == LInfty
    assert zero_part(koethe_dual(L1)) == ZERO


def test_order_examples():
    d = order_leq(LInfty, Lp(2))
    assert d.holds is True and d.steps
    d = order_leq(Lp(3), Dual(Dual(Lp(3))))
    assert d.holds is True
    d = order_leq(L1, LInfty)
    assert d.holds is False
    x = d.witness
    assert norm(LInfty, x).value > norm(L1, x).value


def test_order_chain_composes():
    a, b = order_leq(LInfty, Lp(3)), order_leq(Lp(3), Lp(2))
    c = chain(a, b)
    assert c.holds and c.left == LInfty and c.right == Lp(2)
    with pytest.raises(ValueError):
        chain(b, a)


def test_membership_examples():
    assert membership(L1).in_J0 is False
    f = membership(Lp(2))
    assert f.in_J0 and f.in_J00 and f.in_Jprime
    assert membership(LInfty).in_J00 is False
    z = membership(ZERO)
    assert not (z.in_J0 or z.in_J00 or z.in_Jprime)


def test_k_maps():
    assert k_map(Lp(3)) == Lp("1.5")
    assert kprime_map(Lp(3)) == Lp("1.5")
    assert kprime_map(L1) == ZERO
    for E in LP_CATALOG:
        # the maps stay among Lp leaves, though not inside the five listed exponents
        assert isinstance(k_map(E), Lp) and isinstance(kprime_map(E), Lp)
        assert kprime_map(k_map(E)) == E


def test_galois_and_four_inclusions():
    rep = check_galois()
    assert rep.passed, rep.details
    # L2 ⊂¹ L1.5, so k(L1.5) ⊂¹ k(L2)
    assert order_leq(Lp(2), Lp("1.5")).holds is True
    assert order_leq(k_map(Lp("1.5")), k_map(Lp(2))).holds is True


@pytest.mark.parametrize("op", ["zero", "bidual", "kk'", "k'k"])
def test_closure_operators(op):
    rep = check_closure(op)
    assert rep.passed, rep.details


def test_closure_aliases_and_errors():
    assert check_closure("zero_part_on_inverse_order").law == "closure[zero]"
    with pytest.raises(ValueError):
        check_closure("nope")


def test_fixed_points():
    assert reduce(Dual(Dual(Dual(Dual(L1))))) == reduce(Dual(Dual(L1)))
    fixed = set(fixed_points("bidual", FULL_CATALOG))
    jprime = {reduce(S) for S in FULL_CATALOG if membership(S).in_Jprime}
    assert fixed == jprime
    zero_fixed = set(fixed_points("zero", FULL_CATALOG))
    assert LInfty not in zero_fixed and Lp(2) in zero_fixed


def test_sublattice():
    assert check_sublattice("in_Jprime").passed
    assert check_sublattice("in_J00").verdict == "undetermined"
    with pytest.raises(ValueError):
        check_sublattice("in_J1")


def test_rewrite_soundness_small():
    rep = check_rewrite_soundness([Dual(Intersect(L1, Lp(3))), Dual(Sum(L2, LInfty)),
                                   Intersect(Lp(3), Lp(3))], samples=5)
    assert rep.passed and rep.instances > 0


@given(st.integers(0, 10 ** 6))
def test_reduce_idempotent(seed):
    t = random_sym_term(np.random.default_rng(seed), 5)
    once = reduce(t)
    assert reduce(once) == once


@given(lp_st, lp_st)
def test_dual_antitone(S, T):
    if order_leq(S, T, refute_numerically=False).holds:
        assert order_leq(Dual(T), Dual(S), refute_numerically=False).holds is True


@given(st.integers(0, 10 ** 6))
def test_order_reflexive(seed):
    t = reduce(random_sym_term(np.random.default_rng(seed), 3))
    assert order_leq(t, t, refute_numerically=False).holds is True
