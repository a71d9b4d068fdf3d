import numpy as np
import pytest
from hypothesis import given, strategies as st

from idealspace.expr import INF, L1, L2, Intersect, LInfty, Lp, Sum
from idealspace.lattice import (FAILS, HOLDS, check_distributivity, check_lattice_axioms,
                                check_modularity, dedekind_demo, inclusion_constant, join,
                                lambda_proj, meet, rho_proj, uniqueness_probe)
from idealspace.measure import FunctionVector, make_space, vector
from idealspace.norms import norm
from idealspace.oracles import batch_norm

from conftest import closed_tree_st, leaf_st

HALF = make_space([0.5, 0.5], "probability")
COUNT2 = make_space([1, 1], "counting")
PROB4 = make_space([0.1, 0.2, 0.3, 0.4], "probability")


def test_constructors():
    assert meet(L1, LInfty) == Intersect(L1, LInfty)
    assert join(L1, L2) == Sum(L1, L2)


def test_inclusion_constant_examples():
    v = inclusion_constant(LInfty, L1, HALF)
    assert v.relation == HOLDS and v.constant_estimate == pytest.approx(1.0, abs=1e-12)
    v = inclusion_constant(L2, L2, PROB4)
    assert v.relation == HOLDS and v.constant_estimate == 1.0
    v = inclusion_constant(L1, L2, COUNT2)
    assert v.relation == HOLDS and v.constant_estimate == pytest.approx(1.0, abs=1e-9)
    assert np.count_nonzero(v.witness.values) == 1


def test_inclusion_refutation_reproduces():
    v = inclusion_constant(L1, LInfty, HALF)
    assert v.relation == FAILS and v.constant_estimate == pytest.approx(2.0, rel=1e-6)
    x = v.witness
    assert norm(LInfty, x).value / norm(L1, x).value == pytest.approx(v.constant_estimate)


def test_inclusion_rejects_zero_samples():
    with pytest.raises(ValueError):
        inclusion_constant(L1, L2, HALF, samples=0)


def test_join_idempotent_and_absorption():
    rng = np.random.default_rng(1)
    for _ in range(5):
        x = FunctionVector(rng.normal(size=4), PROB4)
        for E in (L1, Lp(3), Intersect(L2, LInfty)):
            assert norm(join(E, E), x).value == pytest.approx(norm(E, x).value, rel=1e-6)
            assert norm(meet(E, join(E, L2)), x).value == pytest.approx(norm(E, x).value, rel=1e-6)


def test_absorption_example_value():
    x = vector([2, 1], COUNT2)
    lhs = norm(Sum(L1, Intersect(L1, LInfty)), x).value
    assert lhs == pytest.approx(3.0, abs=1e-4)
    assert norm(L1, x).value == 3.0


def test_lattice_axioms_examples():
    rep = check_lattice_axioms(L1, L2, LInfty, PROB4, samples=4, seed=3)
    assert rep.passed and rep.max_violation <= 1e-4
    rep = check_lattice_axioms(L2, L2, L2, PROB4, samples=3)
    assert rep.passed and rep.max_violation == 0.0


def test_projections_examples():
    rng = np.random.default_rng(2)
    xs = [FunctionVector(rng.normal(size=4), PROB4) for _ in range(20)]
    E, F, H = LInfty, L1, L2
    for x in xs:
        lam, rho = norm(lambda_proj(E, F, H), x).value, norm(rho_proj(E, F, H), x).value
        assert lam == pytest.approx(rho, rel=1e-4)
        assert norm(lambda_proj(E, F, E), x).value == pytest.approx(norm(E, x).value, rel=1e-5)
        assert lam == pytest.approx(norm(H, x).value, rel=1e-5)


@pytest.mark.parametrize("proj", [lambda_proj, rho_proj])
def test_projection_range(proj):
    # outputs sit between the endpoints
    E, F = LInfty, L1
    for H in (Lp(1.5), Lp(3), Sum(L2, Lp(3)), Intersect(L1, Lp(1.5))):
        P = proj(E, F, H)
        assert inclusion_constant(E, P, PROB4, samples=6, ascent=False).constant_estimate <= 1 + 1e-4
        assert inclusion_constant(P, F, PROB4, samples=6, ascent=False).constant_estimate <= 1 + 1e-4


def test_modularity_examples():
    rep = check_modularity(LInfty, L1, L2, PROB4, samples=20, seed=5)
    assert rep.passed
    rep = check_modularity(LInfty, L1, LInfty, PROB4, samples=5)
    assert rep.passed


def test_modularity_grid_oracle_counting():
    E, F, H = Intersect(L1, LInfty), Sum(L1, LInfty), L2
    x = vector([1, 1], COUNT2)
    lhs = norm(Sum(Intersect(H, F), E), x).value
    rhs = norm(Intersect(Sum(H, E), F), x).value
    assert lhs == pytest.approx(rhs, abs=1e-3)
    # every sum node by brute force over decompositions
    w = COUNT2.weights
    assert batch_norm(Sum(Intersect(H, F), E), x.values, w)[0] == pytest.approx(lhs, abs=1e-3)
    assert batch_norm(Intersect(Sum(H, E), F), x.values, w)[0] == pytest.approx(rhs, abs=1e-3)


def test_distributivity_examples():
    rep = check_distributivity(L1, L2, LInfty, PROB4, samples=10, seed=4)
    assert rep.passed
    rep = check_distributivity(L2, L2, L2, PROB4, samples=3)
    assert rep.max_violation <= 1e-6


def test_uniqueness_examples():
    rep = uniqueness_probe(L1, L1, L2, PROB4)
    assert rep.passed and rep.max_violation == 0.0
    rep = uniqueness_probe(L1, LInfty, L2, COUNT2)
    assert rep.passed and "premise fails" in rep.details[-1]
    with pytest.raises(ValueError):
        uniqueness_probe(L1, L2, L2, COUNT2, mode="third")


def test_dedekind_small():
    out = dedekind_demo(n_max=10, lower_bounds=5)
    assert all(r.passed for r in out.values())
    assert out["chain"].instances == 10


@given(leaf_st, leaf_st, st.integers(0, 50))
def test_order_witness_sound(E, F, seed):
    v = inclusion_constant(E, F, PROB4, samples=4, seed=seed, ascent=False)
    if v.relation == FAILS:
        x = v.witness
        assert norm(F, x).value > norm(E, x).value


@given(closed_tree_st, closed_tree_st, st.integers(0, 1000))
def test_law_checks_deterministic(E, F, seed):
    a = check_lattice_axioms(E, F, L2, HALF, samples=2, seed=seed)
    b = check_lattice_axioms(E, F, L2, HALF, samples=2, seed=seed)
    assert a.as_record() == b.as_record()


@given(st.sampled_from([(INF, 3), (INF, 1), (3, 1.5), (2, 1)]), leaf_st, st.integers(0, 100))
def test_modular_law_closed_form_leaves(pair, H, seed):
    E, F = Lp(pair[0]), Lp(pair[1])
    rep = check_modularity(E, F, H, PROB4, samples=2, seed=seed, tol=2e-6)
    assert rep.passed, rep.witness
