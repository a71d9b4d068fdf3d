import numpy as np
import pytest
from hypothesis import given, strategies as st

from idealspace.expr import (INF, L1, L2, BigSum, Dual, Intersect, LInfty, Lp, Orlicz, Scale, Sum,
                             Sym)
from idealspace.measure import FunctionVector, MeasureError, indicator, make_space, vector
from idealspace.norms import (NormError, bidual_gap, big_intersect_norm, big_sum_norm, dual_norm,
                              intersect_norm, norm, push_dual, sum_norm)
from idealspace.oracles import clipping_grid, grid_sum_norm, sampled_dual
from idealspace.profiles import LorentzProfile, LpProfile, OrliczProfile

from conftest import closed_tree_st, space_and_vectors, tree_st

HALF = make_space([0.5, 0.5], "probability")
COUNT2 = make_space([1, 1], "counting")


def test_leaf_examples():
    assert norm(L2, vector([1, 1], HALF)).value == 1.0
    assert norm(LInfty, vector([2, -3], make_space([0.3, 4.0]))).value == 3.0
    v = norm(Orlicz("square"), vector([2, 0], HALF)).value
    assert v == pytest.approx(np.sqrt(0.5 * 4), abs=1e-6)


def test_intersect_examples():
    assert intersect_norm(L1, LInfty, vector([2, 0], COUNT2)).value == 2.0
    assert intersect_norm(L1, LInfty, vector([1, 1], COUNT2)).value == 2.0
    assert intersect_norm(L1, L2, vector([1, 1], HALF)).value == 1.0


def test_sum_examples():
    x = vector([2, 1], COUNT2)
    r = sum_norm(L1, LInfty, x)
    assert r.value == pytest.approx(2.0, abs=1e-3)
    # frozen from the dense clipping-level grid
    assert r.value == pytest.approx(clipping_grid(x.values, COUNT2.weights), abs=1e-4)
    assert sum_norm(L2, Lp(3), vector([0, 0], HALF)).value == 0.0
    y = vector([0.3, -1.2], make_space([0.7, 0.2]))
    assert sum_norm(Lp(3), Lp(3), y).value == pytest.approx(norm(Lp(3), y).value, rel=1e-6)


def test_sum_witness_decomposes():
    space = make_space([0.3, 0.9, 0.5])
    x = vector([1.0, -2.0, 0.5], space)
    r = sum_norm(L2, Lp(3), x)
    u, v = r.parts
    assert np.allclose(u.values + v.values, x.values)
    assert norm(L2, u).value + norm(Lp(3), v).value <= r.value + 1e-6


def test_sum_against_grid_oracle():
    space = make_space([0.7256, 0.5931])
    x = vector([-0.03355, 0.012265], space)
    for E, F in [(L1, Lp(3)), (Lp(1.5), Intersect(L1, Lp(3))), (L2, LInfty)]:
        a = sum_norm(E, F, x).value
        b = grid_sum_norm(E, F, x.values, space.weights)
        assert a == pytest.approx(b, rel=1e-6)


def test_sum_oracle_unrestricted_box_agrees():
    # sign-aligned restriction loses nothing against the wider box
    space = make_space([0.4, 0.8])
    a = np.array([1.0, 0.3])
    aligned = grid_sum_norm(L2, Lp(3), a, space.weights)
    wide = grid_sum_norm(L2, Lp(3), a, space.weights, sign_aligned=False)
    assert aligned == pytest.approx(wide, rel=1e-6)


def test_dual_examples():
    assert dual_norm(L2, vector([1, 1], HALF)).value == pytest.approx(1.0, abs=1e-12)
    f = vector([3, -1], COUNT2)
    assert dual_norm(L1, f).value == pytest.approx(3.0, abs=1e-6)
    assert dual_norm(L1, f, method="generic").value == pytest.approx(3.0, abs=1e-6)
    assert sampled_dual(L1, f) == pytest.approx(3.0, abs=1e-6)
    g = vector([1, 1], COUNT2)
    assert dual_norm(Dual(L1), g).value == pytest.approx(2.0, abs=1e-6)
    assert dual_norm(Dual(L1), g, method="generic").value == pytest.approx(2.0, abs=1e-6)


@pytest.mark.parametrize("weights,masses,kind,f,expected", [
    # subset enumeration: max over A of sum_A mu|f| / Phi(mu(A)), Phi the weight primitive
    (("3/2", 1, "1/2"), [0.2, 0.3, 0.5], "probability", [1, 2, 3], 7 / 3),
    ((2, 1, 0), [0.25, 0.25, 0.5], "probability", [3, -1, 2], 2.0),
    (("3/2", 1, "1/2"), [0.5, 1.0, 0.7, 0.3], "finite", [1, -2, 0.5, 4], 8 / 3),
])
def test_lorentz_dual_frozen(weights, masses, kind, f, expected):
    x = vector(f, make_space(masses, kind))
    E = Sym(LorentzProfile(weights))
    assert dual_norm(E, x).value == pytest.approx(expected, rel=1e-9)
    assert dual_norm(E, x, method="generic").value == pytest.approx(expected, rel=1e-9)


def test_exp_orlicz_dual_frozen():
    # Amemiya formula by scalar minimization, matched by unit-ball maximization
    x = vector([1, 2, 3], make_space([0.2, 0.3, 0.5], "probability"))
    assert dual_norm(Orlicz("exp"), x).value == pytest.approx(2.448115758587, rel=1e-9)
    assert dual_norm(Orlicz("exp"), x, method="generic").value == pytest.approx(2.448115758587,
                                                                               rel=1e-8)


def test_bidual_gap_examples():
    assert bidual_gap(L2, vector([1, 2], HALF)) == pytest.approx(0.0, abs=1e-5)
    assert bidual_gap(Lp(3), vector([0, 0], HALF)) == 0.0
    assert bidual_gap(L1, vector([1, 1], COUNT2)) == pytest.approx(0.0, abs=1e-5)


def test_big_nodes():
    chi = indicator(HALF, {0, 1})
    assert big_intersect_norm([L1, L2, LInfty], chi).value == 1.0
    x = vector([0.4, -2.0], HALF)
    assert big_intersect_norm([Lp(3)], x).value == norm(Lp(3), x).value
    assert big_sum_norm([L1, LInfty], vector([2, 1], COUNT2)).value == pytest.approx(2.0, abs=1e-3)
    assert norm(BigSum((L1, L2, LInfty)), x).value <= min(
        norm(E, x).value for E in (L1, L2, LInfty)) + 1e-6
    with pytest.raises(NormError):
        big_intersect_norm([], x)


def test_scale_node():
    x = vector([1, 3], HALF)
    assert norm(Scale(4, L2), x).value == pytest.approx(4 * norm(L2, x).value, rel=1e-15)


def test_push_dual_identities():
    assert push_dual(Dual(L1)) == L1
    assert push_dual(Intersect(L1, Lp(3))) == Sum(LInfty, Lp(1.5))
    assert push_dual(Sum(L2, LInfty)) == Intersect(L2, L1)


def test_errors():
    with pytest.raises(ValueError):
        norm(L2, vector([1, 1], HALF), tol=0)
    with pytest.raises(MeasureError):
        from idealspace.norms import pairing
        pairing(vector([1, 1], HALF), vector([1, 1], COUNT2))
    with pytest.raises(NormError):
        norm(Sym(LpProfile(2, domain=2.0)), vector([1, 1], HALF))


def test_norming_on_probability_spaces():
    space = make_space([0.2, 0.3, 0.5], "probability")
    chi = indicator(space, {0, 1, 2})
    for E in [Lp(1), Lp(1.5), Lp(2), Lp(3), LInfty, Sym(LpProfile(2)), Sym(OrliczProfile("cube")),
              Sym(OrliczProfile("exp")), Sym(LorentzProfile(("3/2", 1, "1/2")))]:
        assert norm(E, chi).value == pytest.approx(1.0, abs=1e-12)


@given(space_and_vectors(count=2), tree_st)
def test_monotone(data, E):
    space, (x, y) = data
    small = FunctionVector(np.minimum(np.abs(x.values), np.abs(y.values)), space)
    big = FunctionVector(np.maximum(np.abs(x.values), np.abs(y.values)), space)
    assert norm(E, small).value <= norm(E, big).value * (1 + 1e-6) + 1e-9


@given(space_and_vectors(count=2), tree_st, st.floats(-4, 4).filter(lambda c: abs(c) > 1e-2))
def test_homogeneous_and_subadditive(data, E, c):
    space, (x, y) = data
    nx = norm(E, x).value
    scaled = norm(E, FunctionVector(c * x.values, space)).value
    assert scaled == pytest.approx(abs(c) * nx, rel=1e-5, abs=1e-9)
    total = norm(E, FunctionVector(x.values + y.values, space)).value
    assert total <= nx + norm(E, y).value + 1e-6 * (1 + nx)


@given(space_and_vectors(count=1), closed_tree_st, closed_tree_st)
def test_sum_below_min_and_meet_above_max(data, E, F):
    _, (x,) = data
    a, b = norm(E, x).value, norm(F, x).value
    assert sum_norm(E, F, x).value <= min(a, b) + 1e-6 * (1 + min(a, b))
    assert intersect_norm(E, F, x).value == max(a, b)


@given(space_and_vectors(count=1), st.sampled_from([1, 1.25, 1.5, 2, 3, 4, INF]))
def test_dual_matches_conjugate(data, p):
    _, (x,) = data
    if x.is_zero():
        return
    q = Lp(p).p / (Lp(p).p - 1) if p not in (1, INF) else (INF if p == 1 else 1)
    assert dual_norm(Lp(p), x, method="generic").value == pytest.approx(norm(Lp(q), x).value,
                                                                        rel=1e-9)


@given(space_and_vectors(count=1), tree_st)
def test_bidual_never_exceeds(data, E):
    _, (x,) = data
    assert bidual_gap(E, x) >= -1e-5 * (1 + np.abs(x.values).max())


def test_zero_vector_short_circuits():
    z = vector([0, 0], HALF)
    for E in [L1, Sum(L2, Lp(3)), Dual(Intersect(L1, L2)), Orlicz("exp")]:
        assert norm(E, z).value == 0.0
        assert dual_norm(E, z).value == 0.0
