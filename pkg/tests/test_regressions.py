"""Frozen distributivity counterexamples found by the randomized suite.

The one-sided inequality ``(E+F)∩G ⊂¹ E+(F∩G)`` and the equality
``E+(F∩G) = (E+F)∩(E+G)`` both fail on these two-atom instances; the
conic solver and the brute-force grid over decompositions agree on every
norm involved, so the failures are not solver artifacts.
"""

import pytest

from idealspace.expr import INF, Intersect, Lp, Sum
from idealspace.lattice import check_distributivity
from idealspace.measure import make_space, vector
from idealspace.norms import norm
from idealspace.oracles import batch_norm

L1, L15, L2, L3, LI = Lp(1), Lp("3/2"), Lp(2), Lp(3), Lp(INF)

CASES = {
    # E = L1.5, F = L1, G = L3: E+(F∩G) against (E+F)∩(E+G)
    "join over meet": ([0.7256, 0.5931], [-0.03355, 0.012265],
                       Sum(L15, Intersect(L1, L3)), Intersect(Sum(L15, L1), Sum(L15, L3)),
                       0.0302628938980, 0.0299700675356),
    # E = cap(L1,L3), F = cap(Linf,L3), G = L1.5: E+(F∩G) against (E+F)∩G
    "inequality": ([0.70309, 0.60950], [0.692974, -1.359365],
                   Sum(Intersect(L1, L3), Intersect(Intersect(LI, L3), L15)),
                   Intersect(Sum(Intersect(L1, L3), Intersect(LI, L3)), L15),
                   1.26127979148, 1.23447707038),
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_counterexample_solver(name):
    masses, values, lhs, rhs, a, b = CASES[name]
    x = vector(values, make_space(masses))
    assert norm(lhs, x).value == pytest.approx(a, rel=1e-8)
    assert norm(rhs, x).value == pytest.approx(b, rel=1e-8)
    assert (a - b) / b > 1e-4


@pytest.mark.parametrize("name", sorted(CASES))
def test_counterexample_grid_oracle(name):
    masses, values, lhs, rhs, a, b = CASES[name]
    space = make_space(masses)
    ga = batch_norm(lhs, values, space.weights)[0]
    gb = batch_norm(rhs, values, space.weights)[0]
    assert ga == pytest.approx(a, rel=1e-6) and gb == pytest.approx(b, rel=1e-6)
    assert (ga - gb) / gb > 1e-4


def test_counterexample_four_atoms():
    E = Intersect(L2, L15)
    F, G = LI, Sum(L15, L2)
    space = make_space([0.786653033934, 0.400491433078, 0.297486940041, 0.54611992047])
    x = vector([0.682273151469, -0.507699011758, 1.65932804941, 0.828342189217], space)
    a = norm(Sum(E, Intersect(F, G)), x).value
    b = norm(Intersect(Sum(E, F), G), x).value
    assert a == pytest.approx(1.32414907972, rel=1e-8)
    assert b == pytest.approx(1.28966136667, rel=1e-8)


def test_law_check_reports_the_failure():
    E, F, G = L15, L1, L3
    space = make_space([0.7256, 0.5931])
    rep = check_distributivity(E, F, G, space, samples=40, seed=0)
    assert rep.verdict == "fail"
