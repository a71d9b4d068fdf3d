import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from idealspace.expr import INF
from idealspace.measure import MeasureError, FunctionVector, indicator, make_space, vector
from idealspace.profiles import LorentzProfile, LpProfile
from idealspace.symmetric import (CATALOG_PROFILES, SymmetricSpace, block_inclusion_constant,
                                  check_inclusion_chain, check_transfer_isomorphism,
                                  common_blocks, mekler_transfer, norming_value, symmetric_norm)

HALF = make_space([0.5, 0.5], "probability")
QUARTERS = make_space([0.25] * 4, "probability")


def test_norm_examples():
    S2 = SymmetricSpace(LpProfile(2), HALF)
    assert symmetric_norm(S2, vector([1, 1], HALF)).value == 1.0
    assert symmetric_norm(S2, vector([2, 1], HALF)).value == \
        symmetric_norm(S2, vector([1, 2], HALF)).value
    S1 = SymmetricSpace(LpProfile(1), HALF)
    assert symmetric_norm(S1, vector([2, 1], HALF)).value == pytest.approx(1.5, abs=1e-15)


def test_transfer_examples():
    S = SymmetricSpace(LpProfile(2), HALF)
    T = mekler_transfer(S, QUARTERS)
    assert symmetric_norm(S, indicator(HALF, {0})).value == pytest.approx(math.sqrt(0.5))
    assert symmetric_norm(T, indicator(QUARTERS, {1, 3})).value == pytest.approx(math.sqrt(0.5))
    assert symmetric_norm(T, indicator(QUARTERS, range(4))).value == 1.0
    back = mekler_transfer(T, HALF)
    assert back == S


def test_errors():
    S = SymmetricSpace(LpProfile(2), HALF)
    with pytest.raises(MeasureError):
        mekler_transfer(S, make_space([1, 1]))
    with pytest.raises(MeasureError):
        symmetric_norm(S, vector([1, 1, 1, 1], QUARTERS))
    with pytest.raises(MeasureError):
        SymmetricSpace(LpProfile(2, domain=2.0), HALF)
    with pytest.raises(TypeError):
        SymmetricSpace("L2", HALF)


def test_common_blocks():
    mu = make_space([0.5, 0.25, 0.25], "probability")
    nu = make_space([0.25, 0.25, 0.5], "probability")
    bm, bn = common_blocks(mu, nu)
    assert [sum(mu.masses[i] for i in b) for b in bm] == [sum(nu.masses[i] for i in b) for b in bn]
    assert sorted(i for b in bm for i in b) == [0, 1, 2]


def test_transfer_isomorphism_examples():
    E = SymmetricSpace(LpProfile(1), HALF)
    F = SymmetricSpace(LpProfile(2), HALF)
    rep = check_transfer_isomorphism(E, F, QUARTERS, samples=4)
    assert rep.passed
    raw = rep.details[-1]
    assert raw["norm"] == 0.0 and raw["inclusion"] <= 1e-3
    rep = check_transfer_isomorphism(E, E, QUARTERS, samples=2)
    assert rep.passed


def test_block_inclusion_constant_matches_transfer():
    mu = make_space([0.125, 0.375, 0.5], "probability")
    nu = make_space([0.5, 0.125, 0.125, 0.25], "probability")
    E, F = SymmetricSpace(LpProfile(INF), mu), SymmetricSpace(LpProfile(2), mu)
    bm, bn = common_blocks(mu, nu)
    a = block_inclusion_constant(E, F, bm)
    b = block_inclusion_constant(mekler_transfer(E, nu), mekler_transfer(F, nu), bn)
    assert a == pytest.approx(1.0, abs=1e-9) and b == pytest.approx(a, abs=1e-3)


@pytest.mark.parametrize("profile", CATALOG_PROFILES, ids=str)
def test_chain_on_probability(profile):
    space = make_space([0.1, 0.2, 0.3, 0.4], "probability")
    rep = check_inclusion_chain(SymmetricSpace(profile, space), samples=8)
    assert rep.passed
    assert rep.details[-1]["lower_constant"] <= 1 + 1e-6
    assert rep.details[-1]["upper_constant"] <= 1 + 1e-6


def test_chain_precondition_reported():
    space = make_space([1.0, 2.0, 1.0])
    rep = check_inclusion_chain(SymmetricSpace(LorentzProfile(("3/2", 1, "1/2")), space))
    assert rep.verdict == "undetermined"
    assert "norming condition" in rep.details[0]


@pytest.mark.parametrize("profile", CATALOG_PROFILES, ids=str)
def test_norming(profile):
    assert norming_value(profile, 1.0) == pytest.approx(1.0, abs=1e-12)


profile_st = st.sampled_from(CATALOG_PROFILES)
mass_st = st.lists(st.integers(1, 8), min_size=2, max_size=5)


@given(profile_st, mass_st, st.randoms(use_true_random=False))
def test_equimeasurable_exact(profile, counts, rnd):
    masses = [c / 16 for c in counts]
    perm = list(range(len(masses)))
    rnd.shuffle(perm)
    mu = make_space(masses)
    nu = make_space([masses[i] for i in perm])
    vals = [rnd.uniform(-3, 3) for _ in masses]
    x = vector(vals, mu)
    y = vector([vals[i] for i in perm], nu)
    S = SymmetricSpace(profile, mu)
    assert symmetric_norm(S, x).value == symmetric_norm(mekler_transfer(S, nu), y).value


@given(profile_st, st.lists(st.floats(-4, 4), min_size=3, max_size=3),
       st.lists(st.floats(-4, 4), min_size=3, max_size=3), st.floats(-3, 3))
def test_monotone_norm_axioms(profile, a, b, c):
    space = make_space([0.2, 0.3, 0.5], "probability")
    S = SymmetricSpace(profile, space)
    x, y = FunctionVector(np.array(a), space), FunctionVector(np.array(b), space)
    nx, ny = symmetric_norm(S, x).value, symmetric_norm(S, y).value
    assert symmetric_norm(S, x + y).value <= nx + ny + 1e-9 * (1 + nx + ny)
    assert symmetric_norm(S, x * c).value == pytest.approx(abs(c) * nx, rel=1e-9, abs=1e-12)
    lo = FunctionVector(np.minimum(np.abs(x.values), np.abs(y.values)), space)
    assert symmetric_norm(S, lo).value <= min(nx, ny) + 1e-9 * (1 + nx)
