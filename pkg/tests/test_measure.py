import math

import numpy as np
import pytest
from hypothesis import given

from idealspace.measure import (FunctionVector, MeasureError, StepFunction, distribution_function,
                                equimeasurable, indicator, make_space, probability_space,
                                rearrangement, vector)

from conftest import space_and_vectors


def test_make_space_valid_kinds():
    p = make_space([0.5, 0.5], "probability")
    c = make_space([1, 1, 1], "counting")
    assert p.n == 2 and p.total == 1.0
    assert c.n == 3 and c.kind == "counting"


@pytest.mark.parametrize("masses,kind", [
    ([0.5, -0.1], "probability"),
    ([0.0, 1.0], "finite"),
    ([0.5, 0.4], "probability"),
    ([1.0, 2.0], "counting"),
    ([], "finite"),
    ([1.0], "weird"),
])
def test_make_space_rejects(masses, kind):
    with pytest.raises(MeasureError):
        make_space(masses, kind)


def test_probability_space_sums_to_one():
    for n in range(1, 12):
        assert math.fsum(probability_space(n).masses) == 1.0


def test_indicator_examples():
    two = make_space([0.5, 0.5], "probability")
    three = make_space([1, 1, 1], "counting")
    assert list(indicator(two, {0, 1}).values) == [1, 1]
    assert list(indicator(two, set()).values) == [0, 0]
    assert list(indicator(three, {1}).values) == [0, 1, 0]
    with pytest.raises((MeasureError, IndexError)):
        indicator(three, {3})


def test_distribution_function_examples():
    c = make_space([1, 1, 1], "counting")
    x = vector([3, 1, 2], c)
    assert distribution_function(x, 1.5) == 2
    assert distribution_function(x, 3) == 0
    y = vector([2, 2], make_space([0.5, 0.5], "probability"))
    assert distribution_function(y, 1) == 1.0


def test_rearrangement_examples():
    c = make_space([1, 1, 1], "counting")
    r = rearrangement(vector([1, -3, 2], c))
    assert r.levels == (3.0, 2.0, 1.0)
    assert r.breakpoints == (0.0, 1.0, 2.0, 3.0)
    s = make_space([0.5, 0.25, 0.25], "probability")
    r = rearrangement(vector([1, 2, 2], s))
    assert r.levels == (2.0, 1.0)
    assert r.breakpoints == (0.0, 0.5, 1.0)
    r = rearrangement(indicator(s, {0, 1, 2}))
    assert r.levels == (1.0,) and r.total == 1.0


def test_equimeasurable_examples():
    c = make_space([1, 1], "counting")
    assert equimeasurable(vector([1, 2], c), vector([2, 1], c))
    assert equimeasurable(vector([1, 2], c), vector([-2, 1], c))
    assert not equimeasurable(vector([1, 2], c), vector([1, 1], c))
    with pytest.raises(MeasureError):
        equimeasurable(vector([1, 2], c), vector([1], make_space([1.0])))


def test_step_function_invariants_enforced():
    with pytest.raises(ValueError):
        StepFunction((0.0, 1.0, 2.0), (1.0, 2.0))
    with pytest.raises(ValueError):
        StepFunction((0.5, 1.0), (1.0,))
    with pytest.raises(ValueError):
        StepFunction((0.0, 1.0, 1.0), (2.0, 1.0))


def test_vector_length_must_match():
    with pytest.raises(MeasureError):
        vector([1, 2, 3], make_space([1, 1]))


@given(space_and_vectors(count=1))
def test_distribution_function_non_increasing(data):
    _, (x,) = data
    levels = sorted(set(np.abs(x.values)) | {-1.0, 0.0, 10.0})
    vals = [distribution_function(FunctionVector(np.abs(x.values), x.space), s) for s in levels]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


@given(space_and_vectors(count=1))
def test_rearrangement_conserves_mass(data):
    _, (x,) = data
    r = rearrangement(x)
    assert r.total == pytest.approx(x.space.total, abs=1e-12)
    assert r.integral() == pytest.approx(float(np.dot(x.space.weights, np.abs(x.values))),
                                         rel=1e-12, abs=1e-12)
    assert all(a >= b for a, b in zip(r.levels, r.levels[1:]))


@given(space_and_vectors(count=1))
def test_rearrangement_permutation_invariant(data):
    space, (x,) = data
    perm = np.random.default_rng(len(x.values)).permutation(space.n)
    moved = make_space([space.masses[i] for i in perm])
    y = FunctionVector(x.values[perm], moved)
    assert rearrangement(x) == rearrangement(y)
    assert rearrangement(x) == rearrangement(FunctionVector(-x.values, space))
