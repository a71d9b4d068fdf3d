import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from idealspace.expr import INF, Intersect, Lp, Sum
from idealspace.measure import FunctionVector, make_space

settings.register_profile(
    "default", deadline=None, derandomize=True, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

EXPONENTS = [1, 1.5, 2, 3, INF]

masses_st = st.lists(st.floats(0.1, 1.0), min_size=2, max_size=5)
leaf_st = st.sampled_from(EXPONENTS).map(Lp)
tree_st = st.recursive(leaf_st, lambda kids: st.builds(Intersect, kids, kids)
                       | st.builds(Sum, kids, kids), max_leaves=3)
closed_tree_st = st.recursive(leaf_st, lambda kids: st.builds(Intersect, kids, kids), max_leaves=3)


@st.composite
def space_and_vectors(draw, count=1, kind="finite"):
    masses = draw(masses_st)
    if kind == "probability":
        masses = [m / sum(masses) for m in masses]
        masses[-1] = 1.0 - sum(masses[:-1])
    space = make_space(masses, kind)
    vals = st.lists(st.floats(-5, 5, allow_nan=False).filter(lambda v: v == 0 or abs(v) > 1e-3),
                    min_size=space.n, max_size=space.n)
    vecs = [FunctionVector(np.array(draw(vals)), space) for _ in range(count)]
    return space, vecs


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_lines():
    return ACCEPTANCE_LINES
