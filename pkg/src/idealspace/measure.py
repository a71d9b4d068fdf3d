"""Finite atomic measure spaces, function vectors and rearrangements."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

KINDS = ("probability", "finite", "counting")


class MeasureError(ValueError):
    pass


@dataclass(frozen=True)
class MeasureSpace:
    """A finite set of atoms with positive masses.

    ``kind`` is a tag: ``"probability"`` requires the masses to sum to one,
    ``"counting"`` requires every mass to be one, ``"finite"`` only positivity.
    """

    masses: tuple[float, ...]
    kind: str = "finite"

    def __post_init__(self):
        masses = tuple(float(m) for m in self.masses)
        object.__setattr__(self, "masses", masses)
        if not masses:
            raise MeasureError("a measure space needs at least one atom")
        if self.kind not in KINDS:
            raise MeasureError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        bad = [m for m in masses if not (m > 0 and math.isfinite(m))]
        if bad:
            raise MeasureError(f"atom masses must be positive and finite, got {bad}")
        if self.kind == "probability" and abs(math.fsum(masses) - 1.0) > 1e-12:
            raise MeasureError(f"probability masses sum to {math.fsum(masses)!r}, not 1")
        if self.kind == "counting" and any(m != 1.0 for m in masses):
            raise MeasureError("counting measure requires every mass to equal 1")

    @property
    def n(self) -> int:
        return len(self.masses)

    @property
    def total(self) -> float:
        return math.fsum(self.masses)

    @property
    def weights(self) -> np.ndarray:
        w = np.array(self.masses, dtype=float)
        w.setflags(write=False)
        return w

    def __str__(self):
        return f"{self.kind}[{', '.join(repr(m) for m in self.masses)}]"


def make_space(masses: Iterable[float], kind: str = "finite") -> MeasureSpace:
    return MeasureSpace(tuple(masses), kind)


def probability_space(n: int) -> MeasureSpace:
    """Uniform probability measure on ``n`` atoms."""
    # 1/n does not always add up to exactly one in floating point
    masses = [1.0 / n] * n
    masses[-1] = 1.0 - math.fsum(masses[:-1])
    return MeasureSpace(tuple(masses), "probability")


def counting_space(n: int) -> MeasureSpace:
    return MeasureSpace((1.0,) * n, "counting")


@dataclass(frozen=True, eq=False)
class FunctionVector:
    """One real value per atom of ``space``. Immutable."""

    values: np.ndarray
    space: MeasureSpace

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.shape[0] != self.space.n:
            raise MeasureError(
                f"vector has {values.shape[0]} values but the space has {self.space.n} atoms")
        if not np.all(np.isfinite(values)):
            raise MeasureError("vector values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.shape[0]

    def __abs__(self):
        return FunctionVector(np.abs(self.values), self.space)

    def __neg__(self):
        return FunctionVector(-self.values, self.space)

    def __add__(self, other):
        _same_space(self, other)
        return FunctionVector(self.values + other.values, self.space)

    def __sub__(self, other):
        _same_space(self, other)
        return FunctionVector(self.values - other.values, self.space)

    def __mul__(self, c):
        return FunctionVector(float(c) * self.values, self.space)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FunctionVector):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.space, self.values.tobytes()))

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def pairing(self, other: "FunctionVector") -> float:
        """The integral of the product, ``sum_i mu_i x_i y_i``."""
        _same_space(self, other)
        return float(np.dot(self.space.weights, self.values * other.values))

    def __repr__(self):
        return f"FunctionVector({self.values.tolist()}, {self.space})"


def _same_space(x, y):
    if x.space != y.space:
        raise MeasureError(f"measure-space mismatch: {x.space} vs {y.space}")


def vector(values: Sequence[float], space: MeasureSpace) -> FunctionVector:
    return FunctionVector(np.asarray(values, dtype=float), space)


def indicator(space: MeasureSpace, atoms: Iterable[int]) -> FunctionVector:
    values = np.zeros(space.n)
    for i in atoms:
        if not 0 <= i < space.n:
            raise MeasureError(f"atom index {i} out of range for {space.n} atoms")
        values[i] = 1.0
    return FunctionVector(values, space)


def distribution_function(x: FunctionVector, s: float) -> float:
    """Measure of the set where ``x > s``."""
    return math.fsum(m for m, v in zip(x.space.masses, x.values) if v > s)


@dataclass(frozen=True)
class StepFunction:
    """A non-increasing step function on ``[0, breakpoints[-1])``.

    ``levels[k]`` is the value on ``[breakpoints[k], breakpoints[k+1])``.
    """

    breakpoints: tuple[float, ...]
    levels: tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(t) for t in self.breakpoints)
        lv = tuple(float(v) for v in self.levels)
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "levels", lv)
        if len(b) != len(lv) + 1 or b[0] != 0.0:
            raise ValueError("breakpoints must start at 0 and have one more entry than levels")
        if any(t1 <= t0 for t0, t1 in zip(b, b[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(v < 0 for v in lv) or any(v1 > v0 for v0, v1 in zip(lv, lv[1:])):
            raise ValueError("levels must be nonnegative and non-increasing")

    @property
    def total(self) -> float:
        return self.breakpoints[-1]

    @property
    def widths(self) -> np.ndarray:
        return np.diff(np.array(self.breakpoints))

    def __call__(self, t: float) -> float:
        if t < 0 or t >= self.total:
            return 0.0
        k = int(np.searchsorted(self.breakpoints, t, side="right")) - 1
        return self.levels[k]

    def integral(self, fn=None) -> float:
        """``int_0^T fn(x*(t)) dt`` for a vectorized ``fn`` (identity by default)."""
        lv = np.array(self.levels)
        vals = lv if fn is None else fn(lv)
        return math.fsum(self.widths * vals)

    def partial_integral(self, t: float) -> float:
        """``int_0^t x*(s) ds``."""
        acc = []
        for a, b, v in zip(self.breakpoints, self.breakpoints[1:], self.levels):
            if a >= t:
                break
            acc.append((min(b, t) - a) * v)
        return math.fsum(acc)


def rearrangement(x: FunctionVector) -> StepFunction:
    """Non-increasing rearrangement of ``|x|`` as a step function.

    Equal levels are merged; interval endpoints are correctly rounded sums of
    the atom masses, so equimeasurable inputs give identical step functions.
    """
    a = np.abs(x.values)
    masses = np.array(x.space.masses)
    order = np.argsort(-a, kind="stable")
    levels, groups = [], []
    for i in order:
        if levels and a[i] == levels[-1]:
            groups[-1].append(masses[i])
        else:
            levels.append(float(a[i]))
            groups.append([masses[i]])
    cumulative, breakpoints = [], [0.0]
    for g in groups:
        cumulative.extend(g)
        breakpoints.append(math.fsum(cumulative))
    return StepFunction(tuple(breakpoints), tuple(levels))


def equimeasurable(x: FunctionVector, y: FunctionVector) -> bool:
    if math.fsum(x.space.masses) != math.fsum(y.space.masses):
        raise MeasureError(
            f"total masses differ: {x.space.total!r} vs {y.space.total!r}")
    return rearrangement(x) == rearrangement(y)
