"""Expression trees for Banach ideal spaces.

The same node family serves the numeric engine (``norms``) and the symbolic
calculus (``symbolic``).  Trees carry no measure space; they are bound to one
when a norm is evaluated on a ``FunctionVector``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Union

Number = Union[Fraction, float]  # float only for math.inf
INF = math.inf


def as_number(value) -> Number:
    """Coerce ``value`` to an exact ``Fraction`` (or ``inf``)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        v = value.strip()
        if v in ("inf", "oo", "infinity"):
            return INF
        return Fraction(v)
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return INF
        if not math.isfinite(value):
            raise ValueError(f"not a usable number: {value!r}")
        return Fraction(repr(value))
    return Fraction(value)


def format_number(v: Number) -> str:
    if v == INF:
        return "inf"
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    d = v.denominator
    for prime in (2, 5):
        while d % prime == 0:
            d //= prime
    if d == 1:
        return format(Decimal(v.numerator) / Decimal(v.denominator), "f")
    return f"{v.numerator}/{v.denominator}"


def conjugate_exponent(p: Number) -> Number:
    if p == 1:
        return INF
    if p == INF:
        return Fraction(1)
    return p / (p - 1)


class Expr:
    """Base class of all space expressions."""

    def children(self) -> tuple["Expr", ...]:
        return ()

    def __and__(self, other):
        return Intersect(self, other)

    def __or__(self, other):
        return Sum(self, other)

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children()), default=0)

    def walk(self):
        yield self
        for c in self.children():
            yield from c.walk()


@dataclass(frozen=True)
class Lp(Expr):
    p: Number

    def __post_init__(self):
        p = as_number(self.p)
        if not p >= 1:
            raise ValueError(f"Lp exponent must lie in [1, inf], got {self.p!r}")
        object.__setattr__(self, "p", p)

    def __str__(self):
        return f"Lp({format_number(self.p)})"


@dataclass(frozen=True)
class Orlicz(Expr):
    """Orlicz space with the Luxemburg norm of a catalogued Young function."""

    name: str

    def __post_init__(self):
        from .orlicz import young  # validates the name
        young(self.name)

    def __str__(self):
        return f"orlicz({self.name})"


@dataclass(frozen=True)
class Sym(Expr):
    """A symmetric space given by a rearrangement profile (see ``symmetric``)."""

    profile: object

    def __str__(self):
        return str(self.profile)


@dataclass(frozen=True)
class Intersect(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        return f"cap({self.left},{self.right})"


@dataclass(frozen=True)
class Sum(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        return f"plus({self.left},{self.right})"


@dataclass(frozen=True)
class Dual(Expr):
    inner: Expr

    def children(self):
        return (self.inner,)

    def __str__(self):
        return f"dual({self.inner})"


@dataclass(frozen=True)
class Scale(Expr):
    """The same space with norm ``c * ||x||``."""

    c: Number
    inner: Expr

    def __post_init__(self):
        c = as_number(self.c)
        if not (0 < c < INF):
            raise ValueError(f"scale factor must be positive and finite, got {self.c!r}")
        object.__setattr__(self, "c", c)

    def children(self):
        return (self.inner,)

    def __str__(self):
        return f"scale({format_number(self.c)},{self.inner})"


@dataclass(frozen=True)
class BigIntersect(Expr):
    items: tuple[Expr, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if not self.items:
            raise ValueError("an intersection family must be nonempty")

    def children(self):
        return self.items

    def __str__(self):
        return f"Cap({','.join(map(str, self.items))})"


@dataclass(frozen=True)
class BigSum(Expr):
    items: tuple[Expr, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if not self.items:
            raise ValueError("a sum family must be nonempty")

    def children(self):
        return self.items

    def __str__(self):
        return f"Plus({','.join(map(str, self.items))})"


@dataclass(frozen=True)
class ZeroPart(Expr):
    """Elements with order continuous norm.  Symbolic only."""

    inner: Expr

    def children(self):
        return (self.inner,)

    def __str__(self):
        return f"zero({self.inner})"


@dataclass(frozen=True)
class Zero(Expr):
    """The trivial space {0}; appears only as a computed result."""

    def __str__(self):
        return "ZERO"


ZERO = Zero()
L1 = Lp(1)
L2 = Lp(2)
LInfty = Lp(INF)


def is_closed_form(e: Expr) -> bool:
    """True when no node of ``e`` needs an optimization solver."""
    return not any(isinstance(n, (Sum, BigSum, Dual)) for n in e.walk())
