"""Recursive-descent parser for the space-expression mini-language.

Grammar::

    expr   := leaf | cap(expr,expr) | plus(expr,expr) | dual(expr) | zero(expr)
            | scale(num,expr) | Cap(expr,...) | Plus(expr,...) | ZERO
    leaf   := Lp(num) | orlicz(name) | sym.Lp(num) | sym.orlicz(name)
            | sym.lorentz(num,...)
    num    := integer | decimal | integer/integer | inf

``str(parse_expr(text))`` reparses to an equal expression.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .expr import (ZERO, BigIntersect, BigSum, Dual, Expr, Intersect, Lp, Orlicz, Scale, Sum,
                   Sym, ZeroPart, as_number)
from .orlicz import CATALOG
from .profiles import LorentzProfile, LpProfile, OrliczProfile

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:/\d+)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_.]*)"
                    r"|(?P<punct>[(),]))")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.line = text.count("\n", 0, pos) + 1
        self.column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.pos = pos
        super().__init__(f"line {self.line}, column {self.column}: {message}")


@dataclass(frozen=True)
class Node:
    """Parse tree node; ``span`` is the (start, end) offset in the source."""

    head: str
    args: tuple
    span: tuple[int, int]


# arity: exact count, or (minimum, None) for variadic constructors
_ARITY = {"cap": 2, "plus": 2, "dual": 1, "zero": 1, "scale": 2, "Cap": (1, None),
          "Plus": (1, None), "Lp": 1, "orlicz": 1, "sym.Lp": 1, "sym.orlicz": 1,
          "sym.lorentz": (1, None)}
_NUMERIC = {"Lp", "sym.Lp", "sym.lorentz"}
_NAMED = {"orlicz", "sym.orlicz"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                start = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise ParseError(f"unexpected character {text[start]!r}", text, start)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind), m.end(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text),
                                                                      len(self.text))

    def take(self, value: Optional[str] = None, kind: Optional[str] = None):
        tok = self.peek()
        if tok[0] is None:
            want = f"{value!r}" if value else (kind or "token")
            raise ParseError(f"unexpected end of input, expected {want}", self.text, tok[2])
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = f"{value!r}" if value else kind
            raise ParseError(f"expected {want}, found {tok[1]!r}", self.text, tok[2])
        self.i += 1
        return tok

    def number(self):
        kind, val, start, end = self.peek()
        if kind == "num" or (kind == "name" and val == "inf"):
            self.i += 1
            return Node("num", (val,), (start, end))
        raise ParseError(f"expected a number, found {val!r}" if val else
                         "unexpected end of input, expected a number", self.text, start)

    def expr(self):
        kind, val, start, end = self.take(kind="name")
        if val == "ZERO":
            return Node("ZERO", (), (start, end))
        if val not in _ARITY:
            raise ParseError(f"unknown constructor {val!r}", self.text, start)
        open_tok = self.take("(")
        args = []
        if val in _NAMED:
            _, name, s, e = self.take(kind="name")
            args.append(Node("name", (name,), (s, e)))
        else:
            args.append(self.number() if val in _NUMERIC or val == "scale" else self.expr())
        while self.peek()[1] == ",":
            self.take(",")
            if val in _NUMERIC:
                args.append(self.number())
            else:
                args.append(self.expr())
        if self.peek()[0] is None:
            raise ParseError(f"unclosed parenthesis opened here for {val!r}", self.text,
                             open_tok[2])
        close = self.take(")")
        arity = _ARITY[val]
        ok = len(args) >= arity[0] if isinstance(arity, tuple) else len(args) == arity
        if not ok:
            want = f"at least {arity[0]}" if isinstance(arity, tuple) else str(arity)
            raise ParseError(f"{val} takes {want} argument(s), got {len(args)}", self.text, start)
        return Node(val, tuple(args), (start, close[3]))

    def parse(self) -> Node:
        if not self.tokens:
            raise ParseError("empty expression", self.text, 0)
        node = self.expr()
        if self.i < len(self.tokens):
            raise ParseError(f"trailing input {self.tokens[self.i][1]!r}", self.text,
                             self.tokens[self.i][2])
        return node


def parse_ast(text: str) -> Node:
    return _Parser(text).parse()


def _build(node: Node, text: str) -> Expr:
    h, a = node.head, node.args
    try:
        if h == "ZERO":
            return ZERO
        if h == "Lp":
            return Lp(as_number(a[0].args[0]))
        if h == "sym.Lp":
            return Sym(LpProfile(as_number(a[0].args[0])))
        if h == "sym.lorentz":
            return Sym(LorentzProfile(tuple(as_number(n.args[0]) for n in a)))
        if h in _NAMED:
            name = a[0].args[0]
            if name not in CATALOG:
                raise ParseError(f"unknown Young function {name!r}; known: {sorted(CATALOG)}",
                                 text, a[0].span[0])
            return Orlicz(name) if h == "orlicz" else Sym(OrliczProfile(name))
        if h == "scale":
            return Scale(as_number(a[0].args[0]), _build(a[1], text))
        kids = [_build(n, text) for n in a]
        if h == "cap":
            return Intersect(*kids)
        if h == "plus":
            return Sum(*kids)
        if h == "dual":
            return Dual(kids[0])
        if h == "zero":
            return ZeroPart(kids[0])
        if h == "Cap":
            return BigIntersect(tuple(kids))
        return BigSum(tuple(kids))
    except ParseError:
        raise
    except ZeroDivisionError:
        raise ParseError("division by zero in a number", text, node.span[0]) from None
    except ValueError as err:
        raise ParseError(str(err), text, node.span[0]) from None


def parse_expr(text: str) -> Expr:
    """Parse ``text`` into an expression; raises ``ParseError`` with line and column."""
    return _build(parse_ast(text), text)


def parse_numbers(text: str) -> list[float]:
    """Comma or whitespace separated floats (``inf`` allowed)."""
    out = []
    for tok in re.split(r"[,\s]+", text.strip()):
        if tok:
            out.append(float(tok))
    return out
