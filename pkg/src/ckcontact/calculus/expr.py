"""Parser for time-dependent coefficient expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := number | 't' | func '(' expr ')' | 'pow' '(' expr ',' expr ')'
            | '(' expr ')' | '-' factor
    func   := sin | cos | exp | tanh
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from ..errors import ParseError

FUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "tanh": np.tanh}
_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass(frozen=True)
class Node:
    op: str
    args: tuple = ()
    value: float = 0.0

    def __call__(self, t):
        op = self.op
        if op == "num":
            return self.value + 0.0 * np.asarray(t, dtype=float)
        if op == "t":
            return np.asarray(t, dtype=float) * 1.0
        if op == "neg":
            return -self.args[0](t)
        if op in FUNCS:
            return FUNCS[op](self.args[0](t))
        a, b = (x(t) for x in self.args)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if np.any(np.asarray(b) == 0):
                raise ZeroDivisionError("division by zero in coefficient expression")
            return a / b
        if op == "pow":
            return np.power(a, b)
        raise AssertionError(op)


@dataclass(frozen=True)
class CoefficientExpr:
    """A parsed scalar function of ``t``; call it with a float or array."""

    source: str
    tree: Node

    def __call__(self, t):
        v = self.tree(t)
        return float(v) if np.ndim(v) == 0 else v

    @property
    def is_constant(self):
        return "t" not in _ops(self.tree)


def _ops(node):
    out = {node.op}
    for a in node.args:
        out |= _ops(a)
    return out


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def fail(self, expected):
        raise ParseError(f"cannot parse {self.src!r}", len(self.src[: self.pos].encode()), expected)

    def skip(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.fail({ch})
        self.pos += 1

    def parse(self):
        node = self.expr()
        if self.peek():
            self.fail({"+", "-", "*", "/", "end of input"})
        return node

    def expr(self):
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.src[self.pos]
            self.pos += 1
            node = Node(op, (node, self.term()))
        return node

    def term(self):
        node = self.factor()
        while self.peek() in ("*", "/"):
            op = self.src[self.pos]
            self.pos += 1
            node = Node(op, (node, self.factor()))
        return node

    def factor(self):
        ch = self.peek()
        starts = {"number", "t", "(", "-", *FUNCS, "pow"}
        if not ch:
            self.fail(starts)
        if ch == "-":
            self.pos += 1
            return Node("neg", (self.factor(),))
        if ch == "(":
            self.pos += 1
            node = self.expr()
            self.expect(")")
            return node
        m = _NUMBER.match(self.src, self.pos)
        if m:
            self.pos = m.end()
            value = float(m.group(0))
            if not math.isfinite(value):
                self.fail({"finite number"})
            return Node("num", value=value)
        m = _IDENT.match(self.src, self.pos)
        if m:
            name = m.group(0)
            if name == "t":
                self.pos = m.end()
                return Node("t")
            if name in FUNCS or name == "pow":
                self.pos = m.end()
                self.expect("(")
                a = self.expr()
                if name == "pow":
                    self.expect(",")
                    b = self.expr()
                    self.expect(")")
                    return Node("pow", (a, b))
                self.expect(")")
                return Node(name, (a,))
        self.fail(starts)


def parse_coeff(src: str) -> CoefficientExpr:
    """Parse ``src`` into a :class:`CoefficientExpr` or raise :class:`ParseError`."""
    return CoefficientExpr(src, _Parser(src).parse())


def constant(value: float) -> CoefficientExpr:
    return CoefficientExpr(repr(float(value)), Node("num", value=float(value)))
