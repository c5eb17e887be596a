"""Closed-form analytic expressions in ``z``.

Grammar, lowest to highest precedence::

    sum     := product (('+' | '-') product)*
    product := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := atom [('^' | '**') ['-'] INT]
    atom    := NUMBER | NUMBER 'i' | 'i' | 'z' | '(' sum ')' | 'exp' '(' sum ')'

A negative integer power is stored as ``1 / base**k`` so that every ``Pow``
node carries a non-negative exponent.  The only function is ``exp``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    DivisionNearZero,
    ExpressionSyntaxError,
    SingularAtOrigin,
    UnknownIdentifier,
    ZeroConstantTerm,
)
from .series import DEFAULT_ORDER, DEFAULT_RADIUS, TaylorSeries

NEAR_ZERO = 1e-14


class Node:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Node):
    pass


@dataclass(frozen=True)
class Const(Node):
    value: complex


@dataclass(frozen=True)
class Neg(Node):
    arg: Node


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int


@dataclass(frozen=True)
class Exp(Node):
    arg: Node


@dataclass(frozen=True)
class FunctionSpec:
    ast: Node
    source: str

    def __str__(self):
        return to_text(self.ast)

    def series(self, order=DEFAULT_ORDER, radius_hint=DEFAULT_RADIUS):
        return compile_series(self, order, radius_hint)

    def __call__(self, z):
        return pointwise_eval(self, z)


# tokenizer

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i(?![A-Za-z0-9_]))?
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>\*\*|[-+*/^()])
    """,
    re.VERBOSE,
)

_UNICODE_OPS = str.maketrans({"−": "-", "·": "*", "×": "*"})


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    offset: int


def _tokenize(source):
    text = source.translate(_UNICODE_OPS)
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExpressionSyntaxError(
                f"unexpected character {text[pos]!r}", _byte_offset(source, pos)
            )
        off = _byte_offset(source, pos)
        if m.group("num") is not None:
            kind = "imag" if m.group("imag") else "num"
            out.append(_Tok(kind, m.group("num"), off))
        elif m.group("name") is not None:
            name = m.group("name")
            if name not in ("z", "i", "exp"):
                raise UnknownIdentifier(f"unknown identifier {name!r}", off)
            out.append(_Tok(name, name, off))
        elif m.group("op") is not None:
            out.append(_Tok(m.group("op"), m.group("op"), off))
        pos = m.end()
    out.append(_Tok("end", "", _byte_offset(source, len(text))))
    return out


def _byte_offset(source, pos):
    return len(source[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, source):
        self.toks = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok.kind != kind:
            what = tok.text or "end of input"
            raise ExpressionSyntaxError(f"expected {kind!r}, found {what!r}", tok.offset)
        self.i += 1
        return tok

    def parse(self):
        node = self.sum()
        tok = self.peek()
        if tok.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {tok.text!r}", tok.offset)
        return node

    def sum(self):
        node = self.product()
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            node = BinOp(op, node, self.product())
        return node

    def product(self):
        node = self.unary()
        while self.peek().kind in ("*", "/"):
            op = self.take().kind
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        kind = self.peek().kind
        if kind == "-":
            self.take()
            return Neg(self.unary())
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().kind in ("^", "**"):
            self.take()
            negative = False
            if self.peek().kind == "-":
                self.take()
                negative = True
            tok = self.take("num")
            if not re.fullmatch(r"\d+", tok.text):
                raise ExpressionSyntaxError("exponent must be an integer", tok.offset)
            k = int(tok.text)
            if negative:
                return BinOp("/", Const(1.0), Pow(base, k))
            return Pow(base, k)
        return base

    def atom(self):
        tok = self.take()
        if tok.kind == "num":
            return Const(complex(float(tok.text), 0.0))
        if tok.kind == "imag":
            return Const(complex(0.0, float(tok.text)))
        if tok.kind == "i":
            return Const(1j)
        if tok.kind == "z":
            return Var()
        if tok.kind == "(":
            node = self.sum()
            self.take(")")
            return node
        if tok.kind == "exp":
            self.take("(")
            node = self.sum()
            self.take(")")
            return Exp(node)
        what = tok.text or "end of input"
        raise ExpressionSyntaxError(f"unexpected {what!r}", tok.offset)


def parse(source):
    """Parse expression text into a :class:`FunctionSpec`."""
    return FunctionSpec(_Parser(source).parse(), source)


# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _num_text(x):
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _imag_text(im):
    return "i" if im == 1 else f"{_num_text(im)}i"


def _const_text(value):
    """Text and precedence of a literal, matching how its parse would print."""
    re_, im = value.real, value.imag
    if im == 0:
        return (_num_text(re_), 5) if re_ >= 0 else (f"-{_num_text(-re_)}", 3)
    if re_ == 0:
        return (_imag_text(im), 5) if im > 0 else (f"-{_imag_text(-im)}", 3)
    head = _num_text(re_) if re_ >= 0 else f"-{_num_text(-re_)}"
    sign = "+" if im > 0 else "-"
    return f"{head} {sign} {_imag_text(abs(im))}", 1


def to_text(node, parent=0):
    """Print an AST with the fewest parentheses that re-parse to the same tree."""
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Const):
        text, p = _const_text(node.value)
        return f"({text})" if parent > p else text
    if isinstance(node, Exp):
        return f"exp({to_text(node.arg)})"
    if isinstance(node, Pow):
        text = f"{to_text(node.base, 5)}^{node.exponent}"
        return f"({text})" if parent > 4 else text
    if isinstance(node, Neg):
        text = f"-{to_text(node.arg, 3)}"
        return f"({text})" if parent > 3 else text
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        # left-associative: the right operand needs parens at equal precedence
        text = f"{to_text(node.left, p)}{node.op}{to_text(node.right, p + 1)}"
        if node.op in "+-":
            text = f"{to_text(node.left, p)} {node.op} {to_text(node.right, p + 1)}"
        return f"({text})" if parent > p else text
    raise TypeError(f"not an expression node: {node!r}")


# compilation to series

def compile_series(spec, order=DEFAULT_ORDER, radius_hint=DEFAULT_RADIUS):
    """Expand an expression into a :class:`TaylorSeries` of the given order."""
    node = spec.ast if isinstance(spec, FunctionSpec) else spec
    z = TaylorSeries.variable(order, radius_hint)

    def go(n):
        if isinstance(n, Var):
            return z
        if isinstance(n, Const):
            return TaylorSeries.constant(n.value, order, radius_hint)
        if isinstance(n, Neg):
            return -go(n.arg)
        if isinstance(n, Pow):
            return go(n.base) ** n.exponent
        if isinstance(n, Exp):
            return go(n.arg).exp()
        if isinstance(n, BinOp):
            left, right = go(n.left), go(n.right)
            if n.op == "+":
                return left + right
            if n.op == "-":
                return left - right
            if n.op == "*":
                return left * right
            try:
                return left / right
            except ZeroConstantTerm as exc:
                raise SingularAtOrigin(
                    f"denominator {to_text(n.right)} vanishes at z=0"
                ) from exc
        raise TypeError(f"not an expression node: {n!r}")

    return go(node)


# pointwise evaluation

def pointwise_eval(spec, z):
    """Evaluate the closed form directly with complex arithmetic.

    Works on scalars and numpy arrays.  Raises :class:`DivisionNearZero` if any
    denominator has modulus below 1e-14.
    """
    node = spec.ast if isinstance(spec, FunctionSpec) else spec
    z = np.asarray(z, dtype=np.complex128)

    def go(n):
        if isinstance(n, Var):
            return z
        if isinstance(n, Const):
            return np.full_like(z, n.value)
        if isinstance(n, Neg):
            return -go(n.arg)
        if isinstance(n, Pow):
            return go(n.base) ** n.exponent
        if isinstance(n, Exp):
            return np.exp(go(n.arg))
        left, right = go(n.left), go(n.right)
        if n.op == "+":
            return left + right
        if n.op == "-":
            return left - right
        if n.op == "*":
            return left * right
        if np.any(np.abs(right) < NEAR_ZERO):
            raise DivisionNearZero(f"denominator {to_text(n.right)} is numerically zero")
        return left / right

    out = go(node)
    return out[()] if out.ndim == 0 else out
