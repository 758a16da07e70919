"""Expression parsing and second-order forward-mode differentiation.

Grammar, from loosest to tightest binding::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" ["-"] INTEGER)*
    atom   := NUMBER | NAME | FUNC "(" expr ")" | "(" expr ")"

Binary operators are left-associative. ``-u^2`` parses as ``-(u^2)``.
Functions take exactly one argument: sin, cos, tan, exp, log, sqrt, atan.
The name ``pi`` is a constant.

Evaluation works on batches: ``eval_jet2_batch`` takes an ``(M, n)`` array of
points and returns value, gradient and Hessian arrays for all of them.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt", "atan")
CONSTANTS = {"pi": math.pi}


class ExprError(ValueError):
    """Base class for expression errors."""


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, position: int, source: str = ""):
        self.position = position
        self.source = source
        super().__init__(f"{message} at position {position}")


class UnknownIdentifierError(ExprSyntaxError):
    pass


class ArityError(ExprSyntaxError):
    pass


class ExprDomainError(ExprError):
    """Raised when an elementary function is evaluated outside its real domain."""

    def __init__(self, message: str, subexpression: str):
        self.subexpression = subexpression
        super().__init__(f"{message} in '{subexpression}'")


# --------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Pow, Call]

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_UNARY_PREC = 3
_POW_PREC = 4
_ATOM_PREC = 5


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _UNARY_PREC
    if isinstance(node, Pow):
        return _POW_PREC
    return _ATOM_PREC


def to_source(node: Node) -> str:
    """Pretty-print a tree with the minimum parentheses needed to re-parse it."""
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, Neg):
        inner = to_source(node.arg)
        if _prec(node.arg) < _UNARY_PREC:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Pow):
        base = to_source(node.base)
        # left-assoc chains of ^ are fine; everything looser needs parens
        if _prec(node.base) < _POW_PREC:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    lp = _PREC[node.op]
    left = to_source(node.left)
    right = to_source(node.right)
    if _prec(node.left) < lp:
        left = f"({left})"
    if _prec(node.right) <= lp:
        right = f"({right})"
    return f"{left} {node.op} {right}"


def _walk(node: Node):
    yield node
    if isinstance(node, (Neg, Call)):
        yield from _walk(node.arg)
    elif isinstance(node, Pow):
        yield from _walk(node.base)
    elif isinstance(node, BinOp):
        yield from _walk(node.left)
        yield from _walk(node.right)


@dataclass(frozen=True)
class Expression:
    source: str
    ast: Node
    variables: tuple[str, ...]

    def __str__(self) -> str:
        return to_source(self.ast)

    def referenced(self) -> set[str]:
        return {n.name for n in _walk(self.ast) if isinstance(n, Var)}


# --------------------------------------------------------------------------
# Parser

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))"
)


@dataclass
class _Token:
    kind: str  # num, name, op, end
    text: str
    pos: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(source) and source[pos].isspace():
            pos += 1
        if pos >= len(source):
            break
        m = _TOKEN_RE.match(source, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", pos, source)
        kind = m.lastgroup
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(_Token("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str, variables: Sequence[str]):
        self.source = source
        self.variables = tuple(variables)
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, message: str, tok: _Token | None = None, cls=ExprSyntaxError):
        tok = tok or self.tok
        return cls(message, tok.pos, self.source)

    def expect(self, text: str) -> _Token:
        if self.tok.text != text or self.tok.kind != "op":
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        while self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            sign = 1
            if self.tok.kind == "op" and self.tok.text == "-":
                self.advance()
                sign = -1
            tok = self.tok
            if tok.kind != "num" or not tok.text.isdigit():
                raise self.error("exponent must be an integer literal")
            self.advance()
            node = Pow(node, sign * int(tok.text))
        return node

    def atom(self) -> Node:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "name":
            self.advance()
            if tok.text in FUNCTIONS:
                if not (self.tok.kind == "op" and self.tok.text == "("):
                    raise self.error(f"function {tok.text!r} requires an argument", tok, ArityError)
                self.advance()
                if self.tok.kind == "op" and self.tok.text == ")":
                    raise self.error(f"function {tok.text!r} takes exactly one argument", tok, ArityError)
                arg = self.expr()
                if self.tok.kind == "op" and self.tok.text == ",":
                    raise self.error(f"function {tok.text!r} takes exactly one argument", tok, ArityError)
                self.expect(")")
                return Call(tok.text, arg)
            if tok.text in self.variables:
                return Var(tok.text)
            if tok.text in CONSTANTS:
                return Num(CONSTANTS[tok.text])
            raise self.error(f"unknown identifier {tok.text!r}", tok, UnknownIdentifierError)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = tok.text or "end of input"
        raise self.error(f"unexpected {found!r}")


def parse(source: str, variables: Sequence[str]) -> Expression:
    """Parse ``source`` as an expression in the named ``variables``."""
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", 0, source)
    ast = _Parser(source, variables).parse()
    return Expression(source, ast, tuple(variables))


# --------------------------------------------------------------------------
# Jets


@dataclass
class Jet2:
    """Value, gradient and Hessian of a function at one or many points.

    Shapes are ``value (...)``, ``grad (..., n)``, ``hess (..., n, n)``.
    """

    value: np.ndarray
    grad: np.ndarray
    hess: np.ndarray

    @classmethod
    def constant(cls, c: float, m: int, n: int) -> "Jet2":
        return cls(np.full(m, float(c)), np.zeros((m, n)), np.zeros((m, n, n)))

    @classmethod
    def variable(cls, values: np.ndarray, index: int, n: int) -> "Jet2":
        m = values.shape[0]
        grad = np.zeros((m, n))
        grad[:, index] = 1.0
        return cls(np.array(values, dtype=float), grad, np.zeros((m, n, n)))

    def __add__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)

    def __sub__(self, other: "Jet2") -> "Jet2":
        return Jet2(self.value - other.value, self.grad - other.grad, self.hess - other.hess)

    def __neg__(self) -> "Jet2":
        return Jet2(-self.value, -self.grad, -self.hess)

    def __mul__(self, other: "Jet2") -> "Jet2":
        a, b = self.value, other.value
        cross = self.grad[..., :, None] * other.grad[..., None, :]
        hess = (
            a[..., None, None] * other.hess
            + b[..., None, None] * self.hess
            + (cross + np.swapaxes(cross, -1, -2))
        )
        return Jet2(a * b, a[..., None] * other.grad + b[..., None] * self.grad, hess)

    def chain(self, f0: np.ndarray, f1: np.ndarray, f2: np.ndarray) -> "Jet2":
        """Compose with a scalar function given its value and first two derivatives."""
        g = self.grad
        outer = g[..., :, None] * g[..., None, :]
        hess = f1[..., None, None] * self.hess + f2[..., None, None] * outer
        return Jet2(f0, f1[..., None] * g, hess)

    def __getitem__(self, idx) -> "Jet2":
        return Jet2(self.value[idx], self.grad[idx], self.hess[idx])


def _domain_check(bad: np.ndarray, message: str, node: Node) -> None:
    if np.any(bad):
        raise ExprDomainError(message, to_source(node))


def _eval(node: Node, env: dict[str, Jet2], m: int, n: int) -> Jet2:
    if isinstance(node, Num):
        return Jet2.constant(node.value, m, n)
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Neg):
        return -_eval(node.arg, env, m, n)
    if isinstance(node, BinOp):
        left = _eval(node.left, env, m, n)
        right = _eval(node.right, env, m, n)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        b = right.value
        _domain_check(b == 0.0, "division by zero", node)
        inv = right.chain(1.0 / b, -1.0 / b**2, 2.0 / b**3)
        return left * inv
    if isinstance(node, Pow):
        base = _eval(node.base, env, m, n)
        k = node.exponent
        x = base.value
        if k == 0:
            return Jet2.constant(1.0, m, n)
        if k < 0:
            _domain_check(x == 0.0, "zero raised to a negative power", node)
        # x**(k-2) is unsafe at x == 0 for k in (1, 2), so spell those out
        if k == 1:
            return base
        if k == 2:
            return base.chain(x * x, 2.0 * x, np.full_like(x, 2.0))
        return base.chain(x**k, k * x ** (k - 1), k * (k - 1) * x ** (k - 2))
    if isinstance(node, Call):
        arg = _eval(node.arg, env, m, n)
        x = arg.value
        f = node.func
        if f == "sin":
            s, c = np.sin(x), np.cos(x)
            return arg.chain(s, c, -s)
        if f == "cos":
            s, c = np.sin(x), np.cos(x)
            return arg.chain(c, -s, -c)
        if f == "tan":
            c = np.cos(x)
            _domain_check(np.abs(c) < 1e-300, "tan at a pole", node)
            t = np.tan(x)
            sec2 = 1.0 + t * t
            return arg.chain(t, sec2, 2.0 * t * sec2)
        if f == "exp":
            e = np.exp(x)
            return arg.chain(e, e, e)
        if f == "log":
            _domain_check(x <= 0.0, "log of a nonpositive value", node)
            return arg.chain(np.log(x), 1.0 / x, -1.0 / x**2)
        if f == "sqrt":
            _domain_check(x <= 0.0, "sqrt of a nonpositive value", node)
            r = np.sqrt(x)
            return arg.chain(r, 0.5 / r, -0.25 / (r * x))
        if f == "atan":
            d = 1.0 / (1.0 + x * x)
            return arg.chain(np.arctan(x), d, -2.0 * x * d * d)
    raise TypeError(f"not an expression node: {node!r}")


def eval_jet2_batch(e: Expression, points: np.ndarray) -> Jet2:
    """Evaluate ``e`` and its first two derivatives at each row of ``points``."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != len(e.variables):
        raise ValueError(
            f"expected points of shape (M, {len(e.variables)}), got {pts.shape}"
        )
    m, n = pts.shape
    env = {name: Jet2.variable(pts[:, i], i, n) for i, name in enumerate(e.variables)}
    with np.errstate(all="ignore"):
        return _eval(e.ast, env, m, n)


def eval_jet2(e: Expression, point: Sequence[float]) -> Jet2:
    """Single-point version of :func:`eval_jet2_batch`."""
    pts = np.asarray(point, dtype=float).reshape(1, -1)
    return eval_jet2_batch(e, pts)[0]

