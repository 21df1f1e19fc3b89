"""Small arithmetic expression language for CLI-supplied right-hand sides.

Grammar (EBNF, whitespace insignificant)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = atom [ "^" unary ] ;          (* right associative *)
    atom    = NUMBER | VARIABLE | FUNC "(" expr { "," expr } ")" | "(" expr ")" ;
    NUMBER  = decimal literal with optional fraction and exponent ;

Variables are limited to ``t``, ``u``, ``alpha``, ``lambda``; functions to
``exp``, ``ln``, ``sin``, ``cos``, ``pow``, ``gamma`` and ``ml`` (the
two-parameter Mittag-Leffler function, ``ml(alpha, beta, z)``).  Unary minus
binds looser than ``^``, so ``-2^2 == -4``.  There is no implicit
multiplication: ``2t`` is a syntax error.

Parse failures raise :class:`ExprSyntaxError` carrying the byte offset and
what was expected; unknown names raise :class:`UnknownNameError`.  ASTs are
immutable and evaluation is pure.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Union

from .specfun import gamma as _gamma
from .specfun import mittag_leffler as _ml

__all__ = [
    "Expr",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "ExprError",
    "ExprSyntaxError",
    "UnknownNameError",
    "EvalError",
    "parse",
    "evaluate",
]

VARIABLES = ("t", "u", "alpha", "lambda")

FUNCTIONS = {
    "exp": (1, math.exp),
    "ln": (1, math.log),
    "sin": (1, math.sin),
    "cos": (1, math.cos),
    "pow": (2, lambda x, y: x**y),
    "gamma": (1, _gamma),
    "ml": (3, lambda al, be, z: _ml(al, be, z)),
}


class ExprError(ValueError):
    """Base class for expression-language errors."""


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownNameError(ExprSyntaxError):
    pass


class EvalError(ExprError):
    """Raised when an AST cannot be evaluated with the given bindings."""


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Expr", ...]


Expr = Union[Num, Var, Neg, BinOp, Call]

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None or m.lastgroup is None:
            stripped = src[pos:].lstrip()
            if not stripped:
                break
            at = len(src) - len(stripped)
            raise ExprSyntaxError(f"unexpected character {stripped[0]!r}", at)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def cur(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, text, offset = self.cur
        if kind != "op" or text != op:
            raise ExprSyntaxError(f"expected {op!r}", offset)
        self.advance()

    def parse(self) -> Expr:
        node = self.expr()
        kind, text, offset = self.cur
        if kind != "end":
            raise ExprSyntaxError(f"expected operator or end of input, got {text!r}", offset)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.cur[0] == "op" and self.cur[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.cur[0] == "op" and self.cur[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.cur[0] == "op" and self.cur[1] == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.cur[0] == "op" and self.cur[1] == "^":
            self.advance()
            return BinOp("^", base, self.unary())  # right associative
        return base

    def atom(self) -> Expr:
        kind, text, offset = self.cur
        if kind == "num":
            self.advance()
            return Num(float(text))
        if kind == "name":
            self.advance()
            if self.cur[0] == "op" and self.cur[1] == "(":
                return self.call(text, offset)
            if text not in VARIABLES:
                raise UnknownNameError(
                    f"unknown variable {text!r}; expected one of {', '.join(VARIABLES)}",
                    offset,
                )
            return Var(text)
        if kind == "op" and text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        what = "end of input" if kind == "end" else repr(text)
        raise ExprSyntaxError(f"expected a number, name or '(', got {what}", offset)

    def call(self, name: str, offset: int) -> Expr:
        if name not in FUNCTIONS:
            raise UnknownNameError(
                f"unknown function {name!r}; expected one of {', '.join(sorted(FUNCTIONS))}",
                offset,
            )
        arity = FUNCTIONS[name][0]
        self.expect_op("(")
        args = [self.expr()]
        while self.cur[0] == "op" and self.cur[1] == ",":
            self.advance()
            args.append(self.expr())
        self.expect_op(")")
        if len(args) != arity:
            raise ExprSyntaxError(
                f"{name} takes {arity} argument(s), got {len(args)}", offset
            )
        return Call(name, tuple(args))


def parse(src: str) -> Expr:
    """Parse ``src`` into an immutable AST.

    Raises :class:`ExprSyntaxError` (with byte offset) on malformed input
    and :class:`UnknownNameError` for undeclared variables or functions.
    """
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(src).parse()


def evaluate(node: Expr, bindings: Mapping[str, float]) -> float:
    """Evaluate an AST in IEEE double precision under the given bindings."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        try:
            return float(bindings[node.name])
        except KeyError:
            raise EvalError(f"variable {node.name!r} is not bound") from None
    if isinstance(node, Neg):
        return -evaluate(node.operand, bindings)
    if isinstance(node, BinOp):
        x = evaluate(node.left, bindings)
        y = evaluate(node.right, bindings)
        if node.op == "+":
            return x + y
        if node.op == "-":
            return x - y
        if node.op == "*":
            return x * y
        if node.op == "/":
            return x / y
        return x**y
    fn = FUNCTIONS[node.func][1]
    return float(fn(*(evaluate(arg, bindings) for arg in node.args)))
