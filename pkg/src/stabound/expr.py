"""Scalar expressions in the single variable ``t``.

Matrix entries of time-varying systems are written as strings like
``"exp(-t)"`` or ``"sqrt(10)*sin(3*t)"`` in config files.  This module parses
them into immutable ASTs and evaluates them in IEEE double precision.

Grammar (standard precedence, ``^`` right-associative and binding tighter
than unary minus):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | 't' | FUNC '(' expr ')' | '(' expr ')'

Implicit multiplication is rejected ("2t" is a syntax error).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from .errors import ExprDomainError, ExprSyntaxError


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    """The time variable t."""


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
    arg: "Expr"


Expr = Union[Const, Var, Neg, BinOp, Call]

FUNCTIONS = ("exp", "sin", "cos", "sqrt", "ln", "abs")

_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    """Return (kind, text, byte offset) triples; kinds: num, ident, op, end."""
    tokens = []
    i = 0
    while i < len(src):
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        m = _NUMBER.match(src, i)
        if m:
            tokens.append(("num", m.group(0), i))
            i = m.end()
            continue
        m = _IDENT.match(src, i)
        if m:
            tokens.append(("ident", m.group(0), i))
            i = m.end()
            continue
        if ch in "+-*/^()":
            tokens.append(("op", ch, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, text, off = self.peek()
        if kind != "op" or text != op:
            raise ExprSyntaxError(f"expected {op!r}, found {text or 'end of input'!r}", off)
        return self.advance()

    def parse(self) -> Expr:
        node = self.expr()
        kind, text, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected trailing input {text!r}", off)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = BinOp(text, node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = BinOp(text, node, self.unary())
            else:
                return node

    def unary(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            # right associativity; exponent may carry its own unary minus
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, text, off = self.advance()
        if kind == "num":
            return Const(float(text))
        if kind == "ident":
            if text == "t":
                return Var()
            if text in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            raise ExprSyntaxError(
                f"unknown identifier {text!r}; the variable is 't' and the "
                f"functions are {', '.join(FUNCTIONS)}",
                off,
            )
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(
            f"expected a number, 't', a function call or '(', found "
            f"{text or 'end of input'!r}",
            off,
        )


def parse(src: str) -> Expr:
    """Parse expression text into an AST. Raises ExprSyntaxError with a byte offset."""
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(src).parse()


def _pow(base: float, exponent: float, node: BinOp) -> float:
    if base == 0.0 and exponent < 0.0:
        raise ExprDomainError(f"zero raised to a negative power in '{to_string(node)}'")
    if base < 0.0 and exponent != math.floor(exponent):
        raise ExprDomainError(
            f"negative base with non-integer exponent in '{to_string(node)}'"
        )
    try:
        return math.pow(base, exponent)
    except OverflowError:
        raise ExprDomainError(f"overflow in '{to_string(node)}'") from None


def evaluate(e: Expr, t: float) -> float:
    """Evaluate ``e`` at time ``t``; domain violations raise ExprDomainError."""
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return t
    if isinstance(e, Neg):
        return -evaluate(e.operand, t)
    if isinstance(e, BinOp):
        left = evaluate(e.left, t)
        right = evaluate(e.right, t)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        if e.op == "/":
            if right == 0.0:
                raise ExprDomainError(f"division by zero in '{to_string(e)}' at t={t}")
            return left / right
        return _pow(left, right, e)
    if isinstance(e, Call):
        arg = evaluate(e.arg, t)
        if e.func == "sqrt" and arg < 0.0:
            raise ExprDomainError(f"sqrt of negative number in '{to_string(e)}' at t={t}")
        if e.func == "ln" and arg <= 0.0:
            raise ExprDomainError(f"ln of non-positive number in '{to_string(e)}' at t={t}")
        try:
            value = {
                "exp": math.exp,
                "sin": math.sin,
                "cos": math.cos,
                "sqrt": math.sqrt,
                "ln": math.log,
                "abs": abs,
            }[e.func](arg)
        except OverflowError:
            raise ExprDomainError(f"overflow in '{to_string(e)}' at t={t}") from None
        return value
    raise TypeError(f"not an expression node: {e!r}")


# precedence levels used by the printer; mirrors the grammar
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _print(e: Expr, parent_prec: int) -> str:
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Call):
        return f"{e.func}({_print(e.arg, 0)})"
    if isinstance(e, Neg):
        inner = _print(e.operand, _PREC["neg"])
        text = f"-{inner}"
        return f"({text})" if parent_prec > _PREC["neg"] else text
    if isinstance(e, BinOp):
        prec = _PREC[e.op]
        if e.op == "^":
            left = _print(e.left, prec + 1)
            right = _print(e.right, prec)
        else:
            left = _print(e.left, prec)
            right = _print(e.right, prec + 1)
        text = f"{left}{e.op}{right}"
        return f"({text})" if parent_prec > prec else text
    raise TypeError(f"not an expression node: {e!r}")


def to_string(e: Expr) -> str:
    """Render ``e`` with minimal parentheses; reparses to an equivalent AST."""
    return _print(e, 0)
