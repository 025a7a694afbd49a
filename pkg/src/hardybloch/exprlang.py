"""A small expression language for symbols and test functions.

Grammar (whitespace insensitive)::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := NUMBER | NUMBER 'i' | 'i' | 'z' | NAME '(' expr ')' | '(' expr ')'

so ``^`` binds tighter than unary minus, which binds tighter than ``*``
and ``/``, and ``^`` is right-associative.  Literal arithmetic is folded
while parsing, so ``2+3i`` is the single constant 2+3i and ``-2`` is the
constant -2; printing a folded tree and reparsing it gives the same tree.

Functions use principal branches: on the upper half-plane ``log`` has
imaginary part in (0, pi), ``sqrt(u) = exp(log(u)/2)``, and ``u^v`` for a
non-integer exponent is ``exp(v*log(u))``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import ClassVar, Optional

import numpy as np

from .core import HoloFun, as_complex

FUNCTIONS = ("exp", "log", "sqrt", "sin", "cos")


class ParseError(ValueError):
    def __init__(self, message: str, position: int, expected=()):
        self.position = position
        self.expected = frozenset(expected)
        exp = ", ".join(sorted(self.expected))
        super().__init__(f"{message} at offset {position}" + (f" (expected one of: {exp})" if exp else ""))


class EvaluationError(ArithmeticError):
    pass


class Expr:
    """Base of the immutable expression tree."""

    prec: ClassVar[int] = 5

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Const(Expr):
    value: complex

    def __post_init__(self):
        # +0.0 clears signed zeros, which would otherwise pick the other
        # side of the log branch cut
        v = complex(self.value)
        object.__setattr__(self, "value", complex(v.real + 0.0, v.imag + 0.0))


@dataclass(frozen=True)
class Var(Expr):
    name: str = "z"


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr
    prec: ClassVar[int] = 3


@dataclass(frozen=True)
class BinOp(Expr):
    left: Expr
    right: Expr
    op: ClassVar[str] = "?"


class Add(BinOp):
    op, prec = "+", 1


class Sub(BinOp):
    op, prec = "-", 1


class Mul(BinOp):
    op, prec = "*", 2


class Div(BinOp):
    op, prec = "/", 2


class Pow(BinOp):
    op, prec = "^", 4


@dataclass(frozen=True)
class Apply(Expr):
    func: str
    arg: Expr


_BINOPS = {"+": Add, "-": Sub, "*": Mul, "/": Div, "^": Pow}

ZERO, ONE = Const(0), Const(1)
Z = Var()

# ---------------------------------------------------------------------------
# lexer / parser

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i(?![A-Za-z0-9_]))?"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)

_ATOM_START = {"number", "'i'", "'z'", "function", "'('", "'-'"}


def _tokenize(src: str):
    tokens = []
    pos = 0
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {src[pos]!r}", pos, _ATOM_START | {"operator"})
        if m.group("num") is not None:
            val = float(m.group("num"))
            tokens.append(("num", complex(0, val) if m.group("imag") else complex(val), m.start("num")))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", None, len(src)))
    return tokens


class _Parser:
    def __init__(self, src):
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ParseError(f"unexpected {_describe(self.peek())}", pos, {f"'{op}'"})
        self.take()

    def parse(self):
        e = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {_describe(self.peek())}", pos, {"operator", "end of input"})
        return e

    def expr(self):
        e = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            e = fold(_BINOPS[op](e, self.term()))
        return e

    def term(self):
        e = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            e = fold(_BINOPS[op](e, self.unary()))
        return e

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return fold(Neg(self.unary()))
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return fold(Pow(base, self.unary()))
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Const(val)
        if kind == "name":
            if val == "i":
                return Const(1j)
            if val == "z":
                return Z
            if val in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Apply(val, arg)
            raise ParseError(f"unknown name {val!r}", pos, _ATOM_START)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        raise ParseError(f"unexpected {_describe((kind, val, pos))}", pos, _ATOM_START)


def _describe(tok):
    kind, val, _ = tok
    if kind == "end":
        return "end of input"
    if kind == "num":
        return "number"
    return repr(val)


def parse(src: str) -> Expr:
    """Parse surface text into an expression tree."""
    if not src or not src.strip():
        raise ParseError("empty expression", 0, _ATOM_START)
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# constant folding and smart constructors


def _int_exponent(v: complex) -> Optional[int]:
    if v.imag == 0 and float(v.real).is_integer() and abs(v.real) <= 1024:
        return int(v.real)
    return None


def fold(e: Expr) -> Expr:
    """Fold literal arithmetic one level deep; never folds anything that
    would fail or overflow, so evaluation errors stay at eval time."""
    if isinstance(e, Neg) and isinstance(e.arg, Const):
        return Const(-e.arg.value)
    if isinstance(e, BinOp) and isinstance(e.left, Const) and isinstance(e.right, Const):
        try:
            with np.errstate(all="raise"):
                val = complex(_binop(e.op, e.left.value, e.right.value))
        except (EvaluationError, ZeroDivisionError, OverflowError, FloatingPointError, ValueError):
            return e
        if math.isfinite(val.real) and math.isfinite(val.imag):
            return Const(val)
    return e


def _is(e, c):
    return isinstance(e, Const) and e.value == c


def add(a, b):
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    return fold(Add(a, b))


def sub(a, b):
    if _is(b, 0):
        return a
    if _is(a, 0):
        return neg(b)
    return fold(Sub(a, b))


def neg(a):
    if isinstance(a, Neg):
        return a.arg
    return fold(Neg(a))


def mul(a, b):
    if _is(a, 0) or _is(b, 0):
        return ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    return fold(Mul(a, b))


def div(a, b):
    if _is(b, 1):
        return a
    if _is(a, 0):
        return ZERO
    return fold(Div(a, b))


def pow_(a, b):
    if _is(b, 1):
        return a
    if _is(b, 0):
        return ONE
    return fold(Pow(a, b))


# ---------------------------------------------------------------------------
# printing


def _fmt_real(x: float) -> str:
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _fmt_const(c: complex) -> str:
    re_, im = c.real, c.imag
    if im == 0 and re_ >= 0:
        return _fmt_real(re_)
    if re_ == 0 and im > 0:
        return "i" if im == 1 else _fmt_real(im) + "i"
    if im == 0:
        return f"(-{_fmt_real(-re_)})"
    if re_ == 0:
        return f"(-{_fmt_real(-im)}i)"
    real = _fmt_real(re_) if re_ >= 0 else "-" + _fmt_real(-re_)
    sign = "+" if im >= 0 else "-"
    return f"({real}{sign}{_fmt_real(abs(im))}i)"


def to_text(e: Expr) -> str:
    """Print in the surface grammar with minimal parentheses."""
    if isinstance(e, Const):
        return _fmt_const(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Apply):
        return f"{e.func}({to_text(e.arg)})"
    if isinstance(e, Neg):
        inner = to_text(e.arg)
        return "-" + (f"({inner})" if e.arg.prec < Neg.prec else inner)
    if isinstance(e, Pow):
        left = to_text(e.left)
        if e.left.prec <= Pow.prec:
            left = f"({left})"
        right = to_text(e.right)
        if e.right.prec < Neg.prec:
            right = f"({right})"
        return f"{left}^{right}"
    if isinstance(e, BinOp):
        left, right = to_text(e.left), to_text(e.right)
        if e.left.prec < e.prec:
            left = f"({left})"
        if e.right.prec <= e.prec:
            right = f"({right})"
        sep = " " if e.prec == 1 else ""
        return f"{left}{sep}{e.op}{sep}{right}"
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# evaluation


def _check_nonzero(u, what):
    if np.any(u == 0):
        raise EvaluationError(f"{what} of exact zero")


def _ipow(u, n: int):
    if n < 0:
        p = _ipow(u, -n)
        _check_nonzero(p, "division")
        return 1 / p
    result = np.ones_like(u) if isinstance(u, np.ndarray) else complex(1)
    base = u
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def _log(u):
    _check_nonzero(u, "log")
    return np.log(u)


def _binop(op, a, b):
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        _check_nonzero(b, "division")
        return a / b
    # op == "^"
    if np.ndim(b) == 0:
        n = _int_exponent(complex(b))
        if n is not None:
            return _ipow(a, n)
    return np.exp(b * _log(a))


def _sqrt(u):
    _check_nonzero(u, "sqrt")
    return np.sqrt(u)


_FUNCS = {"exp": np.exp, "log": _log, "sqrt": _sqrt, "sin": np.sin, "cos": np.cos}


def _eval(e: Expr, z):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return z
    if isinstance(e, Neg):
        return -_eval(e.arg, z)
    if isinstance(e, BinOp):
        return _binop(e.op, _eval(e.left, z), _eval(e.right, z))
    if isinstance(e, Apply):
        return _FUNCS[e.func](_eval(e.arg, z))
    raise TypeError(f"not an expression: {e!r}")


def evaluate(e: Expr, p):
    """Evaluate at a Point, a complex number or an array of them."""
    z = as_complex(p)
    with np.errstate(over="ignore", invalid="ignore"):
        out = _eval(e, z)
    if isinstance(z, np.ndarray):
        return np.broadcast_to(np.asarray(out, dtype=complex), z.shape).copy()
    return complex(out)


# ---------------------------------------------------------------------------
# differentiation


def differentiate(e: Expr) -> Expr:
    """d/dz by the usual rules; only literal arithmetic is simplified."""
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Neg):
        return neg(differentiate(e.arg))
    if isinstance(e, Add):
        return add(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Sub):
        return sub(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Mul):
        u, v = e.left, e.right
        return add(mul(differentiate(u), v), mul(u, differentiate(v)))
    if isinstance(e, Div):
        u, v = e.left, e.right
        num = sub(mul(differentiate(u), v), mul(u, differentiate(v)))
        return div(num, pow_(v, Const(2)))
    if isinstance(e, Pow):
        u, v = e.left, e.right
        du = differentiate(u)
        if isinstance(v, Const):
            return mul(mul(v, pow_(u, Const(v.value - 1))), du)
        dv = differentiate(v)
        return mul(e, add(mul(dv, Apply("log", u)), div(mul(v, du), u)))
    if isinstance(e, Apply):
        u = e.arg
        du = differentiate(u)
        if e.func == "exp":
            outer = e
        elif e.func == "log":
            return div(du, u)
        elif e.func == "sqrt":
            return div(du, mul(Const(2), e))
        elif e.func == "sin":
            outer = Apply("cos", u)
        elif e.func == "cos":
            outer = neg(Apply("sin", u))
        else:
            raise ValueError(f"unknown function {e.func}")
        return mul(outer, du)
    raise TypeError(f"not an expression: {e!r}")


def expr_function(src, label: Optional[str] = None) -> HoloFun:
    """HoloFun backed by an expression, with the symbolic derivative as its
    exact channel."""
    e = parse(src) if isinstance(src, str) else src
    de = differentiate(e)
    return HoloFun(lambda z: evaluate(e, z), lambda z: evaluate(de, z), label or to_text(e))
