"""Scalar expressions in the two variables x and y.

This is the single entry point for user-defined right-hand sides: a small
recursive-descent parser, exact symbolic differentiation, a safe
tree-walking evaluator, and compiled fast paths (scalar and numpy) used by
the numerical layers.

Grammar
-------
::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ('^' factor)?
    atom   := number | 'x' | 'y' | func '(' expr ')' | '(' expr ')' | '-' atom

'^' is right-associative and unary minus binds tighter than '^', so
``-x^2`` means ``(-x)^2``.  Functions: sin, cos, exp, sqrt, abs.  Constants
are decimal literals (optionally with an exponent part); there are no named
constants.

Expressions are immutable; every operation here is pure.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import (
    NonFiniteError,
    NotDifferentiableError,
    ParseError,
    UnknownIdentifierError,
)

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Unary",
    "Binary",
    "parse",
    "unparse",
    "evaluate",
    "differentiate",
    "variables",
    "scalar_function",
    "numpy_function",
]

# 'log' is produced by differentiation of general powers and is evaluable,
# but it is deliberately not part of the parser surface.
PARSE_FUNCS = ("sin", "cos", "exp", "sqrt", "abs")
UNARY_OPS = ("neg",) + PARSE_FUNCS + ("log",)
BINARY_OPS = ("add", "sub", "mul", "div", "pow")


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str  # "x" or "y"


@dataclass(frozen=True)
class Unary:
    op: str
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Const, Var, Unary, Binary]


# ----------------------------------------------------------------------
# Parsing
# ----------------------------------------------------------------------

_NUMBER_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class _Parser:
    def __init__(self, source: str):
        self.src = source
        self.pos = 0

    def _skip_ws(self) -> None:
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip_ws()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def parse(self) -> Expr:
        e = self.expr()
        self._skip_ws()
        if self.pos != len(self.src):
            raise ParseError(f"unexpected {self.src[self.pos]!r}", self.pos)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            c = self._peek()
            if c == "+":
                self.pos += 1
                e = Binary("add", e, self.term())
            elif c == "-":
                self.pos += 1
                e = Binary("sub", e, self.term())
            else:
                return e

    def term(self) -> Expr:
        e = self.factor()
        while True:
            c = self._peek()
            if c == "*":
                self.pos += 1
                e = Binary("mul", e, self.factor())
            elif c == "/":
                self.pos += 1
                e = Binary("div", e, self.factor())
            else:
                return e

    def factor(self) -> Expr:
        base = self.atom()
        if self._peek() == "^":
            self.pos += 1
            return Binary("pow", base, self.factor())
        return base

    def atom(self) -> Expr:
        c = self._peek()
        if c == "":
            raise ParseError("unexpected end of input", self.pos)
        if c == "-":
            self.pos += 1
            return Unary("neg", self.atom())
        if c == "(":
            self.pos += 1
            e = self.expr()
            if self._peek() != ")":
                raise ParseError("expected ')'", self.pos)
            self.pos += 1
            return e
        m = _NUMBER_RE.match(self.src, self.pos)
        if m:
            self.pos = m.end()
            return Const(float(m.group()))
        m = _IDENT_RE.match(self.src, self.pos)
        if m:
            name = m.group()
            start = self.pos
            self.pos = m.end()
            if self._peek() == "(":
                if name not in PARSE_FUNCS:
                    raise UnknownIdentifierError(f"unknown function {name!r}", start)
                self.pos += 1
                arg = self.expr()
                if self._peek() != ")":
                    raise ParseError("expected ')'", self.pos)
                self.pos += 1
                return Unary(name, arg)
            if name in ("x", "y"):
                return Var(name)
            raise UnknownIdentifierError(f"unknown identifier {name!r}", start)
        raise ParseError(f"unexpected {c!r}", self.pos)


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree.

    Raises ParseError (with byte offset) on malformed input and
    UnknownIdentifierError for names outside the supported set.
    """
    return _Parser(source).parse()


# ----------------------------------------------------------------------
# Printing
# ----------------------------------------------------------------------

# Precedence levels used by the canonical printer: add/sub 1, mul/div 2,
# pow 3, atoms (incl. unary minus and function calls) 4.
_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "pow": 3}


def _fmt_const(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _render(e: Expr, min_prec: int) -> str:
    if isinstance(e, Const):
        if e.value < 0 or math.copysign(1.0, e.value) < 0:
            # print as unary minus so the output stays inside the grammar
            inner = f"-{_fmt_const(-e.value)}"
            return inner if min_prec <= 4 else f"({inner})"
        return _fmt_const(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            s = f"-{_render(e.arg, 4)}"
            return s
        return f"{e.op}({_render(e.arg, 0)})"
    prec = _PREC[e.op]
    if e.op in ("add", "sub"):
        sym = "+" if e.op == "add" else "-"
        s = f"{_render(e.left, 1)} {sym} {_render(e.right, 2)}"
    elif e.op in ("mul", "div"):
        sym = "*" if e.op == "mul" else "/"
        s = f"{_render(e.left, 2)}{sym}{_render(e.right, 3)}"
    else:  # pow: base must sit at atom level, exponent at factor level
        s = f"{_render(e.left, 4)}^{_render(e.right, 3)}"
    return s if prec >= min_prec else f"({s})"


def unparse(e: Expr) -> str:
    """Canonical printer; ``parse(unparse(parse(s)))`` equals ``parse(s)``."""
    return _render(e, 0)


# ----------------------------------------------------------------------
# Evaluation
# ----------------------------------------------------------------------


def _check_finite(v: float) -> float:
    if not math.isfinite(v):
        raise NonFiniteError(f"non-finite intermediate value {v!r}")
    return v


def evaluate(e: Expr, x: float, y: float) -> float:
    """Recursive double-precision evaluation.

    Raises NonFiniteError if the result or any intermediate is NaN or
    infinite (division by zero, sqrt of a negative, overflow, ...).
    """
    try:
        return _eval(e, x, y)
    except (ZeroDivisionError, ValueError, OverflowError) as exc:
        raise NonFiniteError(str(exc)) from exc


def _eval(e: Expr, x: float, y: float) -> float:
    if isinstance(e, Const):
        return _check_finite(e.value)
    if isinstance(e, Var):
        return _check_finite(x if e.name == "x" else y)
    if isinstance(e, Unary):
        a = _eval(e.arg, x, y)
        if e.op == "neg":
            return -a
        if e.op == "abs":
            return abs(a)
        return _check_finite(getattr(math, e.op)(a))
    l = _eval(e.left, x, y)
    r = _eval(e.right, x, y)
    if e.op == "add":
        v = l + r
    elif e.op == "sub":
        v = l - r
    elif e.op == "mul":
        v = l * r
    elif e.op == "div":
        v = l / r
    else:
        v = l**r
        if isinstance(v, complex):  # negative base, fractional exponent
            raise NonFiniteError(f"complex power {l!r} ** {r!r}")
    return _check_finite(v)


# ----------------------------------------------------------------------
# Differentiation
# ----------------------------------------------------------------------


def _fold_unary(op: str, a: Expr) -> Expr:
    if isinstance(a, Const):
        try:
            return Const(_eval(Unary(op, a), 0.0, 0.0))
        except NonFiniteError:
            pass
    return Unary(op, a)


def _neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    return Unary("neg", a)


def _add(a: Expr, b: Expr) -> Expr:
    if a == Const(0.0):
        return b
    if b == Const(0.0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(_check_finite(a.value + b.value))
    return Binary("add", a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if b == Const(0.0):
        return a
    if a == Const(0.0):
        return _neg(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(_check_finite(a.value - b.value))
    return Binary("sub", a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if a == Const(0.0) or b == Const(0.0):
        return Const(0.0)
    if a == Const(1.0):
        return b
    if b == Const(1.0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(_check_finite(a.value * b.value))
    return Binary("mul", a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if a == Const(0.0):
        return Const(0.0)
    if b == Const(1.0):
        return a
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0.0:
        return Const(_check_finite(a.value / b.value))
    return Binary("div", a, b)


def _pow(a: Expr, b: Expr) -> Expr:
    if b == Const(1.0):
        return a
    if b == Const(0.0):
        return Const(1.0)
    if isinstance(a, Const) and isinstance(b, Const):
        try:
            return Const(_eval(Binary("pow", a, b), 0.0, 0.0))
        except NonFiniteError:
            pass
    return Binary("pow", a, b)


def _contains_abs(e: Expr) -> bool:
    if isinstance(e, Unary):
        return e.op == "abs" or _contains_abs(e.arg)
    if isinstance(e, Binary):
        return _contains_abs(e.left) or _contains_abs(e.right)
    return False


def differentiate(e: Expr, var: str) -> Expr:
    """Exact symbolic derivative with respect to ``var`` ("x" or "y").

    Constant-only subtrees are folded; no further simplification is
    guaranteed.  Powers with a constant exponent c use the rule
    c * u^(c-1) * u'; non-constant exponents are rewritten through the
    exp/log equivalence and are only valid where the base is positive.
    Trees containing abs are rejected.
    """
    if var not in ("x", "y"):
        raise ValueError(f"var must be 'x' or 'y', got {var!r}")
    if _contains_abs(e):
        raise NotDifferentiableError("abs is not differentiable at 0; rejected")
    return _diff(e, var)


def _diff(e: Expr, var: str) -> Expr:
    if isinstance(e, Const):
        return Const(0.0)
    if isinstance(e, Var):
        return Const(1.0) if e.name == var else Const(0.0)
    if isinstance(e, Unary):
        da = _diff(e.arg, var)
        if e.op == "neg":
            return _neg(da)
        if e.op == "sin":
            return _mul(_fold_unary("cos", e.arg), da)
        if e.op == "cos":
            return _neg(_mul(_fold_unary("sin", e.arg), da))
        if e.op == "exp":
            return _mul(_fold_unary("exp", e.arg), da)
        if e.op == "sqrt":
            return _div(da, _mul(Const(2.0), _fold_unary("sqrt", e.arg)))
        if e.op == "log":
            return _div(da, e.arg)
        raise NotDifferentiableError(f"cannot differentiate {e.op}")
    dl = _diff(e.left, var)
    dr = _diff(e.right, var)
    if e.op == "add":
        return _add(dl, dr)
    if e.op == "sub":
        return _sub(dl, dr)
    if e.op == "mul":
        return _add(_mul(dl, e.right), _mul(e.left, dr))
    if e.op == "div":
        num = _sub(_mul(dl, e.right), _mul(e.left, dr))
        return _div(num, _pow(e.right, Const(2.0)))
    # pow
    if isinstance(e.right, Const):
        c = e.right.value
        return _mul(_mul(Const(c), _pow(e.left, Const(c - 1.0))), dl)
    # u^v = exp(v*log(u)), valid for u > 0
    term = _add(
        _mul(dr, Unary("log", e.left)),
        _mul(e.right, _div(dl, e.left)),
    )
    return _mul(Binary("pow", e.left, e.right), term)


def variables(e: Expr) -> set[str]:
    """Set of variable names appearing in the tree."""
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Unary):
        return variables(e.arg)
    if isinstance(e, Binary):
        return variables(e.left) | variables(e.right)
    return set()


# ----------------------------------------------------------------------
# Compiled fast paths
# ----------------------------------------------------------------------


def _guarded_pow(a: float, b: float) -> float:
    if a < 0.0 and b != int(b):
        raise NonFiniteError(f"negative base {a!r} to fractional power {b!r}")
    return a**b


def _emit(e: Expr, fn_prefix: str) -> str:
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        a = _emit(e.arg, fn_prefix)
        if e.op == "neg":
            return f"(-{a})"
        if e.op == "abs":
            return f"{fn_prefix}abs({a})"
        return f"{fn_prefix}{e.op}({a})"
    l = _emit(e.left, fn_prefix)
    r = _emit(e.right, fn_prefix)
    if e.op == "pow":
        # integer constant exponents compile to '**int': always real-valued
        if isinstance(e.right, Const) and e.right.value == int(e.right.value):
            return f"({l})**({int(e.right.value)})"
        return f"{fn_prefix}pow({l},{r})"
    sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[e.op]
    return f"({l}{sym}{r})"


_SCALAR_ENV = {
    "_sin": math.sin,
    "_cos": math.cos,
    "_exp": math.exp,
    "_sqrt": math.sqrt,
    "_log": math.log,
    "_abs": abs,
    "_pow": _guarded_pow,
}

_NUMPY_ENV = {
    "_sin": np.sin,
    "_cos": np.cos,
    "_exp": np.exp,
    "_sqrt": np.sqrt,
    "_log": np.log,
    "_abs": np.abs,
    "_pow": np.power,
}


def scalar_function(*exprs: Expr) -> Callable[..., tuple[float, ...]]:
    """Compile one or more expressions into a fast scalar callable.

    The returned function maps (x, y) to a tuple of values and raises
    NonFiniteError when any output is non-finite or an arithmetic error
    occurs.  Unlike :func:`evaluate` it does not inspect every
    intermediate, which only matters for exotic inf-cancellation inputs.
    """
    body = ",".join(_emit(e, "_") for e in exprs)
    env = dict(_SCALAR_ENV)
    raw = eval(f"lambda x,y: ({body},)", env)  # noqa: S307 - internal codegen
    isfinite = math.isfinite

    def call(x: float, y: float) -> tuple[float, ...]:
        try:
            out = raw(x, y)
        except (ZeroDivisionError, ValueError, OverflowError) as exc:
            raise NonFiniteError(str(exc)) from exc
        for v in out:
            if not isfinite(v):
                raise NonFiniteError(f"non-finite value {v!r} at ({x}, {y})")
        return out

    return call


def numpy_function(*exprs: Expr) -> Callable[..., tuple[np.ndarray, ...]]:
    """Compile expressions into a vectorized callable on numpy arrays.

    Invalid operations yield NaN/inf entries (no exception); callers are
    expected to mask with ``np.isfinite``.
    """
    body = ",".join(_emit(e, "_") for e in exprs)
    env = dict(_NUMPY_ENV)
    raw = eval(f"lambda x,y: ({body},)", env)  # noqa: S307 - internal codegen

    def call(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, ...]:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        with np.errstate(all="ignore"):
            out = raw(x, y)
        return tuple(np.broadcast_to(v, x.shape).astype(float) for v in out)

    return call
