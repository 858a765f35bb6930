"""A small single-variable expression language.

Grammar (``^`` is right-associative)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' factor)?
    atom   := number | 'x' | func '(' expr ')' | '(' expr ')' | '-' atom
    func   := 'exp' | 'ln' | 'sqrt' | 'abs'

A negated atom may not be the base of ``^``: ``-x^2`` is rejected because
it reads both ways; write ``(-x)^2`` or ``-(x^2)``. The typographic minus
sign U+2212 is accepted wherever ``-`` is. Numbers are decimal with an
optional exponent.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .errors import EvaluationError, ExprSyntaxError, UnsupportedOperationError

GRAMMAR_VERSION = "1"

UNARY_OPS = ("neg", "exp", "ln", "sqrt", "abs")
FUNCTIONS = ("exp", "ln", "sqrt", "abs")
BINARY_OPS = ("+", "-", "*", "/", "^")


@dataclass(frozen=True)
class Literal:
    value: float


@dataclass(frozen=True)
class Var:
    name: str = "x"


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Literal, Var, Unary, Binary]


# --------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()−])
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str  # number, ident, op, end
    text: str
    offset: int  # byte offset


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    byte_pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", byte_pos)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            if text == "−":
                text = "-"
            tokens.append(_Token(kind, text, byte_pos))
        byte_pos += len(m.group().encode("utf-8"))
        pos = m.end()
    tokens.append(_Token("end", "", byte_pos))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def fail(self, expected):
        t = self.tok
        what = "end of input" if t.kind == "end" else f"token {t.text!r}"
        raise ExprSyntaxError(f"unexpected {what}", t.offset, expected)

    def expect(self, text: str):
        if self.tok.kind == "op" and self.tok.text == text:
            return self.advance()
        self.fail({text})

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            self.fail({"+", "-", "*", "/", "^", "end of input"})
        return e

    def expr(self) -> Expr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = Binary(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        negated = self.tok.kind == "op" and self.tok.text == "-"
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            if negated:
                raise ExprSyntaxError(
                    "ambiguous '-' before '^'; write (-a)^b or -(a^b)", self.tok.offset
                )
            self.advance()
            return Binary("^", base, self.factor())
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "number":
            self.advance()
            return Literal(float(t.text))
        if t.kind == "ident":
            if t.text == "x":
                self.advance()
                return Var()
            if t.text in FUNCTIONS:
                self.advance()
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Unary(t.text, inner)
            raise ExprSyntaxError(f"unknown identifier {t.text!r}", t.offset, {"x", *FUNCTIONS})
        if t.kind == "op" and t.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if t.kind == "op" and t.text == "-":
            self.advance()
            return Unary("neg", self.atom())
        self.fail({"number", "x", "(", "-", *FUNCTIONS})


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree.

    >>> parse("exp(x) + 1")
    Binary(op='+', left=Unary(op='exp', operand=Var(name='x')), right=Literal(value=1.0))
    """
    if not isinstance(source, str):
        raise TypeError("parse expects a string")
    parser = _Parser(source)
    try:
        return parser.parse()
    except RecursionError:
        raise ExprSyntaxError("expression nested too deeply", parser.tok.offset) from None


# --------------------------------------------------------------------------
# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}


def _fmt_number(v: float) -> str:
    v = float(v)
    text = str(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)
    return f"({text})" if text.startswith("-") else text


def to_source(e: Expr) -> str:
    """Render ``e`` so that ``parse(to_source(e))`` rebuilds the same tree."""
    if isinstance(e, Literal):
        return _fmt_number(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Unary):
        inner = to_source(e.operand)
        if e.op == "neg":
            if isinstance(e.operand, Binary):
                inner = f"({inner})"
            return f"-{inner}"
        return f"{e.op}({inner})"
    prec = _PREC[e.op]
    left = to_source(e.left)
    right = to_source(e.right)
    if e.op == "^":
        if isinstance(e.left, Binary) or (isinstance(e.left, Unary) and e.left.op == "neg"):
            left = f"({left})"
        if isinstance(e.right, Binary) and _PREC[e.right.op] < prec:
            right = f"({right})"
    else:
        if isinstance(e.left, Binary) and _PREC[e.left.op] < prec:
            left = f"({left})"
        if isinstance(e.right, Binary) and _PREC[e.right.op] <= prec:
            right = f"({right})"
    return f"{left}{e.op}{right}"


# --------------------------------------------------------------------------
# evaluation

def _fail_where(mask, x, message):
    if np.ndim(mask) == 0:
        if mask:
            loc = float(x)
            raise EvaluationError(f"{message} at x = {loc!r}", location=loc)
        return
    if np.any(mask):
        loc = float(np.broadcast_to(x, np.shape(mask))[np.argmax(mask)])
        raise EvaluationError(f"{message} at x = {loc!r}", location=loc)


def compile_expr(e: Expr) -> Callable:
    """Compile ``e`` to a numpy-vectorised callable that raises on domain errors."""
    if isinstance(e, Literal):
        v = e.value
        return lambda x: np.full(np.shape(x), v) if np.ndim(x) else v
    if isinstance(e, Var):
        return lambda x: x
    if isinstance(e, Unary):
        inner = compile_expr(e.operand)
        if e.op == "neg":
            return lambda x: -inner(x)
        if e.op == "abs":
            return lambda x: np.abs(inner(x))
        if e.op == "exp":
            def _exp(x):
                u = inner(x)
                with np.errstate(over="ignore"):
                    out = np.exp(u)
                _fail_where(~np.isfinite(out), x, "exp overflow")
                return out
            return _exp
        if e.op == "ln":
            def _ln(x):
                u = inner(x)
                _fail_where(np.asarray(u) <= 0, x, "ln of a non-positive number")
                return np.log(u)
            return _ln
        if e.op == "sqrt":
            def _sqrt(x):
                u = inner(x)
                _fail_where(np.asarray(u) < 0, x, "sqrt of a negative number")
                return np.sqrt(u)
            return _sqrt
        raise ValueError(f"unknown unary operator {e.op!r}")

    lf = compile_expr(e.left)
    rf = compile_expr(e.right)
    if e.op == "+":
        return lambda x: lf(x) + rf(x)
    if e.op == "-":
        return lambda x: lf(x) - rf(x)
    if e.op == "*":
        def _mul(x):
            with np.errstate(over="ignore", invalid="ignore"):
                out = lf(x) * rf(x)
            _fail_where(~np.isfinite(out), x, "non-finite product")
            return out
        return _mul
    if e.op == "/":
        def _div(x):
            num = lf(x)
            den = rf(x)
            _fail_where(np.asarray(den) == 0, x, "division by zero")
            with np.errstate(over="ignore"):
                out = num / den
            _fail_where(~np.isfinite(out), x, "non-finite quotient")
            return out
        return _div
    if e.op == "^":
        integer_exponent = isinstance(e.right, Literal) and float(e.right.value).is_integer()

        def _pow(x):
            base = np.asarray(lf(x), dtype=float)
            expo = np.asarray(rf(x), dtype=float)
            if not integer_exponent:
                frac = expo != np.round(expo)
                _fail_where(np.logical_and(base < 0, frac), x, "negative base with non-integer exponent")
            _fail_where(np.logical_and(base == 0, expo < 0), x, "zero to a negative power")
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                out = np.power(base, expo)
            _fail_where(~np.isfinite(out), x, "non-finite power")
            return out if np.ndim(out) else float(out)
        return _pow
    raise ValueError(f"unknown binary operator {e.op!r}")


def evaluate(e: Expr, x: float) -> float:
    """Evaluate ``e`` at a scalar point."""
    value = compile_expr(e)(float(x))
    value = float(value)
    if not math.isfinite(value):
        raise EvaluationError(f"non-finite value at x = {x!r}", location=float(x))
    return value


# --------------------------------------------------------------------------
# differentiation

def _is_const(e: Expr) -> bool:
    if isinstance(e, Literal):
        return True
    if isinstance(e, Var):
        return False
    if isinstance(e, Unary):
        return _is_const(e.operand)
    return _is_const(e.left) and _is_const(e.right)


def _lit(v: float) -> Literal:
    return Literal(float(v))


def _try_fold(e: Expr) -> Expr:
    try:
        v = evaluate(e, 0.0)
    except (EvaluationError, OverflowError, ZeroDivisionError):
        return e
    return _lit(v)


def neg(a: Expr) -> Expr:
    if isinstance(a, Literal):
        return _lit(-a.value)
    if isinstance(a, Unary) and a.op == "neg":
        return a.operand
    return Unary("neg", a)


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Literal) and isinstance(b, Literal):
        return _lit(a.value + b.value)
    if a == Literal(0.0):
        return b
    if b == Literal(0.0):
        return a
    return Binary("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Literal) and isinstance(b, Literal):
        return _lit(a.value - b.value)
    if b == Literal(0.0):
        return a
    if a == Literal(0.0):
        return neg(b)
    return Binary("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Literal) and isinstance(b, Literal):
        return _lit(a.value * b.value)
    if a == Literal(0.0) or b == Literal(0.0):
        return _lit(0.0)
    if a == Literal(1.0):
        return b
    if b == Literal(1.0):
        return a
    return Binary("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if b == Literal(1.0):
        return a
    if a == Literal(0.0) and not b == Literal(0.0):
        return _lit(0.0)
    node = Binary("/", a, b)
    return _try_fold(node) if _is_const(node) else node


def power(a: Expr, b: Expr) -> Expr:
    if b == Literal(1.0):
        return a
    if b == Literal(0.0):
        return _lit(1.0)
    node = Binary("^", a, b)
    return _try_fold(node) if _is_const(node) else node


def differentiate(e: Expr) -> Expr:
    """Symbolic d/dx with constant folding.

    ``abs`` has no derivative at 0 and is rejected with
    UnsupportedOperationError.

    >>> to_source(differentiate(parse("x^2")))
    '2*x'
    """
    if isinstance(e, Literal):
        return _lit(0.0)
    if isinstance(e, Var):
        return _lit(1.0)
    if isinstance(e, Unary):
        u = e.operand
        du = differentiate(u)
        if e.op == "neg":
            return neg(du)
        if e.op == "exp":
            return mul(e, du)
        if e.op == "ln":
            return div(du, u)
        if e.op == "sqrt":
            return div(du, mul(_lit(2.0), e))
        raise UnsupportedOperationError(f"cannot differentiate {e.op}({to_source(u)})")

    u, v = e.left, e.right
    if e.op in "+-":
        du, dv = differentiate(u), differentiate(v)
        return add(du, dv) if e.op == "+" else sub(du, dv)
    if e.op == "*":
        return add(mul(differentiate(u), v), mul(u, differentiate(v)))
    if e.op == "/":
        return div(sub(mul(differentiate(u), v), mul(u, differentiate(v))), power(v, _lit(2.0)))
    # e.op == "^"
    if _is_const(v):
        c = _try_fold(v)
        exponent = sub(c, _lit(1.0)) if isinstance(c, Literal) else sub(v, _lit(1.0))
        return mul(mul(c, power(u, exponent)), differentiate(u))
    if _is_const(u):
        return mul(mul(Unary("ln", u), e), differentiate(v))
    # u^v * (v' ln u + v u'/u)
    return mul(e, add(mul(differentiate(v), Unary("ln", u)), div(mul(v, differentiate(u)), u)))


# --------------------------------------------------------------------------
# functions with domains

def _fd_step(x):
    return np.finfo(float).eps ** (1.0 / 3.0) * np.maximum(1.0, np.abs(x))


def _central_difference(f: Callable, order: int) -> Callable:
    if order == 0:
        return f
    lower = _central_difference(f, order - 1)

    def d(x):
        h = _fd_step(x)
        return (lower(x + h) - lower(x - h)) / (2.0 * h)

    return d


@dataclass(frozen=True)
class RealFunction:
    """A real function of one variable on a closed interval.

    Built either from an expression (``from_source``) or a Python callable.
    Derivatives come from symbolic differentiation when an expression is
    available and from central finite differences otherwise.
    """

    func: Callable
    domain: tuple[float, float] = (-math.inf, math.inf)
    expr: Optional[Expr] = None
    derivative_funcs: tuple = ()
    source: Optional[str] = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_source(cls, source: str, domain=(-math.inf, math.inf)) -> "RealFunction":
        e = parse(source)
        return cls(compile_expr(e), tuple(map(float, domain)), e, (), source.strip())

    @classmethod
    def from_expr(cls, e: Expr, domain=(-math.inf, math.inf)) -> "RealFunction":
        return cls(compile_expr(e), tuple(map(float, domain)), e, (), to_source(e))

    @classmethod
    def from_callable(cls, func: Callable, domain=(-math.inf, math.inf), derivatives=(), name=None):
        return cls(func, tuple(map(float, domain)), None, tuple(derivatives), name)

    @property
    def label(self) -> str:
        return self.source if self.source is not None else getattr(self.func, "__name__", "f")

    def with_domain(self, domain) -> "RealFunction":
        return RealFunction(self.func, tuple(map(float, domain)), self.expr, self.derivative_funcs, self.source)

    def _check_domain(self, x):
        lo, hi = self.domain
        arr = np.asarray(x, dtype=float)
        outside = (arr < lo) | (arr > hi)
        _fail_where(outside, arr, f"outside the domain [{lo}, {hi}]")

    def __call__(self, x):
        self._check_domain(x)
        y = self.func(x)
        if np.ndim(y) == 0:
            y = float(y)
            if not math.isfinite(y):
                raise EvaluationError(f"non-finite value at x = {float(x)!r}", location=float(x))
            return y
        y = np.asarray(y, dtype=float)
        _fail_where(~np.isfinite(y), x, "non-finite value")
        return y

    def symbolic_derivative(self, n: int) -> Optional[Expr]:
        if self.expr is None:
            return None
        key = ("expr", n)
        if key not in self._cache:
            e = self.expr
            try:
                for _ in range(n):
                    e = differentiate(e)
            except UnsupportedOperationError:
                e = None
            self._cache[key] = e
        return self._cache[key]

    def derivative(self, n: int = 1) -> Callable:
        """Vectorised callable for the n-th derivative."""
        if n < 0:
            raise ValueError("derivative order must be non-negative")
        if n == 0:
            return self
        if n <= len(self.derivative_funcs):
            return self.derivative_funcs[n - 1]
        key = ("callable", n)
        if key not in self._cache:
            e = self.symbolic_derivative(n)
            self._cache[key] = compile_expr(e) if e is not None else _central_difference(self.func, n)
        return self._cache[key]

    def has_symbolic_derivative(self, n: int = 1) -> bool:
        return n <= len(self.derivative_funcs) or self.symbolic_derivative(n) is not None


def as_function(f, domain=None) -> RealFunction:
    """Coerce an expression string, Expr, callable or RealFunction."""
    if isinstance(f, RealFunction):
        return f if domain is None else f.with_domain(domain)
    dom = (-math.inf, math.inf) if domain is None else domain
    if isinstance(f, str):
        return RealFunction.from_source(f, dom)
    if isinstance(f, (Literal, Var, Unary, Binary)):
        return RealFunction.from_expr(f, dom)
    if callable(f):
        return RealFunction.from_callable(f, dom)
    raise TypeError(f"cannot interpret {f!r} as a function")
