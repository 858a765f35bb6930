"""Caputo fractional derivatives of user functions.

The n-th classical derivative is taken first (symbolically when the
function carries an expression) and then integrated against the power
kernel. For ``n - alpha <= 1`` the kernel is weakly singular at the
evaluation point and is removed by an exact change of variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .exprlang import as_function
from .quad import Endpoint, QuadratureSpec, integrate, integrate_singular_transformed
from .specfun import gamma


@dataclass(frozen=True)
class FracOrder:
    """Integer derivative order ``n`` and fractional shift ``alpha``.

    The kernel exponent is ``p - 1`` with ``p = n - alpha``.
    """

    n: int = 1
    alpha: float = 0.5

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        alpha = float(self.alpha)
        if not (0.0 <= alpha < 1.0):
            raise DomainError(f"alpha must lie in [0, 1), got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)

    @property
    def p(self) -> float:
        return self.n - self.alpha

    @classmethod
    def from_p(cls, p: float) -> "FracOrder":
        """The unique order with ``n - alpha == p`` for ``p > 0``."""
        p = float(p)
        if not p > 0.0:
            raise DomainError(f"p must be positive to define an order, got {p!r}")
        n = math.ceil(p)
        return cls(n, n - p)


def _kernel_integral(dn, lo: float, hi: float, sigma: float, endpoint: Endpoint, spec: QuadratureSpec):
    if sigma <= 0.0:
        return integrate_singular_transformed(dn, lo, hi, sigma, endpoint, spec)
    if endpoint is Endpoint.RIGHT:
        return integrate(lambda s: np.power(hi - s, sigma) * dn(s), lo, hi, spec)
    return integrate(lambda s: np.power(s - lo, sigma) * dn(s), lo, hi, spec)


def caputo_left(f, a: float, x: float, order: FracOrder = FracOrder(), spec: Optional[QuadratureSpec] = None,
                full_output: bool = False):
    """Left-sided Caputo derivative of ``f`` with base point ``a``, at ``x``.

    ``f`` may be an expression string, an Expr, a callable or a
    RealFunction. With ``full_output=True`` returns ``(value, error_estimate)``.
    """
    a, x = float(a), float(x)
    if not a < x:
        raise DomainError(f"caputo_left needs a < x, got a={a!r}, x={x!r}")
    spec = spec or QuadratureSpec()
    dn = as_function(f).derivative(order.n)
    res = _kernel_integral(dn, a, x, order.p - 1.0, Endpoint.RIGHT, spec)
    res = res.scaled(1.0 / gamma(order.p))
    return (res.value, res.error_estimate) if full_output else res.value


def caputo_right(f, x: float, b: float, order: FracOrder = FracOrder(), spec: Optional[QuadratureSpec] = None,
                 full_output: bool = False):
    """Right-sided Caputo derivative of ``f`` with end point ``b``, at ``x``."""
    x, b = float(x), float(b)
    if not x < b:
        raise DomainError(f"caputo_right needs x < b, got x={x!r}, b={b!r}")
    spec = spec or QuadratureSpec()
    dn = as_function(f).derivative(order.n)
    res = _kernel_integral(dn, x, b, order.p - 1.0, Endpoint.LEFT, spec)
    sign = -1.0 if order.n % 2 else 1.0
    res = res.scaled(sign / gamma(order.p))
    return (res.value, res.error_estimate) if full_output else res.value


@dataclass(frozen=True)
class CaputoLimitCheck:
    at_alpha_near_1: float
    classical_derivative: float
    at_alpha_near_0: float
    increment: float


def caputo_limit_check(f, a: float, x: float, n: int = 1, spec: Optional[QuadratureSpec] = None,
                       eps: float = 1e-3) -> CaputoLimitCheck:
    """Compare Caputo derivatives near the ends of the alpha range with their limits.

    As alpha -> 1 the order-(n, alpha) derivative tends to ``f^(n)(x)``; as
    alpha -> 0 it tends to the Taylor remainder of order n around ``a``,
    which is ``f(x) - f(a)`` when ``n == 1``.
    """
    fn = as_function(f)
    spec = spec or QuadratureSpec()
    near_1 = caputo_left(fn, a, x, FracOrder(n, 1.0 - eps), spec)
    near_0 = caputo_left(fn, a, x, FracOrder(n, eps), spec)
    classical = float(fn.derivative(n)(float(x)))
    taylor = sum(float(fn.derivative(k)(float(a))) * (x - a) ** k / math.factorial(k) for k in range(n))
    increment = float(fn.func(float(x))) - taylor
    return CaputoLimitCheck(near_1, classical, near_0, increment)
