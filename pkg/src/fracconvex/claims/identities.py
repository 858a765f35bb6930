"""Integral identities linking weighted integrals of f^(n) to Caputo terms.

Two weights are involved, with ``p = n - alpha`` and ``u = t x + (1 - t) y``:

* first identity:  ``int_0^1 t (1 - t^p) f^(n)(u) dt``
* second identity: ``int_0^1 t^p (1 - t) f^(n)(u) dt``

The printed left-hand sides multiply a Gamma-weighted bracket by a Caputo
term evaluated at a point ``u`` that is never pinned down. How that term
is computed is selected by ``IdentityInterpretation``; the residual
``lhs - rhs`` is reported as is.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from ..errors import DomainError
from ..exprlang import as_function
from ..fraccalc import FracOrder, caputo_right
from ..quad import QuadratureSpec, QuadResult, integrate
from ..specfun import gamma

LEM1 = "LEM1-ID"
LEM2 = "LEM2-ID"


class UPoint(str, enum.Enum):
    EVAL_AT_Y = "y"
    EVAL_AT_X = "x"


class KernelBase(str, enum.Enum):
    AS_DEFINED = "def"  # the right-sided Caputo derivative with end point x, at u
    AS_USED_IN_PROOF = "proof"  # moments int (dist)^m f^(n) matched with Gamma(m+1)


@dataclass(frozen=True)
class IdentityInterpretation:
    u_point: UPoint = UPoint.EVAL_AT_Y
    caputo_kernel_base: KernelBase = KernelBase.AS_USED_IN_PROOF

    def __post_init__(self):
        object.__setattr__(self, "u_point", UPoint(self.u_point))
        object.__setattr__(self, "caputo_kernel_base", KernelBase(self.caputo_kernel_base))

    def as_dict(self) -> dict:
        return {"u_point": self.u_point.value, "caputo_kernel_base": self.caputo_kernel_base.value}

    @classmethod
    def parse(cls, text: str) -> "IdentityInterpretation":
        """Parse ``"u=y,kernel=proof"`` (either key may be omitted)."""
        fields = {}
        for part in filter(None, (s.strip() for s in text.split(","))):
            key, _, value = part.partition("=")
            key = key.strip()
            if key == "u":
                fields["u_point"] = value.strip()
            elif key == "kernel":
                fields["caputo_kernel_base"] = value.strip()
            else:
                raise ValueError(f"unknown interpretation key {key!r}")
        return cls(**fields)

    @classmethod
    def all(cls) -> list["IdentityInterpretation"]:
        return [cls(u, k) for u in UPoint for k in KernelBase]


def _weight(which: str, p: float):
    if which == LEM1:
        return lambda t: t * (1.0 - np.power(t, p))
    if which == LEM2:
        return lambda t: np.power(t, p) * (1.0 - t)
    raise DomainError(f"unknown identity {which!r}")


def lemma_rhs(which: str, f, y: float, x: float, order: FracOrder, spec: Optional[QuadratureSpec] = None,
              route: str = "t") -> QuadResult:
    """Weighted integral of f^(n) along the segment from y to x.

    ``route="t"`` integrates in the segment parameter t on [0, 1];
    ``route="u"`` substitutes u = t x + (1 - t) y and integrates on [y, x].
    """
    spec = spec or QuadratureSpec()
    dn = as_function(f).derivative(order.n)
    w = _weight(which, order.p)
    length = x - y
    if route == "t":
        return integrate(lambda t: w(t) * dn(t * x + (1.0 - t) * y), 0.0, 1.0, spec)
    if route == "u":
        res = integrate(lambda u: w((u - y) / length) * dn(u), y, x, spec)
        return res.scaled(1.0 / length)
    raise ValueError(f"unknown route {route!r}")


def _moment(dn, y: float, x: float, m: float, u_point: UPoint, spec: QuadratureSpec) -> QuadResult:
    if u_point is UPoint.EVAL_AT_Y:
        return integrate(lambda s: np.power(s - y, m) * dn(s), y, x, spec)
    return integrate(lambda s: np.power(x - s, m) * dn(s), y, x, spec)


def lemma_lhs(which: str, f, y: float, x: float, order: FracOrder, interp: IdentityInterpretation,
              spec: Optional[QuadratureSpec] = None) -> tuple[float, float]:
    """Printed left-hand side under ``interp``; returns ``(value, error_estimate)``."""
    spec = spec or QuadratureSpec()
    fn = as_function(f)
    p = order.p
    sign = -1.0 if order.n % 2 else 1.0
    length = x - y

    if interp.caputo_kernel_base is KernelBase.AS_DEFINED:
        if interp.u_point is UPoint.EVAL_AT_Y:
            cd, err = caputo_right(fn, y, x, order, spec, full_output=True)
        else:
            cd, err = 0.0, 0.0  # integral over the empty interval [x, x]
        if which == LEM1:
            bracket = sign * gamma(2.0) / length ** 2 - sign * gamma(p + 2.0) / length ** p
        else:
            bracket = sign / length ** (p + 1.0) * (gamma(p + 1.0) - gamma(p + 1.0) / length)
        return bracket * cd, abs(bracket) * err

    # As in the proof: each Gamma(m+1) multiplies its own moment-based term
    # D_m = (-1)^n / Gamma(m+1) * int (dist)^m f^(n).
    dn = fn.derivative(order.n)

    def caputo_term(m):
        res = _moment(dn, y, x, m, interp.u_point, spec)
        scale = sign / gamma(m + 1.0)
        return res.value * scale, res.error_estimate * abs(scale)

    if which == LEM1:
        d1, e1 = caputo_term(1.0)
        dp, ep = caputo_term(p + 1.0)
        c1 = sign * gamma(2.0) / length ** 2
        c2 = sign * gamma(p + 2.0) / length ** p
        return c1 * d1 - c2 * dp, abs(c1) * e1 + abs(c2) * ep
    d0, e0 = caputo_term(p)
    dp, ep = caputo_term(p + 1.0)
    c = sign / length ** (p + 1.0)
    c1 = c * gamma(p + 1.0)
    c2 = c * gamma(p + 1.0) / length
    return c1 * d0 - c2 * dp, abs(c1) * e0 + abs(c2) * ep


def derivative_positive(f, y: float, x: float, n: int, samples: int = 64) -> Optional[float]:
    """Return a sampled point of (y, x) where f^(n) <= 0, or None."""
    dn = as_function(f).derivative(n)
    pts = y + (x - y) * (np.arange(1, samples + 1) / (samples + 1))
    vals = np.broadcast_to(np.asarray(dn(pts), dtype=float), pts.shape)
    bad = vals <= 0
    return float(pts[np.argmax(bad)]) if np.any(bad) else None


@dataclass(frozen=True)
class IdentityCheck:
    identity: str
    lhs: float
    rhs: float
    residual: float
    relative_residual: float
    quadrature_error: float
    interpretation: IdentityInterpretation
    precondition: Optional[str] = None

    def as_dict(self) -> dict:
        d = asdict(self)
        d["interpretation"] = self.interpretation.as_dict()
        return d


def verify_identity(which: str, f, y: float, x: float, order: FracOrder,
                    interp: IdentityInterpretation = IdentityInterpretation(),
                    quad: Optional[QuadratureSpec] = None) -> IdentityCheck:
    """Evaluate both sides of an identity and report the residual without judgment.

    For the first identity a non-positive sampled f^(n) on (y, x) is recorded
    in ``precondition`` (and the sides are still evaluated).
    """
    if which not in (LEM1, LEM2):
        raise DomainError(f"unknown identity {which!r}")
    y, x = float(y), float(x)
    if not y < x:
        raise DomainError(f"identities need y < x, got y={y!r}, x={x!r}")
    quad = quad or QuadratureSpec()
    fn = as_function(f)
    precondition = None
    if which == LEM1:
        bad = derivative_positive(fn, y, x, order.n)
        if bad is not None:
            precondition = f"f^({order.n}) is not positive at {bad!r}"
    rhs = lemma_rhs(which, fn, y, x, order, quad)
    lhs, lhs_err = lemma_lhs(which, fn, y, x, order, interp, quad)
    residual = lhs - rhs.value
    rel = abs(residual) / max(abs(rhs.value), math.ulp(1.0))
    return IdentityCheck(which, lhs, rhs.value, residual, rel, lhs_err + rhs.error_estimate, interp, precondition)
