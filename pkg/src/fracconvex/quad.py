"""Adaptive Gauss-Kronrod quadrature with endpoint-singularity support.

Every subinterval is integrated with the 7-point Gauss rule and its
15-point Kronrod extension; the local error is ``|K15 - G7|`` and the
interval with the largest error is bisected first. Ties are broken by the
left endpoint so the subdivision sequence is a total order and results are
reproducible to the last bit.

Integrands are called with a numpy array of abscissae and may return an
array of the same shape or a scalar. Scalar-only callables are detected
(TypeError / shape mismatch) and evaluated point by point.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import ConvergenceError, DomainError, EvaluationError

__all__ = [
    "Endpoint",
    "Singularity",
    "QuadratureSpec",
    "QuadResult",
    "integrate",
    "integrate_singular_transformed",
    "sample",
]

# Kronrod abscissae on [0, 1); odd indices are the Gauss points.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])  # 15 nodes on (-1, 1)
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_W = np.zeros(15)
_GAUSS_W[1:7:2] = _WG[:3]
_GAUSS_W[7] = _WG[3]
_GAUSS_W[9:15:2] = _WG[2::-1]


class Endpoint(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class Singularity:
    """Integrand behaves like ``distance_to(endpoint) ** exponent``."""

    endpoint: Endpoint
    exponent: float

    def __post_init__(self):
        object.__setattr__(self, "endpoint", Endpoint(self.endpoint))
        if not (-1.0 < self.exponent <= 0.0):
            raise DomainError(f"singularity exponent must lie in (-1, 0], got {self.exponent!r}")


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000
    singularity: Optional[Singularity] = None

    def __post_init__(self):
        if not self.abs_tol > 0.0:
            raise DomainError("abs_tol must be positive")
        if not self.rel_tol > 0.0:
            raise DomainError("rel_tol must be positive")
        if int(self.max_subdivisions) < 1:
            raise DomainError("max_subdivisions must be at least 1")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    subdivisions_used: int

    def scaled(self, factor: float) -> "QuadResult":
        return QuadResult(self.value * factor, self.error_estimate * abs(factor), self.subdivisions_used)


def sample(f: Callable, x: np.ndarray) -> np.ndarray:
    """Evaluate ``f`` on an array of points, raising on non-finite output."""
    try:
        with np.errstate(all="ignore"):
            y = np.asarray(f(x), dtype=float)
        if y.shape != x.shape:
            y = np.broadcast_to(y, x.shape).astype(float)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, EvaluationError):
            raise
        y = np.array([float(f(float(v))) for v in x])
    bad = ~np.isfinite(y)
    if bad.any():
        where = float(x[np.argmax(bad)])
        raise EvaluationError(f"integrand is not finite at x = {where!r}", location=where)
    return y


def _gk(values: np.ndarray, half: float) -> tuple[float, float]:
    k = half * float(np.dot(_KRONROD_W, values))
    g = half * float(np.dot(_GAUSS_W, values))
    return k, abs(k - g)


def _rule_on(f, pieces: list[tuple[float, float]]) -> list[tuple[float, float, float, float]]:
    lo = np.array([p[0] for p in pieces])
    hi = np.array([p[1] for p in pieces])
    centers = 0.5 * (lo + hi)
    halves = 0.5 * (hi - lo)
    x = centers[:, None] + halves[:, None] * _NODES[None, :]
    # Nodes of very narrow intervals can round onto an endpoint.
    x = np.clip(x, np.nextafter(lo, hi)[:, None], np.nextafter(hi, lo)[:, None]).ravel()
    y = sample(f, x).reshape(len(pieces), 15)
    out = []
    for (a, b), h, row in zip(pieces, halves, y):
        value, err = _gk(row, float(h))
        out.append((a, b, value, err))
    return out


def _power_rule_error(sigma: float) -> float:
    """Relative error of the K15 rule on ``s ** sigma`` over [0, 1]."""
    s = 0.5 * (_NODES + 1.0)
    approx = 0.5 * float(np.dot(_KRONROD_W, s ** sigma))
    exact = 1.0 / (sigma + 1.0)
    return abs(approx - exact) / exact


def _graded_partition(a: float, b: float, singularity: Optional[Singularity], levels: int = 8):
    if singularity is None:
        return [(a, b)]
    offsets = [(b - a) * 2.0 ** -j for j in range(1, levels + 1)]
    if singularity.endpoint is Endpoint.RIGHT:
        cuts = [b - d for d in offsets]
    else:
        cuts = [a + d for d in offsets]
    pts = [a] + sorted(cuts) + [b]
    return list(zip(pts[:-1], pts[1:]))


def integrate(f: Callable, a: float, b: float, spec: Optional[QuadratureSpec] = None) -> QuadResult:
    """Integrate ``f`` over ``[a, b]`` adaptively.

    If ``spec.singularity`` is set, the starting mesh is graded geometrically
    toward the singular endpoint; the integrand itself is left untouched.
    Raises ConvergenceError (carrying the best value) when the subdivision
    budget or floating-point resolution runs out first.
    """
    spec = spec or QuadratureSpec()
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise DomainError(f"integrate needs finite a < b, got [{a!r}, {b!r}]")
    budget = int(spec.max_subdivisions)
    pieces = _graded_partition(a, b, spec.singularity)
    if len(pieces) > budget:
        pieces = [(a, b)]

    # |K - G| underestimates the error next to an integrable singularity,
    # so floor it with the rule's known error on the model power function.
    if spec.singularity is not None:
        floor = 2.0 * _power_rule_error(spec.singularity.exponent)
        touches = (lambda lo, hi: lo == a) if spec.singularity.endpoint is Endpoint.LEFT else (lambda lo, hi: hi == b)
    else:
        floor = 0.0
        touches = None

    def push(rows):
        for lo, hi, value, err in rows:
            if touches is not None and touches(lo, hi):
                err = max(err, floor * abs(value))
            heapq.heappush(heap, (-err, lo, hi, value))

    heap = []
    push(_rule_on(f, pieces))
    stuck = []  # intervals too narrow to bisect further

    def totals():
        items = sorted([(lo, v, -ne) for ne, lo, _, v in heap] + [(lo, v, e) for lo, _, v, e in stuck])
        return math.fsum(v for _, v, _ in items), math.fsum(e for _, _, e in items)

    while True:
        total, err_total = totals()
        if err_total <= spec.tolerance(total):
            return QuadResult(total, err_total, len(heap) + len(stuck))
        if not heap or len(heap) + len(stuck) >= budget:
            break
        neg_err, lo, hi, value = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi) or (hi - lo) <= 8 * math.ulp(max(abs(lo), abs(hi))):
            stuck.append((lo, hi, value, -neg_err))
            continue
        push(_rule_on(f, [(lo, mid), (mid, hi)]))

    total, err_total = totals()
    reason = "subdivision budget exhausted" if heap else "floating-point resolution reached"
    raise ConvergenceError(
        f"{reason} on [{a!r}, {b!r}]: estimate {err_total:.3e} above tolerance {spec.tolerance(total):.3e}",
        value=total,
        error_estimate=err_total,
        subdivisions_used=len(heap) + len(stuck),
    )


def integrate_singular_transformed(
    g: Callable,
    a: float,
    b: float,
    sigma: float,
    endpoint: Endpoint | str,
    spec: Optional[QuadratureSpec] = None,
) -> QuadResult:
    """Integrate ``dist(xi) ** sigma * g(xi)`` over ``[a, b]``.

    ``dist`` is ``b - xi`` for a right-endpoint singularity and ``xi - a``
    for a left one. The substitution ``w = dist ** (sigma + 1)`` turns the
    weakly singular problem into the bounded integral
    ``1/(sigma+1) * int_0^W g(xi(w)) dw`` with ``W = (b - a) ** (sigma + 1)``.
    """
    spec = spec or QuadratureSpec()
    endpoint = Endpoint(endpoint)
    sigma = float(sigma)
    if not (-1.0 < sigma <= 0.0):
        raise DomainError(f"sigma must lie in (-1, 0], got {sigma!r}")
    a = float(a)
    b = float(b)
    if not a < b:
        raise DomainError(f"integrate_singular_transformed needs a < b, got [{a!r}, {b!r}]")
    q = sigma + 1.0
    inv_q = 1.0 / q
    upper = (b - a) ** q

    if endpoint is Endpoint.RIGHT:
        def h(w):
            return g(b - np.power(w, inv_q))
    else:
        def h(w):
            return g(a + np.power(w, inv_q))

    inner = replace(spec, abs_tol=spec.abs_tol * q, singularity=None)
    try:
        res = integrate(h, 0.0, upper, inner)
    except ConvergenceError as exc:
        raise ConvergenceError(
            str(exc), exc.value * inv_q, exc.error_estimate * inv_q, exc.subdivisions_used
        ) from exc
    return res.scaled(inv_q)
