"""Grid-sampling membership tests for the (n - alpha)-convexity classes.

Everything here is a check on finitely many sample points. A ``holds``
verdict means "no violation on the grid", never a proof.

Throughout, ``p`` stands for the exponent ``n - alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, EvaluationError
from .exprlang import RealFunction, as_function
from .verdict import Verdict, VerdictKind

# Functions in both convexity classes map a subset of [1, inf) to R+.
DEFINITION_DOMAIN = (1.0, math.inf)

_REL_SLACK = 1e-12


def _slack(lhs, rhs):
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.nan_to_num(np.abs(rhs), posinf=0.0)))
    return _REL_SLACK * scale


def _check_p(p: float) -> float:
    p = float(p)
    if not (-1.0 < p <= 1.0):
        raise DomainError(f"p must lie in (-1, 1], got {p!r}")
    return p


def _check_interval(interval) -> tuple[float, float]:
    lo, hi = map(float, interval)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError(f"interval must be finite with lo < hi, got {interval!r}")
    if lo < DEFINITION_DOMAIN[0]:
        raise DomainError(f"interval must lie in [1, inf), got {interval!r}")
    return lo, hi


@dataclass(frozen=True)
class SampleGrid:
    """Values of t in (0, 1] plus a seeded generator of (x, y) pairs with y < x."""

    t_values: tuple = ()
    pair_count: int = 512
    seed: int = 0

    def __post_init__(self):
        ts = sorted({float(t) for t in self.t_values})
        if not ts:
            raise DomainError("a sample grid needs at least one t value")
        if ts[0] <= 0.0 or ts[-1] > 1.0:
            raise DomainError("t values must lie in (0, 1]")
        object.__setattr__(self, "t_values", tuple(ts))
        if self.pair_count < 1:
            raise DomainError("pair_count must be at least 1")

    @classmethod
    def default(cls, pair_count: int = 512, seed: int = 0) -> "SampleGrid":
        ts = [2.0 ** -20] + [j / 256 for j in range(1, 257)]
        return cls(tuple(ts), pair_count, seed)

    def restricted(self, lo: float, hi: float = 1.0) -> "SampleGrid":
        """Keep t in [lo, hi], adding 1/2 and 1 when they fall in range."""
        ts = [t for t in self.t_values if lo <= t <= hi]
        ts += [t for t in (0.5, 1.0) if lo <= t <= hi]
        return SampleGrid(tuple(ts), self.pair_count, self.seed)

    def pairs(self, interval) -> np.ndarray:
        """Array of shape (m, 2) holding (x, y) with y < x; the corner (hi, lo) comes first."""
        lo, hi = _check_interval(interval)
        rng = np.random.default_rng(self.seed)
        raw = rng.uniform(lo, hi, size=(self.pair_count - 1, 2))
        xs = raw.max(axis=1)
        ys = raw.min(axis=1)
        keep = ys < xs
        out = np.column_stack([np.concatenate([[hi], xs[keep]]), np.concatenate([[lo], ys[keep]])])
        return out


@dataclass(frozen=True)
class Witness:
    """A sampled point of a pointwise inequality ``lhs <= rhs``.

    ``margin`` is ``lhs - rhs``: positive exactly when the point violates.
    """

    t: float
    x: float
    y: float
    lhs: float
    rhs: float
    margin: float


def _nonnegative(fn: RealFunction, pts: np.ndarray) -> Optional[str]:
    vals = fn(pts)
    bad = vals < 0
    if np.any(bad):
        where = float(pts.ravel()[np.argmax(bad.ravel())])
        return f"f is negative at x = {where!r}; the class requires f >= 0"
    return None


def def1_sides(fn, t, x, y, p):
    """Both sides of the defining inequality, vectorised over t, x, y."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        tp = np.power(t, p)
        sp = np.power(1.0 - t, p)
    lhs = fn(t * x + (1.0 - t) * y)
    rhs = tp * fn(x) + np.abs(tp - sp) * fn(y)
    return lhs, rhs


def eq_a12_sides(fn, t, x, y, p):
    t = np.asarray(t, dtype=float)
    lhs = fn(t * x + (1.0 - t) * y)
    rhs = np.power(t, p) * (fn(x) + fn(y))
    return lhs, rhs


def _grid_check(fn, interval, p, grid: SampleGrid, pairs, sides) -> Verdict:
    if pairs is None:
        pairs = grid.pairs(interval)
    pairs = np.asarray(pairs, dtype=float).reshape(-1, 2)
    if np.any(pairs[:, 1] >= pairs[:, 0]):
        raise DomainError("every pair must satisfy y < x")
    t = np.asarray(grid.t_values)[:, None]
    x = pairs[None, :, 0]
    y = pairs[None, :, 1]
    u = t * x + (1.0 - t) * y
    try:
        problem = _nonnegative(fn, np.concatenate([pairs.ravel(), u.ravel()]))
    except EvaluationError as exc:
        return Verdict.indeterminate(str(exc))
    if problem:
        return Verdict.indeterminate(problem)
    lhs, rhs = sides(fn, t, x, y, p)
    lhs = np.broadcast_to(lhs, u.shape)
    rhs = np.broadcast_to(rhs, u.shape)
    violation = lhs - rhs
    flagged = violation > _slack(lhs, rhs)
    margin = rhs - lhs
    min_margin = float(np.min(margin))
    if np.any(flagged):
        i, j = np.unravel_index(np.argmax(np.where(flagged, violation, -np.inf)), violation.shape)
        w = Witness(float(t[i, 0]), float(pairs[j, 0]), float(pairs[j, 1]),
                    float(lhs[i, j]), float(rhs[i, j]), float(violation[i, j]))
        return Verdict.fails(w, min_margin)
    return Verdict.holds(min_margin)


def check_def1(f, interval, p: float, grid: Optional[SampleGrid] = None, pairs=None) -> Verdict:
    """Check ``f(tx+(1-t)y) <= t^p f(x) + |t^p - (1-t)^p| f(y)`` on a grid.

    ``pairs`` overrides the seeded (x, y) sample with explicit points.
    Returns an indeterminate verdict if f is negative at a sample.
    """
    p = _check_p(p)
    fn = as_function(f)
    return _grid_check(fn, interval, p, grid or SampleGrid.default(), pairs, def1_sides)


def check_eq_a12(f, interval, p: float, grid: Optional[SampleGrid] = None, pairs=None) -> Verdict:
    """Check ``f(tx+(1-t)y) <= t^p (f(x) + f(y))`` for grid t in [1/2, 1]."""
    p = _check_p(p)
    fn = as_function(f)
    grid = (grid or SampleGrid.default()).restricted(0.5, 1.0)
    return _grid_check(fn, interval, p, grid, pairs, eq_a12_sides)


@dataclass(frozen=True)
class Def2Point:
    k: int
    x: float
    y: float
    argument: float
    lhs: float
    rhs: float
    literal: bool


def def2_argument(x: float, y: float, k: int, literal: bool = True) -> float:
    w = 2.0 ** k
    inner = (w - 1.0) / w * x + y / w
    return inner / w if literal else inner


def def2_rhs(fx: float, fy: float, p: float, k: int) -> float:
    w = 2.0 ** k
    return ((w - 1.0) / w) ** p * fx + ((w * w - 1.0) / w) ** p * fy


def check_def2(f, x: float, y: float, p: float, k: int, literal: bool = True) -> Verdict:
    """Check the dyadic (k^p) convexity inequality at one point.

    ``literal=True`` uses the argument exactly as printed, divided by 2^k
    twice; ``literal=False`` divides once, matching the dyadic chain.
    """
    p = _check_p(p)
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    x, y = float(x), float(y)
    if x < 1.0 or y < 1.0:
        raise DomainError("x and y must be at least 1")
    fn = as_function(f)
    arg = def2_argument(x, y, k, literal)
    if arg < DEFINITION_DOMAIN[0]:
        mode = "literal" if literal else "corrected"
        return Verdict.indeterminate(
            f"{mode} argument {arg!r} lies outside [1, inf); the printed double division by 2^k "
            "pushes it below the domain"
        )
    try:
        lhs = fn(arg)
        rhs = def2_rhs(fn(x), fn(y), p, k)
    except EvaluationError as exc:
        return Verdict.indeterminate(str(exc))
    point = Def2Point(k, x, y, arg, lhs, rhs, literal)
    margin = rhs - lhs
    if -margin > _slack(lhs, rhs):
        return Verdict.fails(point, margin)
    return Verdict(VerdictKind.HOLDS, min_margin=margin, witness=point)


@dataclass(frozen=True)
class AbsPowerCheck:
    lhs: float
    rhs: float
    holds: bool


def check_abs_power(t1: float, t2: float, p: float) -> AbsPowerCheck:
    """Evaluate ``|t1^p - t2^p| <= |t1 - t2|^p`` at one point."""
    t1, t2, p = float(t1), float(t2), float(p)
    for t in (t1, t2):
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"t must lie in [0, 1], got {t!r}")
    if p <= 0.0 and (t1 == 0.0 or t2 == 0.0 or t1 == t2):
        raise DomainError(f"0 ** {p!r} is undefined")
    lhs = abs(t1 ** p - t2 ** p)
    rhs = abs(t1 - t2) ** p
    return AbsPowerCheck(lhs, rhs, lhs <= rhs + _REL_SLACK * max(1.0, rhs))


@dataclass(frozen=True)
class DyadicTerm:
    """One step of the dyadic chain.

    ``a17_margin`` uses the argument as printed (divided by 2^k twice);
    ``pattern_margin`` uses t = (2^k - 1)/2^k in the midpoint-type bound.
    Both are ``rhs - lhs`` and ``None`` when no function was given or the
    argument fell outside [1, inf) or the function's domain.
    """

    k: int
    coefficient: float
    a17_margin: Optional[float] = None
    pattern_margin: Optional[float] = None


def _margin_at(fn, arg, bound):
    if arg < DEFINITION_DOMAIN[0]:
        return None
    try:
        return bound - fn(arg)
    except EvaluationError:
        return None


def dyadic_chain(k_max: int, p: float, f=None, x: Optional[float] = None, y: Optional[float] = None) -> list:
    if int(k_max) != k_max or k_max < 1:
        raise DomainError(f"k_max must be a positive integer, got {k_max!r}")
    fn = as_function(f) if f is not None else None
    out = []
    for k in range(1, int(k_max) + 1):
        w = 2.0 ** k
        coef = ((w - 1.0) / w) ** p
        a17 = pattern = None
        if fn is not None:
            try:
                fx, fy = fn(x), fn(y)
                bound = coef * (fx + fy)
            except EvaluationError:
                bound = None
            if bound is not None:
                a17 = _margin_at(fn, def2_argument(x, y, k, literal=True), bound)
                pattern = _margin_at(fn, def2_argument(x, y, k, literal=False), bound)
        out.append(DyadicTerm(k, coef, a17, pattern))
    return out
