"""Claim registry and evaluation.

A claim is a list of named sides plus comparisons ``side_i <= side_j``.
Every side is computed by its own route (closed form, quadrature, or a
Caputo term) and a comparison fails only when ``lhs - rhs`` exceeds ten
times the combined quadrature error estimate plus a relative roundoff
floor. Chains hold only if every link holds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .. import __version__
from ..convexity import def1_sides, def2_argument, def2_rhs
from ..errors import ConvergenceError, EvaluationError, FracConvexError, UsageError
from ..exprlang import RealFunction, as_function
from ..fraccalc import FracOrder
from ..quad import QuadratureSpec, integrate
from ..specfun import cos_sin_pi, beta, principal_power
from ..verdict import Verdict, VerdictKind
from .identities import LEM1, LEM2, IdentityInterpretation, derivative_positive, lemma_lhs, lemma_rhs

SLACK_FACTOR = 10.0
ROUNDOFF = 1e-13
IMAG_TOL = 1e-9


class ComplexPolicy(str, enum.Enum):
    REJECT_IMAGINARY = "reject_imaginary"
    COMPARE_REAL_PART = "compare_real_part"


@dataclass(frozen=True)
class Param:
    """Domain of one parameter: an interval, optionally open at either end, optionally integral."""

    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False
    integer: bool = False

    def contains(self, v: float) -> bool:
        if self.integer and float(v) != int(v):
            return False
        above = v > self.lo if self.lo_open else v >= self.lo
        below = v < self.hi if self.hi_open else v <= self.hi
        return above and below

    def describe(self) -> str:
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        kind = " integer" if self.integer else ""
        return f"{left}{self.lo:g}, {self.hi:g}{right}{kind}"


P_FULL = Param(-1.0, 1.0, lo_open=True)
P_POS = Param(0.0, 1.0, lo_open=True)
T_UNIT = Param(0.0, 1.0, lo_open=True)
T_HALF = Param(0.5, 1.0)
POINT = Param(1.0, math.inf, hi_open=True)
K_INT = Param(1, 60, integer=True)
KS_INT = Param(1, 10**6, integer=True)


class ParamBox(dict):
    """Mapping of parameter name to ``Param``."""

    def check(self, params: dict) -> Optional[str]:
        for name, dom in self.items():
            if name not in params:
                return f"missing parameter {name!r}"
            v = params[name]
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                return f"parameter {name} must be a finite number"
            if not dom.contains(v):
                return f"parameter {name}={v!r} outside {dom.describe()}"
        extra = set(params) - set(self)
        if extra:
            return f"unknown parameter(s): {', '.join(sorted(extra))}"
        return None


@dataclass
class Context:
    params: dict
    f: Optional[RealFunction]
    quad: QuadratureSpec
    interp: IdentityInterpretation
    quad_error: float = 0.0

    def __getitem__(self, name):
        return self.params[name]

    def integral(self, g, a, b) -> float:
        res = integrate(g, a, b, self.quad)
        self.quad_error += res.error_estimate
        return res.value

    def order(self) -> FracOrder:
        return FracOrder.from_p(self["p"])


class Indeterminate(Exception):
    """Raised by an evaluator when a precondition of the claim is not met."""


@dataclass(frozen=True)
class Claim:
    id: str
    description: str
    anchor: str
    params: ParamBox
    defaults: dict
    sides: Callable[[Context], dict]
    comparisons: tuple
    validity: Callable[[dict], Optional[str]] = lambda p: None
    complex_policy: ComplexPolicy = ComplexPolicy.REJECT_IMAGINARY
    uses_function: bool = True
    uses_interpretation: bool = False


@dataclass(frozen=True)
class SideValue:
    name: str
    re: float
    im: float = 0.0


@dataclass(frozen=True)
class ComparisonResult:
    lhs: str
    rhs: str
    margin: float  # rhs - lhs, real parts


@dataclass
class Report:
    claim_id: str
    anchor: str
    params: dict
    sides: list
    comparisons: list
    verdict: Verdict
    quadrature_error: float
    interpretation: Optional[dict] = None
    seed: Optional[int] = None
    tool_version: str = __version__
    config: dict = field(default_factory=dict)

    def side(self, name: str) -> complex:
        for s in self.sides:
            if s.name == name:
                return complex(s.re, s.im)
        raise KeyError(name)


# --------------------------------------------------------------------------
# validity helpers

def _y_below_x(p):
    return None if p["y"] < p["x"] else "requires y < x"


def _a_below_b(p):
    return None if p["a"] < p["b"] else "requires a < b"


def _def1_valid(p):
    msg = _y_below_x(p)
    if msg:
        return msg
    if p["p"] < 0 and p["t"] == 1.0:
        return "t = 1 with p < 0 makes (1 - t)^p undefined"
    return None


# --------------------------------------------------------------------------
# side evaluators

def _f(ctx: Context, v: float) -> float:
    return float(ctx.f(float(v)))


def _def1(ctx):
    lhs, rhs = def1_sides(ctx.f, ctx["t"], ctx["x"], ctx["y"], ctx["p"])
    return {"lhs": float(lhs), "rhs": float(rhs)}


def _eq_a12(ctx):
    t, x, y = ctx["t"], ctx["x"], ctx["y"]
    return {"lhs": _f(ctx, t * x + (1 - t) * y), "rhs": t ** ctx["p"] * (_f(ctx, x) + _f(ctx, y))}


def _midpoint(ctx):
    x, y = ctx["x"], ctx["y"]
    return {"lhs": _f(ctx, 0.5 * (x + y)), "rhs": 0.5 ** ctx["p"] * (_f(ctx, x) + _f(ctx, y))}


def _dyadic(ctx):
    k, x, y = int(ctx["k"]), ctx["x"], ctx["y"]
    w = 2.0 ** k
    return {
        "lhs": _f(ctx, def2_argument(x, y, k, literal=False)),
        "rhs": ((w - 1) / w) ** ctx["p"] * (_f(ctx, x) + _f(ctx, y)),
    }


def _int_h(ctx):
    x, y = ctx["x"], ctx["y"]
    mean = ctx.integral(ctx.f, y, x) / (x - y)
    return {"mean": mean, "bound": (_f(ctx, x) + _f(ctx, y)) / (ctx["p"] + 1.0)}


def _nonneg(ctx):
    return {"zero": 0.0, "f(y)": _f(ctx, ctx["y"])}


def _def2(ctx):
    k, x, y, p = int(ctx["k"]), ctx["x"], ctx["y"], ctx["p"]
    rhs = def2_rhs(_f(ctx, x), _f(ctx, y), p, k)
    corrected = _f(ctx, def2_argument(x, y, k, literal=False))
    arg = def2_argument(x, y, k, literal=True)
    if arg < 1.0:
        raise Indeterminate(
            f"printed argument {arg!r} lies outside [1, inf) (double division by 2^k); "
            f"corrected form: lhs {corrected!r} vs rhs {rhs!r}"
        )
    return {"literal_lhs": _f(ctx, arg), "corrected_lhs": corrected, "rhs": rhs}


def _hh_chain(ctx, a, b, left_coef, denom):
    mean = ctx.integral(ctx.f, a, b) / (b - a)
    return {
        "left": left_coef * _f(ctx, 0.5 * (a + b)),
        "mean": mean,
        "right": (_f(ctx, a) + _f(ctx, b)) / denom,
    }


def _hh_thm1(ctx):
    p = ctx["p"]
    return _hh_chain(ctx, ctx["a"], ctx["b"], 2.0 ** (p - 1.0), p + 1.0)


def _cor1(ctx):
    k, s = int(ctx["k"]), int(ctx["s"])
    e = 1.0 / k + 1.0 / s
    return _hh_chain(ctx, ctx["a"], ctx["b"], 2.0 ** (e - 2.0), e)


def _jensen(ctx):
    a, b, p = ctx["a"], ctx["b"], ctx["p"]
    return {
        "lhs": 2.0 ** (p - 1.0) * _f(ctx, 0.5 * (a + b)),
        "rhs": (_f(ctx, a) + _f(ctx, b)) / (2.0 * (p + 1.0)),
    }


def _thm2(ctx):
    a, b, p = ctx["a"], ctx["b"], ctx["p"]
    fa, fb = _f(ctx, a), _f(ctx, b)
    head = fa / (p + 2.0)
    scale = fb / (2.0 * (p + 1.0))
    proof_form = head + scale * (1.0 - principal_power(-1.0, p + 1.0))
    # i^(2(p+1)) on the principal branch: exp(i pi (p+1)), exact at half-integers
    c, sn = cos_sin_pi(p + 1.0)
    statement_form = head + scale * (1.0 - complex(c, sn))
    return {
        "lhs": 2.0 ** (p - 1.0) * _f(ctx, 0.5 * (a + b)),
        "rhs_proof": proof_form,
        "rhs_statement": statement_form,
    }


def _lemma(which):
    def sides(ctx):
        x, y = ctx["x"], ctx["y"]
        order = ctx.order()
        if which == LEM1:
            bad = derivative_positive(ctx.f, y, x, order.n)
            if bad is not None:
                raise Indeterminate(f"f^({order.n}) is not positive at {bad!r}")
        rhs = lemma_rhs(which, ctx.f, y, x, order, ctx.quad)
        lhs, err = lemma_lhs(which, ctx.f, y, x, order, ctx.interp, ctx.quad)
        ctx.quad_error += rhs.error_estimate + err
        return {"lhs": lhs, "rhs": rhs.value}
    return sides


def _cor2(ctx):
    x, y = ctx["x"], ctx["y"]
    order = ctx.order()
    r1 = lemma_rhs(LEM1, ctx.f, y, x, order, ctx.quad)
    r2 = lemma_rhs(LEM2, ctx.f, y, x, order, ctx.quad)
    ctx.quad_error += r1.error_estimate + r2.error_estimate
    return {"first_integral": r1.value, "second_integral": r2.value}


def _thm3(ctx):
    x, y, p = ctx["x"], ctx["y"], ctx["p"]
    lhs, err = lemma_lhs(LEM1, ctx.f, y, x, ctx.order(), ctx.interp, ctx.quad)
    ctx.quad_error += err
    fx, fy = abs(_f(ctx, x)), abs(_f(ctx, y))
    b1 = beta(p + 1.0, 2.0)
    b2 = beta(p + 1.0, p + 2.0)
    rhs = (
        fx * (1.0 / (p + 2.0) - 1.0 / (2.0 * (p + 1.0)))
        + fy / 4.0 * (b1 - b2 / 2.0 ** (p + 2.0))
        + fy / 4.0 * principal_power(-1.0, p + 1.0) * (1.0 - 1.0 / 2.0 ** (p + 1.0)) * b2
    )
    fn = ctx.f
    proof_integral = ctx.integral(
        lambda t: t * (1.0 - np.power(t, p)) * np.abs(fn(t * x + (1.0 - t) * y)), 0.0, 1.0
    )
    return {"lhs": abs(lhs), "rhs": rhs, "proof_integral": proof_integral}


def _thm4(ctx):
    x, y, p = ctx["x"], ctx["y"], ctx["p"]
    order = ctx.order()
    lhs, err = lemma_lhs(LEM1, ctx.f, y, x, order, ctx.interp, ctx.quad)
    ctx.quad_error += err
    dn = ctx.f.derivative(order.n)
    dx, dy = abs(float(dn(float(x)))), abs(float(dn(float(y))))
    b_sq = beta(2.0, 2.0 * p + 1.0)
    rhs = dy * (beta(p + 1.0, p + 2.0) + b_sq) + dx * b_sq
    return {"lhs": lhs, "rhs": rhs}


def _thm5(ctx):
    p = ctx["p"]
    return {"lhs": 0.5, "rhs": (p + 3.0) / ((p + 1.0) * (p + 2.0))}


# --------------------------------------------------------------------------
# registry

_XYP = ParamBox(x=POINT, y=POINT, p=P_FULL)
_ABP = ParamBox(a=POINT, b=POINT, p=P_FULL)
_XYP_POS = ParamBox(x=POINT, y=POINT, p=P_POS)

_CLAIMS = [
    Claim("DEF1", "(n-alpha)-convexity inequality at one point",
          'Eq. a1, "is said to be (n−α) convex"',
          ParamBox(t=T_UNIT, x=POINT, y=POINT, p=P_FULL), dict(t=0.25, x=2.0, y=1.0, p=1.0),
          _def1, (("lhs", "rhs"),), _def1_valid),
    Claim("EQ-A12", "bound f(tx+(1-t)y) <= t^p (f(x)+f(y)) for t in [1/2, 1]",
          'Eq. a12',
          ParamBox(t=T_HALF, x=POINT, y=POINT, p=P_FULL), dict(t=0.75, x=2.0, y=1.0, p=1.0),
          _eq_a12, (("lhs", "rhs"),), _y_below_x),
    Claim("MIDPOINT-D", "midpoint bound f((x+y)/2) <= 2^-p (f(x)+f(y))",
          'interpretation d), "If we just choose t=1/2"',
          _XYP, dict(x=2.0, y=1.0, p=1.0), _midpoint, (("lhs", "rhs"),), _y_below_x),
    Claim("DYADIC", "dyadic bound with t = (2^k-1)/2^k",
          'Eq. a17/a18, "without losing generality we can write"',
          ParamBox(k=K_INT, x=POINT, y=POINT, p=P_FULL), dict(k=4, x=2.0, y=1.0, p=1.0),
          _dyadic, (("lhs", "rhs"),), _y_below_x),
    Claim("INT-H", "integrated bound: mean of f on [y, x] <= (f(x)+f(y))/(p+1)",
          'interpretation h), "if we only integrate both sides"',
          _XYP, dict(x=2.0, y=1.0, p=0.5), _int_h, (("mean", "bound"),), _y_below_x),
    Claim("NONNEG", "nonnegativity f(y) >= 0",
          'interpretation ı), "f(y) ≥ 0"',
          ParamBox(y=POINT), dict(y=1.0), _nonneg, (("zero", "f(y)"),)),
    Claim("DEF2", "k^(n-alpha)-convexity inequality, printed and corrected arguments",
          'Definition 2',
          ParamBox(k=K_INT, x=POINT, y=POINT, p=P_FULL), dict(k=1, x=4.0, y=2.0, p=1.0),
          _def2, (("literal_lhs", "rhs"), ("corrected_lhs", "rhs"))),
    Claim("HH-THM1", "Hermite-Hadamard chain 2^(p-1) f(mid) <= mean <= (f(a)+f(b))/(p+1)",
          'Eq. a2, "following Hermite--Hadamard type inequality hold"',
          _ABP, dict(a=1.0, b=2.0, p=1.0), _hh_thm1, (("left", "mean"), ("mean", "right")), _a_below_b),
    Claim("COR1", "Hermite-Hadamard chain with n = 1/k, alpha = (s-1)/s",
          'Eq. a10, "If we choose n and α so that"',
          ParamBox(k=KS_INT, s=KS_INT, a=POINT, b=POINT), dict(k=1, s=1, a=1.0, b=2.0),
          _cor1, (("left", "mean"), ("mean", "right")), _a_below_b),
    Claim("JENSEN-TYPE", "2^(p-1) f(mid) <= (f(a)+f(b)) / (2(p+1)), as printed",
          'unlabeled display, "a Jensen type inequality"',
          _ABP, dict(a=1.0, b=2.0, p=1.0), _jensen, (("lhs", "rhs"),), _a_below_b),
    Claim("THM2", "midpoint bound with the complex factor 1 - (-1)^(p+1)",
          'Eq. a4, "is complex number"',
          _ABP, dict(a=1.0, b=2.0, p=0.5), _thm2, (("lhs", "rhs_proof"), ("lhs", "rhs_statement")),
          _a_below_b, ComplexPolicy.COMPARE_REAL_PART),
    Claim("LEM1-ID", "first identity: printed Caputo expression = int t(1-t^p) f^(n)(u) dt",
          'Lemma 1, "equality for Caputo right-sided derivative holds"',
          _XYP_POS, dict(x=2.0, y=1.0, p=0.5), _lemma(LEM1), (("lhs", "rhs"), ("rhs", "lhs")),
          _y_below_x, uses_interpretation=True),
    Claim("LEM2-ID", "second identity: printed Caputo expression = int t^p(1-t) f^(n)(u) dt",
          'Eq. a7, Lemma 2', _XYP_POS, dict(x=2.0, y=1.0, p=0.5), _lemma(LEM2),
          (("lhs", "rhs"), ("rhs", "lhs")), _y_below_x, uses_interpretation=True),
    Claim("COR2-ORDER", "int t(1-t^p) f^(n)(u) dt <= int t^p(1-t) f^(n)(u) dt",
          'Eq. a16, "1−t^{n−α} ≤ 1−t"',
          _XYP_POS, dict(x=2.0, y=1.0, p=0.5), _cor2, (("first_integral", "second_integral"),), _y_below_x),
    Claim("THM3-BOUND", "|printed first-identity expression| <= Beta-function bound",
          'Eq. a9, "The following inequalities holds"',
          _XYP_POS, dict(x=2.0, y=1.0, p=0.5), _thm3, (("lhs", "rhs"),), _y_below_x,
          ComplexPolicy.COMPARE_REAL_PART, uses_interpretation=True),
    Claim("THM4-BOUND", "printed first-identity expression <= Beta bound in |f^(n)|",
          'Theorem 4, "the following inequality is true"',
          _XYP_POS, dict(x=2.0, y=1.0, p=0.5), _thm4, (("lhs", "rhs"),), _y_below_x,
          uses_interpretation=True),
    Claim("THM5-ELEM", "1/2 <= (p+3)/((p+1)(p+2))",
          'Theorem 5, "a general elementary inequality"',
          ParamBox(p=P_FULL), dict(p=1.0), _thm5, (("lhs", "rhs"),), uses_function=False),
]

REGISTRY = {c.id: c for c in _CLAIMS}

DEFAULT_FUNCTION = "x^2"
DEFAULT_DOMAIN = (1.0, math.inf)


def list_claims() -> dict:
    """Registry in a fixed order: id -> Claim."""
    return dict(REGISTRY)


def get_claim(claim_id: str) -> Claim:
    try:
        return REGISTRY[claim_id]
    except KeyError:
        raise UsageError(f"unknown claim id {claim_id!r}; known: {', '.join(REGISTRY)}") from None


def resolve_params(claim: Claim, params: Optional[dict]) -> dict:
    merged = dict(claim.defaults)
    merged.update(params or {})
    problem = claim.params.check(merged)
    if problem is None:
        problem = claim.validity(merged)
    if problem is not None:
        raise UsageError(f"{claim.id}: {problem}")
    # Canonical order and types.
    return {k: (int(merged[k]) if claim.params[k].integer else float(merged[k])) for k in claim.params}


def _config(f: Optional[RealFunction], quad: QuadratureSpec) -> dict:
    cfg = {}
    if f is not None:
        cfg["f"] = f.label
        cfg["domain"] = list(f.domain)
    cfg["abs_tol"] = quad.abs_tol
    cfg["rel_tol"] = quad.rel_tol
    cfg["max_subdivisions"] = quad.max_subdivisions
    return cfg


def evaluate_claim(claim_id: str, params: Optional[dict] = None, f=None, quad: Optional[QuadratureSpec] = None,
                   interp: Optional[IdentityInterpretation] = None, seed: Optional[int] = None) -> Report:
    """Evaluate one registered claim at a parameter assignment.

    Parameters missing from ``params`` take the claim's defaults. Raises
    UsageError for an unknown id, a missing function, or parameters outside
    the claim's validity region.
    """
    claim = get_claim(claim_id)
    values = resolve_params(claim, params)
    quad = quad or QuadratureSpec()
    interp = interp or IdentityInterpretation()
    fn = None
    if claim.uses_function:
        if f is None:
            raise UsageError(f"{claim.id} needs a function")
        fn = as_function(f)
    ctx = Context(values, fn, quad, interp)
    interp_out = interp.as_dict() if claim.uses_interpretation else None

    def report(sides, comparisons, verdict):
        return Report(claim.id, claim.anchor, values, sides, comparisons, verdict, ctx.quad_error,
                      interp_out, seed, __version__, _config(fn, quad))

    try:
        raw = claim.sides(ctx)
    except Indeterminate as exc:
        return report([], [], Verdict.indeterminate(str(exc), ctx.quad_error))
    except ConvergenceError as exc:
        return report([], [], Verdict.indeterminate(f"quadrature did not converge: {exc}", ctx.quad_error))
    except (EvaluationError, FracConvexError) as exc:
        return report([], [], Verdict.indeterminate(f"evaluation failed: {exc}", ctx.quad_error))

    sides = []
    for name, v in raw.items():
        z = complex(v)
        sides.append(SideValue(name, float(z.real), float(z.imag)))
    by_name = {s.name: s for s in sides}

    imaginary = [s.name for s in sides if abs(s.im) > IMAG_TOL]
    slack_q = SLACK_FACTOR * ctx.quad_error
    comparisons = []
    failing = False
    for lhs_name, rhs_name in claim.comparisons:
        lhs, rhs = by_name[lhs_name].re, by_name[rhs_name].re
        margin = rhs - lhs
        comparisons.append(ComparisonResult(lhs_name, rhs_name, margin))
        slack = slack_q + ROUNDOFF * max(1.0, abs(lhs), abs(rhs))
        if -margin > slack:
            failing = True
    min_margin = min(c.margin for c in comparisons)

    if imaginary and claim.complex_policy is ComplexPolicy.REJECT_IMAGINARY:
        verdict = Verdict.indeterminate(f"complex side value(s): {', '.join(imaginary)}", ctx.quad_error)
    elif failing:
        witness = {
            "params": dict(values),
            "f": fn.label if fn is not None else None,
            "sides": {sv.name: sv.re for sv in sides},
        }
        verdict = Verdict.fails(witness, min_margin, ctx.quad_error)
    else:
        verdict = Verdict.holds(min_margin, ctx.quad_error)
    return report(sides, comparisons, verdict)


def violation(report: Report) -> float:
    """Largest ``lhs - rhs`` over the comparisons, beyond slack; -inf if not evaluable."""
    if report.verdict.is_indeterminate or not report.comparisons:
        return -math.inf
    return max(-c.margin for c in report.comparisons)
