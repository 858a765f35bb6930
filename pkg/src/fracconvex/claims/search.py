"""Deterministic counterexample search over a parameter box.

Three phases share one evaluation budget:

1. a coarse grid over box x corpus, each cell centre jittered by a seeded
   amount inside its cell;
2. compass search from the best cell, halving the step when no neighbour
   improves;
3. seeded uniform samples for whatever budget is left.

The objective is the largest ``lhs - rhs`` over the claim's comparisons.
Ties are broken by the smaller (function index, parameter tuple), so the
winner does not depend on evaluation order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import UsageError
from ..exprlang import as_function
from ..quad import QuadratureSpec
from .core import Report, evaluate_claim, get_claim, violation
from .identities import IdentityInterpretation

JITTER = 0.25  # fraction of a cell width


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float


def parse_box(text: str) -> dict:
    """Parse ``"p=0:1,a=1:2"`` into ``{"p": Interval(0, 1), "a": Interval(1, 2)}``."""
    box = {}
    for part in filter(None, (s.strip() for s in text.split(","))):
        name, eq, rng = part.partition("=")
        lo, colon, hi = rng.partition(":")
        if not (eq and colon):
            raise UsageError(f"malformed box entry {part!r}; expected name=lo:hi")
        try:
            lo_v, hi_v = float(lo), float(hi)
        except ValueError:
            raise UsageError(f"malformed bounds in box entry {part!r}") from None
        name = name.strip()
        if name in box:
            raise UsageError(f"parameter {name!r} appears twice in the box")
        box[name] = Interval(lo_v, hi_v)
    if not box:
        raise UsageError("empty box")
    return box


def _check_box(claim, box: dict) -> None:
    for name, iv in box.items():
        if name not in claim.params:
            raise UsageError(f"{claim.id} has no parameter {name!r}; parameters: {', '.join(claim.params)}")
        if not (math.isfinite(iv.lo) and math.isfinite(iv.hi) and iv.lo <= iv.hi):
            raise UsageError(f"box for {name} must be finite with lo <= hi")
        dom = claim.params[name]
        if iv.lo < dom.lo or iv.hi > dom.hi:
            raise UsageError(f"box {name}={iv.lo:g}:{iv.hi:g} lies outside {claim.id}'s domain {dom.describe()}")


def _axis(iv: Interval, m: int, integer: bool, rng) -> list:
    if integer:
        lo, hi = math.ceil(iv.lo), math.floor(iv.hi)
        if hi - lo + 1 <= m:
            return [float(v) for v in range(lo, hi + 1)]
        return sorted({float(round(v)) for v in np.linspace(lo, hi, m)})
    width = (iv.hi - iv.lo) / m
    centres = iv.lo + width * (np.arange(m) + 0.5)
    jitter = rng.uniform(-JITTER, JITTER, size=m) * width
    return [float(v) for v in centres + jitter]


class _Objective:
    def __init__(self, claim_id, base, names, corpus, quad, interp, seed):
        self.claim_id = claim_id
        self.base = base
        self.names = names
        self.corpus = corpus
        self.quad = quad
        self.interp = interp
        self.seed = seed
        self.calls = 0
        self.cache = {}
        self.best = None  # (violation, fi, point)

    def params(self, point):
        out = dict(self.base)
        out.update(zip(self.names, point))
        return out

    def __call__(self, fi: int, point: tuple) -> float:
        key = (fi, point)
        if key in self.cache:
            return self.cache[key]
        self.calls += 1
        try:
            rep = evaluate_claim(self.claim_id, self.params(point), self.corpus[fi], self.quad, self.interp, self.seed)
            v = violation(rep)
        except UsageError:
            v = -math.inf
        self.cache[key] = v
        if v > -math.inf and (self.best is None or (v, -fi, _neg(point)) > (self.best[0], -self.best[1], _neg(self.best[2]))):
            self.best = (v, fi, point)
        return v


def _neg(point):
    return tuple(-c for c in point)


def search_counterexample(claim_id: str, box, function_corpus: Sequence = (), budget: int = 10_000, seed: int = 0,
                          fixed: Optional[dict] = None, quad: Optional[QuadratureSpec] = None,
                          interp: Optional[IdentityInterpretation] = None) -> Optional[Report]:
    """Search ``box`` for a parameter assignment at which the claim fails.

    ``box`` maps parameter names to intervals (or is a ``"p=0:1,..."``
    string); parameters outside the box take ``fixed`` values or the claim
    defaults. Returns the Fails report of the largest violation found, or
    None when no evaluated point fails beyond quadrature slack.
    """
    if budget < 1:
        raise UsageError("budget must be at least 1")
    claim = get_claim(claim_id)
    if isinstance(box, str):
        box = parse_box(box)
    box = {k: (v if isinstance(v, Interval) else Interval(*map(float, v))) for k, v in box.items()}
    _check_box(claim, box)
    if claim.uses_function:
        if not function_corpus:
            raise UsageError(f"{claim.id} needs a non-empty function corpus")
        corpus = [as_function(f) for f in function_corpus]
    else:
        corpus = [None]
    base = dict(claim.defaults)
    base.update(fixed or {})
    names = [n for n in claim.params if n in box]
    ints = [claim.params[n].integer for n in names]
    rng = np.random.default_rng(seed)
    obj = _Objective(claim.id, base, names, corpus, quad or QuadratureSpec(), interp, seed)

    # 1. grid
    grid_budget = max(1, budget // 2)
    m = max(2, int((grid_budget / len(corpus)) ** (1.0 / len(names))))
    while m > 1 and m ** len(names) * len(corpus) > grid_budget:
        m -= 1
    axes = [_axis(box[n], m, integer, rng) for n, integer in zip(names, ints)]
    for fi in range(len(corpus)):
        for point in itertools.product(*axes):
            if obj.calls >= budget:
                break
            obj(fi, point)

    # 2. compass refinement from the best cell
    if obj.best is not None:
        _, fi, x = obj.best
        steps = [max(1.0, (box[n].hi - box[n].lo) / m) if integer else (box[n].hi - box[n].lo) / (2 * m)
                 for n, integer in zip(names, ints)]
        fx = obj(fi, x)
        while obj.calls < budget and any(s > 0 for s in steps):
            moved = False
            for i, n in enumerate(names):
                if steps[i] == 0:
                    continue
                for sign in (1.0, -1.0):
                    c = x[i] + sign * steps[i]
                    c = min(max(c, box[n].lo), box[n].hi)
                    if ints[i]:
                        c = float(round(c))
                    if c == x[i]:
                        continue
                    cand = x[:i] + (c,) + x[i + 1:]
                    if obj.calls >= budget and (fi, cand) not in obj.cache:
                        break
                    fc = obj(fi, cand)
                    if fc > fx:
                        x, fx, moved = cand, fc, True
                        break
                if moved:
                    break
            if not moved:
                steps = [_shrink(s, integer, box[n]) for s, integer, n in zip(steps, ints, names)]

    # 3. seeded random samples with what is left
    while obj.calls < budget:
        fi = int(rng.integers(len(corpus)))
        point = tuple(float(round(rng.uniform(box[n].lo, box[n].hi))) if integer
                      else float(rng.uniform(box[n].lo, box[n].hi)) for n, integer in zip(names, ints))
        before = obj.calls
        obj(fi, point)
        if obj.calls == before:  # cached repeat; avoid spinning on tiny integer boxes
            break

    if obj.best is None:
        return None
    _, fi, point = obj.best
    rep = evaluate_claim(claim.id, obj.params(point), corpus[fi], obj.quad, interp, seed)
    return rep if rep.verdict.is_fails else None


def _shrink(step: float, integer: bool, iv: Interval) -> float:
    if integer:
        return 0.0 if step <= 1.0 else max(1.0, math.floor(step / 2))
    step /= 2
    return 0.0 if step < 1e-12 * max(1.0, abs(iv.lo), abs(iv.hi)) else step

