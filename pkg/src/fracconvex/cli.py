"""Command-line front end.

Exit codes: 0 every check holds, 1 at least one fails, 2 something is
indeterminate and nothing fails, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .claims import (
    IdentityInterpretation,
    emit_report,
    evaluate_claim,
    get_claim,
    list_claims,
    search_counterexample,
)
from .claims.core import DEFAULT_FUNCTION
from .errors import ConvergenceError, EvaluationError, FracConvexError, UsageError
from .exprlang import as_function
from .fraccalc import FracOrder, caputo_left, caputo_right
from .quad import QuadratureSpec
from .verdict import VerdictKind

EXIT_HOLDS, EXIT_FAILS, EXIT_INDETERMINATE, EXIT_USAGE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; usage errors here exit with 3."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    claim_id: Optional[str] = None
    functions: tuple = ()
    params: Optional[dict] = None
    quad: Optional[QuadratureSpec] = None
    interp: Optional[IdentityInterpretation] = None
    seed: Optional[int] = None
    budget: Optional[int] = None
    output_format: str = "json"
    output_path: Optional[str] = None


def exit_code(kinds) -> int:
    kinds = list(kinds)
    if VerdictKind.FAILS in kinds:
        return EXIT_FAILS
    if VerdictKind.INDETERMINATE in kinds:
        return EXIT_INDETERMINATE
    return EXIT_HOLDS


def _add_quad(p):
    p.add_argument("--tol-abs", type=float, default=1e-10, help="absolute quadrature tolerance")
    p.add_argument("--tol-rel", type=float, default=1e-8, help="relative quadrature tolerance")
    p.add_argument("--max-subdivisions", type=int, default=2000)


def _add_output(p):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracconvex", description="Numerical checks of (n - alpha)-convexity claims.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    claims = sub.add_parser("claims", help="list, verify or search registered claims")
    csub = claims.add_subparsers(dest="action", required=True, parser_class=_Parser)
    csub.add_parser("list", help="print every claim id with its anchor")

    verify = csub.add_parser("verify", help="evaluate one claim at one parameter assignment")
    verify.add_argument("--id", required=True)
    verify.add_argument("--f", help="function expression in x")
    for name in ("a", "b", "x", "y", "p", "t", "alpha"):
        verify.add_argument(f"--{name}", type=float)
    for name in ("n", "k", "s"):
        verify.add_argument(f"--{name}", type=int)
    verify.add_argument("--interp", help="identity interpretation, e.g. u=y,kernel=proof")
    verify.add_argument("--seed", type=int)
    _add_quad(verify)
    _add_output(verify)

    search = csub.add_parser("search", help="search a parameter box for a counterexample")
    search.add_argument("--id", required=True)
    search.add_argument("--box", required=True, help='e.g. "p=0:1,a=1:2,b=1:2,t=0:1"')
    search.add_argument("--budget", type=int, default=10_000)
    search.add_argument("--seed", type=int, default=0)
    search.add_argument("--f", action="append", default=[], help="corpus function (repeatable)")
    search.add_argument("--interp")
    _add_quad(search)
    _add_output(search)

    cap = sub.add_parser("caputo", help="Caputo fractional derivative of f")
    cap.add_argument("--side", choices=("left", "right"), required=True)
    cap.add_argument("--f", required=True)
    cap.add_argument("--a", type=float, help="base point (left side)")
    cap.add_argument("--b", type=float, help="end point (right side)")
    cap.add_argument("--x", type=float, required=True, help="evaluation point")
    cap.add_argument("--alpha", type=float, required=True)
    cap.add_argument("--n", type=int, default=1)
    _add_quad(cap)

    rep = sub.add_parser("report", help="evaluate every claim at its default parameters")
    rep.add_argument("--f", default=DEFAULT_FUNCTION)
    rep.add_argument("--seed", type=int, default=0)
    rep.add_argument("--interp")
    _add_quad(rep)
    _add_output(rep)
    return parser


def _quad(args) -> QuadratureSpec:
    if not (args.tol_abs >= 0 and args.tol_rel >= 0 and args.max_subdivisions >= 1):
        raise UsageError("tolerances must be non-negative and --max-subdivisions at least 1")
    return QuadratureSpec(abs_tol=args.tol_abs, rel_tol=args.tol_rel, max_subdivisions=args.max_subdivisions)


def _interp(text) -> Optional[IdentityInterpretation]:
    if text is None:
        return None
    try:
        return IdentityInterpretation.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad --interp {text!r}: {exc}") from None


def verify_params(claim, args) -> dict:
    """Collect the parameters a claim declares from the command line.

    For claims stated with points y < x, ``--a`` and ``--b`` stand for y and x.
    ``--alpha``/``--n`` give p = n - alpha and must agree with ``--p`` if both appear.
    """
    names = claim.params
    given = {}
    for name in ("a", "b", "x", "y", "t", "k", "s"):
        v = getattr(args, name)
        if v is None:
            continue
        if name in names:
            given[name] = v
        elif name in ("a", "b") and {"x", "y"} <= set(names):
            target = "y" if name == "a" else "x"
            if getattr(args, target) is not None:
                raise UsageError(f"--{name} and --{target} both set {target}")
            given[target] = v
        else:
            raise UsageError(f"{claim.id} has no parameter {name!r}")
    p = args.p
    if args.alpha is not None or args.n is not None:
        order = FracOrder(args.n if args.n is not None else 1, args.alpha if args.alpha is not None else 0.0)
        if p is not None and abs(p - order.p) > 1e-15:
            raise UsageError(f"--p {p} disagrees with n - alpha = {order.p}")
        p = order.p
    if p is not None:
        if "p" not in names:
            raise UsageError(f"{claim.id} has no parameter 'p'")
        given["p"] = p
    return given


def _emit(reports, args) -> None:
    text = emit_report(reports, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    else:
        for r in reports:
            print(f"{r.claim_id}: {r.verdict.kind.value}")


def _cmd_list(args) -> int:
    for cid, claim in list_claims().items():
        print(f"{cid}\t{claim.anchor}")
    return EXIT_HOLDS


def _cmd_verify(args) -> int:
    claim = get_claim(args.id)
    params = verify_params(claim, args)
    if claim.uses_function and args.f is None:
        raise UsageError(f"{claim.id} needs --f")
    f = as_function(args.f) if claim.uses_function else None
    report = evaluate_claim(claim.id, params, f, _quad(args), _interp(args.interp), args.seed)
    _emit([report], args)
    return exit_code([report.verdict.kind])


def _cmd_search(args) -> int:
    claim = get_claim(args.id)
    if claim.uses_function and not args.f:
        raise UsageError(f"{claim.id} needs at least one --f")
    corpus = [as_function(src) for src in args.f]
    found = search_counterexample(claim.id, args.box, corpus, args.budget, args.seed,
                                  quad=_quad(args), interp=_interp(args.interp))
    if found is None:
        print(f"{claim.id}: no counterexample in {args.budget} evaluations (seed {args.seed})")
        return EXIT_HOLDS
    _emit([found], args)
    return EXIT_FAILS


def _cmd_caputo(args) -> int:
    order = FracOrder(args.n, args.alpha)
    quad = _quad(args)
    try:
        if args.side == "left":
            if args.a is None:
                raise UsageError("--side left needs --a")
            value = caputo_left(args.f, args.a, args.x, order, quad)
        else:
            if args.b is None:
                raise UsageError("--side right needs --b")
            value = caputo_right(args.f, args.x, args.b, order, quad)
    except (ConvergenceError, EvaluationError) as exc:
        print(f"fracconvex: indeterminate: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    print(repr(float(value)))
    return EXIT_HOLDS


def _cmd_report(args) -> int:
    f = as_function(args.f)
    quad = _quad(args)
    interp = _interp(args.interp)
    reports = [evaluate_claim(cid, None, f if c.uses_function else None, quad, interp, args.seed)
               for cid, c in list_claims().items()]
    _emit(reports, args)
    return exit_code(r.verdict.kind for r in reports)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {"list": _cmd_list, "verify": _cmd_verify, "search": _cmd_search}
    try:
        if args.command == "claims":
            return handlers[args.action](args)
        if args.command == "caputo":
            return _cmd_caputo(args)
        return _cmd_report(args)
    except FracConvexError as exc:
        # UsageError, ExprSyntaxError (with offset) and DomainError all land here
        print(f"fracconvex: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
