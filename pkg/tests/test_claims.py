import math

import numpy as np
import pytest
from scipy.integrate import quad as scipy_quad

from fracconvex.claims import (
    IdentityInterpretation,
    emit_report,
    evaluate_claim,
    from_json,
    list_claims,
    reverify,
    to_csv,
    to_json,
    verify_identity,
)
from fracconvex.claims.identities import LEM1, LEM2, KernelBase, UPoint, lemma_rhs
from fracconvex.errors import UsageError
from fracconvex.fraccalc import FracOrder
from fracconvex.quad import QuadratureSpec
from fracconvex.specfun import beta, principal_power
from fracconvex.verdict import VerdictKind

from conftest import CORPUS

IDS = ["DEF1", "EQ-A12", "MIDPOINT-D", "DYADIC", "INT-H", "NONNEG", "DEF2", "HH-THM1", "COR1", "JENSEN-TYPE",
       "THM2", "LEM1-ID", "LEM2-ID", "COR2-ORDER", "THM3-BOUND", "THM4-BOUND", "THM5-ELEM"]


def sides(report):
    return {s.name: s.re for s in report.sides}


def test_registry_ids_and_anchors():
    reg = list_claims()
    assert list(reg) == IDS
    assert all(c.anchor for c in reg.values())


def test_registry_comparisons_reference_declared_sides():
    for cid, claim in list_claims().items():
        params = dict(claim.defaults)
        assert claim.params.check(params) is None, cid
        assert claim.validity(params) is None, cid
        if claim.id == "DEF2":
            params = {"k": 1, "x": 4.0, "y": 2.0, "p": 1.0}
        r = evaluate_claim(cid, params, "x^2")
        names = {s.name for s in r.sides}
        for lhs, rhs in claim.comparisons:
            assert {lhs, rhs} <= names, cid


def test_thm5_at_one():
    r = evaluate_claim("THM5-ELEM", {"p": 1.0})
    assert sides(r) == {"lhs": 0.5, "rhs": 2 / 3}
    assert r.verdict.is_holds and r.verdict.min_margin == pytest.approx(1 / 6, abs=1e-15)


def test_hh_thm1_classical():
    r = evaluate_claim("HH-THM1", {"a": 1.0, "b": 2.0, "p": 1.0}, "x^2")
    s = sides(r)
    assert s["left"] == 2.25 and s["right"] == 2.5
    assert s["mean"] == pytest.approx(7 / 3, abs=1e-12)
    assert r.verdict.is_holds and len(r.comparisons) == 2


def test_hh_thm1_half():
    s = sides(evaluate_claim("HH-THM1", {"a": 1.0, "b": 2.0, "p": 0.5}, "x^2"))
    assert s["left"] == pytest.approx(2 ** -0.5 * 2.25, rel=1e-15)
    assert s["right"] == pytest.approx(5 / 1.5, rel=1e-15)


def test_chain_fails_if_one_link_fails():
    # the verdict must agree with the sign of the worst link
    r = evaluate_claim("HH-THM1", {"a": 1.0, "b": 30.0, "p": -0.5}, "x^2")
    margins = [c.margin for c in r.comparisons]
    assert r.verdict.is_fails == any(m < 0 for m in margins)


def test_jensen_type_fails_as_printed():
    r = evaluate_claim("JENSEN-TYPE", {"a": 1.0, "b": 2.0, "p": 1.0}, "x^2")
    assert sides(r) == {"lhs": 2.25, "rhs": 1.25}
    assert r.verdict.is_fails
    assert r.verdict.witness["params"] == {"a": 1.0, "b": 2.0, "p": 1.0}
    assert r.verdict.witness["sides"] == {"lhs": 2.25, "rhs": 1.25}


def test_int_h():
    s = sides(evaluate_claim("INT-H", {"x": 2.0, "y": 1.0, "p": 0.5}, "x^2"))
    assert s["mean"] == pytest.approx(7 / 3, abs=1e-12)
    assert s["bound"] == pytest.approx(10 / 3, abs=1e-15)


def test_cor1_k_s_one_is_classical():
    assert sides(evaluate_claim("COR1", {"k": 1, "s": 1}, "x^2")) == pytest.approx(
        sides(evaluate_claim("HH-THM1", {"p": 1.0}, "x^2")), abs=1e-15)


def test_thm2_bracket_vanishes_at_integer_p():
    assert principal_power(-1.0, 2.0) == 1 + 0j
    r = evaluate_claim("THM2", {"a": 1.0, "b": 2.0, "p": 1.0}, "x^2")
    for s in r.sides:
        assert s.im == 0.0
    assert sides(r)["rhs_proof"] == pytest.approx(1 / 3)


def test_thm2_complex_side_compared_on_real_part():
    r = evaluate_claim("THM2", {"a": 1.0, "b": 2.0, "p": 0.5}, "x^2")
    proof = r.side("rhs_proof")
    assert proof.imag == pytest.approx(4 / 3)
    assert r.verdict.kind is not VerdictKind.INDETERMINATE


def test_reject_imaginary_policy():
    # LEM identities are real; a complex side would make them indeterminate. THM3 keeps the real part.
    r = evaluate_claim("THM3-BOUND", {"x": 2.0, "y": 1.0, "p": 0.5}, "x^2")
    assert abs(r.side("rhs").imag) > 1e-9
    assert not r.verdict.is_indeterminate


@pytest.mark.parametrize("p", [0.25, 0.5, 0.75, 1.0])
def test_thm3_thm4_closed_forms(p):
    a, _ = scipy_quad(lambda t: t ** (p + 1) * (1 - t ** p), 0, 1, epsabs=1e-14, epsrel=1e-14)
    b, _ = scipy_quad(lambda t: t ** (2 * p) * (1 - t), 0, 1, epsabs=1e-14, epsrel=1e-14)
    assert abs(a - (1 / (p + 2) - 1 / (2 * (p + 1)))) <= 1e-10
    assert abs(b - beta(2, 2 * p + 1)) <= 1e-10


@pytest.mark.parametrize("params, message", [
    ({"a": 1.0, "b": 0.5}, "outside"),
    ({"a": 2.0, "b": 1.0}, "a < b"),
    ({"p": 1.5}, "outside"),
    ({"q": 1.0}, "unknown"),
])
def test_params_outside_validity(params, message):
    with pytest.raises(UsageError, match=message):
        evaluate_claim("HH-THM1", params, "x^2")


def test_function_required():
    with pytest.raises(UsageError):
        evaluate_claim("HH-THM1", {})


def test_unknown_claim():
    with pytest.raises(UsageError):
        evaluate_claim("NOPE")


def test_def2_literal_domain_issue_is_indeterminate():
    r = evaluate_claim("DEF2", {"k": 2, "x": 2.0, "y": 1.0, "p": 1.0}, "x")
    assert r.verdict.is_indeterminate and "outside" in r.verdict.reason


def test_lem1_needs_positive_derivative():
    r = evaluate_claim("LEM1-ID", {"x": 2.0, "y": 1.0, "p": 0.5}, "3-x^2")
    assert r.verdict.is_indeterminate


def test_lemma_rhs_closed_forms():
    o = FracOrder.from_p(0.5)
    # default tolerances give about 1e-10; a tighter request reaches roundoff
    tight = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-12)
    assert lemma_rhs(LEM1, "x", 1, 2, o).value == pytest.approx(0.1, abs=1e-9)
    assert lemma_rhs(LEM2, "x", 1, 2, o).value == pytest.approx(beta(1.5, 2), abs=1e-9)
    assert lemma_rhs(LEM1, "x", 1, 2, o, tight).value == pytest.approx(0.1, abs=1e-13)
    assert lemma_rhs(LEM2, "x", 1, 2, o, tight).value == pytest.approx(beta(1.5, 2), abs=1e-13)


@pytest.mark.parametrize("src", CORPUS)
def test_lemma_rhs_routes_agree(src):
    o = FracOrder.from_p(0.5)
    a = lemma_rhs(LEM1, src, 1.0, 3.0, o, route="t").value
    b = lemma_rhs(LEM1, src, 1.0, 3.0, o, route="u").value
    assert abs(a - b) <= 1e-8


@pytest.mark.parametrize("interp", IdentityInterpretation.all(), ids=lambda i: f"{i.u_point.value}-{i.caputo_kernel_base.value}")
@pytest.mark.parametrize("which", [LEM1, LEM2])
def test_identity_residuals_reported(interp, which):
    c = verify_identity(which, "exp(x)", 1.0, 2.5, FracOrder.from_p(0.5), interp)
    assert math.isfinite(c.residual) and c.residual == c.lhs - c.rhs
    assert c.interpretation == interp


def test_first_identity_matches_under_default_reading_for_unit_length():
    c = verify_identity(LEM1, "x^2", 1.0, 2.0, FracOrder.from_p(0.5))
    assert abs(c.residual) <= 1e-9


def test_interpretation_parse():
    i = IdentityInterpretation.parse("u=x,kernel=def")
    assert (i.u_point, i.caputo_kernel_base) == (UPoint.EVAL_AT_X, KernelBase.AS_DEFINED)
    with pytest.raises(ValueError):
        IdentityInterpretation.parse("w=1")


def test_interpretation_recorded_only_when_relevant():
    assert evaluate_claim("LEM2-ID", None, "x^2").interpretation == {"u_point": "y", "caputo_kernel_base": "proof"}
    assert evaluate_claim("INT-H", None, "x^2").interpretation is None


def test_cor2_pointwise_order():
    t = np.linspace(0, 1, 1001)
    for p in (0.1, 0.25, 0.5, 0.75, 1.0):
        assert np.all(t ** p * (1 - t) - t * (1 - t ** p) >= 0)


@pytest.mark.parametrize("src", ["x", "x^2", "exp(x)", "x^2*ln(x)"])
def test_cor2_claim_holds_on_corpus(src):
    for p in (0.1, 0.5, 1.0):
        assert evaluate_claim("COR2-ORDER", {"x": 2.0, "y": 1.0, "p": p}, src).verdict.is_holds


def test_every_report_reproduces():
    for cid, claim in list_claims().items():
        r = evaluate_claim(cid, None, "exp(x)" if claim.uses_function else None)
        reverify(r)


def test_fails_witness_beyond_quadrature_slack():
    r = evaluate_claim("LEM2-ID", None, "x^2")
    assert r.verdict.is_fails
    worst = max(-c.margin for c in r.comparisons)
    assert worst > 10 * r.quadrature_error


def test_json_round_trip():
    reports = [evaluate_claim(cid, None, "x^2") for cid in ("THM5-ELEM", "JENSEN-TYPE", "DEF2", "THM2")]
    text = to_json(reports)
    assert text.endswith("\n")
    back = from_json(text)
    assert to_json(back) == text
    for r in back:
        reverify(r)


def test_json_field_order_and_precision():
    text = to_json(evaluate_claim("THM5-ELEM", {"p": 1.0}))
    keys = ["claim_id", "anchor", "params", "sides", "comparisons", "verdict", "quadrature_error",
            "interpretation", "seed", "tool_version", "config"]
    positions = [text.index(f'\n  "{k}"') for k in keys]
    assert positions == sorted(positions)
    assert "0.66666666666666663" in text


def test_csv_row():
    text = to_csv([evaluate_claim("THM5-ELEM", {"p": 1.0}, seed=5)])
    header, row = text.splitlines()
    assert header == "claim_id,verdict,margin,quad_error,params,seed"
    assert row.split(",")[:2] == ["THM5-ELEM", "holds"]
    assert row.endswith(",p=1.0,5")


def test_emit_report_errors(tmp_path):
    r = evaluate_claim("THM5-ELEM")
    with pytest.raises(UsageError):
        emit_report([], "json")
    with pytest.raises(UsageError):
        emit_report([r], "xml")
    with pytest.raises(UsageError):
        emit_report([r], "json", str(tmp_path / "missing" / "out.json"))
    out = tmp_path / "r.json"
    emit_report([r], "json", str(out))
    assert out.read_bytes().decode("utf-8") == to_json(r)


def test_custom_tolerances_echo_into_config():
    q = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-11, max_subdivisions=500)
    r = evaluate_claim("INT-H", None, "exp(x)", q)
    assert r.config == {"f": "exp(x)", "domain": [-math.inf, math.inf], "abs_tol": 1e-12, "rel_tol": 1e-11,
                        "max_subdivisions": 500}
