"""Claim registry: encoded inequalities and identities, reports and search."""

from .core import (
    REGISTRY,
    Claim,
    ComplexPolicy,
    ComparisonResult,
    Param,
    ParamBox,
    Report,
    SideValue,
    evaluate_claim,
    get_claim,
    list_claims,
)
from .identities import IdentityCheck, IdentityInterpretation, KernelBase, UPoint, lemma_rhs, verify_identity
from .report import emit_report, from_json, reverify, to_csv, to_json
from .search import parse_box, search_counterexample

__all__ = [
    "REGISTRY", "Claim", "ComplexPolicy", "ComparisonResult", "Param", "ParamBox", "Report", "SideValue",
    "evaluate_claim", "get_claim", "list_claims",
    "IdentityCheck", "IdentityInterpretation", "KernelBase", "UPoint", "lemma_rhs", "verify_identity",
    "emit_report", "from_json", "reverify", "to_csv", "to_json",
    "parse_box", "search_counterexample",
]
