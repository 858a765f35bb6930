"""Byte-stable JSON and CSV serialization of claim reports.

Reals are written with 17 significant digits (``%.17g``) so that a value
read back is the same double. Non-finite reals are written as the strings
``"inf"``, ``"-inf"`` and ``"nan"`` because JSON has no literal for them.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math
from typing import Iterable, Optional

from ..errors import UsageError
from ..quad import QuadratureSpec
from ..verdict import Verdict, VerdictKind
from .core import ComparisonResult, Report, SideValue, evaluate_claim
from .identities import IdentityInterpretation

CSV_COLUMNS = ("claim_id", "verdict", "margin", "quad_error", "params", "seed")


def format_real(v: float) -> str:
    v = float(v)
    if math.isnan(v):
        return '"nan"'
    if math.isinf(v):
        return '"inf"' if v > 0 else '"-inf"'
    if v == int(v) and abs(v) < 1e17:
        # keep a decimal point so the value reads back as a float
        return f"{v:.1f}"
    return f"{v:.17g}"


def _plain(obj):
    """Reduce dataclasses and enums to dicts, lists and scalars."""
    if isinstance(obj, enum.Enum):
        return obj.value
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalar
        return obj.item()
    return obj


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_real(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _verdict_dict(v: Verdict) -> dict:
    return {
        "kind": v.kind.value,
        "min_margin": v.min_margin,
        "reason": v.reason,
        "witness": _plain(v.witness),
    }


def report_to_dict(r: Report) -> dict:
    """Field order is fixed; ``config`` records every effective setting."""
    return {
        "claim_id": r.claim_id,
        "anchor": r.anchor,
        "params": dict(r.params),
        "sides": [{"name": s.name, "re": s.re, "im": s.im} for s in r.sides],
        "comparisons": [{"lhs": c.lhs, "rhs": c.rhs, "margin": c.margin} for c in r.comparisons],
        "verdict": _verdict_dict(r.verdict),
        "quadrature_error": r.quadrature_error,
        "interpretation": r.interpretation,
        "seed": r.seed,
        "tool_version": r.tool_version,
        "config": dict(r.config),
    }


def to_json(reports) -> str:
    """One report as an object, several as an array; UTF-8 text with a trailing newline."""
    if isinstance(reports, Report):
        payload = report_to_dict(reports)
    else:
        reports = list(reports)
        payload = report_to_dict(reports[0]) if len(reports) == 1 else [report_to_dict(r) for r in reports]
    return _encode(payload, 2, 0) + "\n"


_NONFINITE = {"inf": math.inf, "-inf": -math.inf, "nan": math.nan}


def _real(v):
    if isinstance(v, str):
        return _NONFINITE.get(v, v)
    return v


def _witness_from(w):
    if isinstance(w, dict):
        return {k: _witness_from(v) for k, v in w.items()}
    return _real(w)


def report_from_dict(d: dict) -> Report:
    v = d["verdict"]
    verdict = Verdict(VerdictKind(v["kind"]), _real(v["min_margin"]), _witness_from(v["witness"]), v["reason"],
                      _real(d["quadrature_error"]))
    return Report(
        claim_id=d["claim_id"],
        anchor=d["anchor"],
        params={k: _real(x) for k, x in d["params"].items()},
        sides=[SideValue(s["name"], _real(s["re"]), _real(s["im"])) for s in d["sides"]],
        comparisons=[ComparisonResult(c["lhs"], c["rhs"], _real(c["margin"])) for c in d["comparisons"]],
        verdict=verdict,
        quadrature_error=_real(d["quadrature_error"]),
        interpretation=d["interpretation"],
        seed=d["seed"],
        tool_version=d["tool_version"],
        config=d.get("config", {}),
    )


def from_json(text: str) -> list:
    """Parse JSON written by ``to_json``; always returns a list of reports."""
    data = json.loads(text)
    if isinstance(data, dict):
        data = [data]
    return [report_from_dict(d) for d in data]


def reverify(report: Report, tol: float = 1e-12) -> Report:
    """Re-run a report from its recorded inputs and check every side value.

    Raises AssertionError when a side differs by more than ``tol``
    (relative to max(1, |value|)) or the verdict kind changes.
    """
    cfg = report.config
    quad = QuadratureSpec(abs_tol=cfg.get("abs_tol", 1e-10), rel_tol=cfg.get("rel_tol", 1e-8),
                          max_subdivisions=cfg.get("max_subdivisions", 2000))
    interp = IdentityInterpretation(**report.interpretation) if report.interpretation else None
    fresh = evaluate_claim(report.claim_id, report.params, cfg.get("f"), quad, interp, report.seed)
    if fresh.verdict.kind is not report.verdict.kind:
        raise AssertionError(f"{report.claim_id}: verdict {fresh.verdict.kind.value} != {report.verdict.kind.value}")
    old = {s.name: complex(s.re, s.im) for s in report.sides}
    for s in fresh.sides:
        z = complex(s.re, s.im)
        if abs(z - old[s.name]) > tol * max(1.0, abs(z)):
            raise AssertionError(f"{report.claim_id}: side {s.name} changed from {old[s.name]} to {z}")
    return fresh


def _csv_margin(r: Report) -> str:
    m = r.verdict.min_margin
    return "" if m is None else format_real(m).strip('"')


def to_csv(reports: Iterable[Report]) -> str:
    """Lossy CSV: no side values, one row per report."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        params = ";".join(f"{k}={format_real(v) if isinstance(v, float) else v}" for k, v in r.params.items())
        w.writerow([r.claim_id, r.verdict.kind.value, _csv_margin(r), format_real(r.quadrature_error),
                    params, "" if r.seed is None else r.seed])
    return buf.getvalue()


def emit_report(reports, fmt: str = "json", path: Optional[str] = None) -> str:
    """Serialize reports and write them to ``path`` (or return the text only).

    Raises UsageError for an empty list, an unknown format or an unwritable path.
    """
    reports = [reports] if isinstance(reports, Report) else list(reports)
    if not reports:
        raise UsageError("emit_report needs at least one report")
    if fmt == "json":
        text = to_json(reports)
    elif fmt == "csv":
        text = to_csv(reports)
    else:
        raise UsageError(f"unknown format {fmt!r}; use json or csv")
    if path is not None:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from None
    return text
