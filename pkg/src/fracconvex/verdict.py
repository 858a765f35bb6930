"""Outcome of checking an inequality: holds, fails with a witness, or indeterminate."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Optional


class VerdictKind(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Verdict:
    """``min_margin`` is the smallest ``rhs - lhs`` seen (negative when failing)."""

    kind: VerdictKind
    min_margin: Optional[float] = None
    witness: Any = None
    reason: Optional[str] = None
    quadrature_error: float = 0.0

    @classmethod
    def holds(cls, min_margin: float, quadrature_error: float = 0.0) -> "Verdict":
        return cls(VerdictKind.HOLDS, min_margin=min_margin, quadrature_error=quadrature_error)

    @classmethod
    def fails(cls, witness, min_margin: float, quadrature_error: float = 0.0) -> "Verdict":
        return cls(VerdictKind.FAILS, min_margin=min_margin, witness=witness, quadrature_error=quadrature_error)

    @classmethod
    def indeterminate(cls, reason: str, quadrature_error: float = 0.0) -> "Verdict":
        return cls(VerdictKind.INDETERMINATE, reason=reason, quadrature_error=quadrature_error)

    @property
    def is_holds(self) -> bool:
        return self.kind is VerdictKind.HOLDS

    @property
    def is_fails(self) -> bool:
        return self.kind is VerdictKind.FAILS

    @property
    def is_indeterminate(self) -> bool:
        return self.kind is VerdictKind.INDETERMINATE
