"""Verification verdicts and the counterexample inequality trace."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from aligned_drawing.models.drawing import Drawing


@dataclass(frozen=True)
class CheckResult:
    """
    One checked property.

    prop is one of "arrangement", "planar", "embedding", "placement", "crossings",
    "orders"; witness names the offending vertex, edge or track.
    """

    prop: str
    ok: bool
    witness: Any = None
    expected: Any = None
    observed: Any = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "prop": self.prop,
            "ok": self.ok,
            "witness": _plain(self.witness),
            "expected": _plain(self.expected),
            "observed": _plain(self.observed),
        }


@dataclass
class VerdictReport:
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.ok]

    @property
    def first_failure(self) -> Optional[CheckResult]:
        failures = self.failures
        return failures[0] if failures else None

    def to_dict(self) -> Dict[str, Any]:
        return {"pass": self.passed, "checks": [c.to_dict() for c in self.checks]}


@dataclass(frozen=True)
class InequalityCheck:
    """An exact comparison lhs < rhs together with the premise it depends on."""

    index: int
    premise: bool
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs


@dataclass
class CounterexampleTrace:
    """
    The chain of inequalities ruling out a drawing of counterexample2.

    crossing[i] compares |x| or |y| of v_i scaled by the ray distances of u_i and u_{i+1};
    estimate[i] compares consecutive coordinates of the v's. The products satisfy
    left < middle < left whenever all premises hold, which is impossible.
    """

    lambdas: List[Fraction]
    crossing: List[InequalityCheck]
    estimate: List[InequalityCheck]
    left_product: Fraction
    middle_product: Fraction

    @property
    def premises_hold(self) -> bool:
        return all(c.premise for c in self.crossing + self.estimate)

    @property
    def implications_hold(self) -> bool:
        """Every inequality whose premise holds is satisfied."""
        return all(c.holds for c in self.crossing + self.estimate if c.premise)

    @property
    def contradiction(self) -> bool:
        return self.premises_hold and self.left_product < self.middle_product < self.left_product

    def to_dict(self) -> Dict[str, Any]:
        def rows(checks: List[InequalityCheck]) -> List[Dict[str, Any]]:
            return [
                {
                    "i": c.index,
                    "premise": c.premise,
                    "lhs": str(c.lhs),
                    "rhs": str(c.rhs),
                    "holds": c.holds,
                }
                for c in checks
            ]

        return {
            "lambdas": [str(v) for v in self.lambdas],
            "crossing": rows(self.crossing),
            "estimate": rows(self.estimate),
            "left_product": str(self.left_product),
            "middle_product": str(self.middle_product),
            "premises_hold": self.premises_hold,
            "implications_hold": self.implications_hold,
        }


@dataclass
class SearchResult:
    """Outcome of random_search: a verified drawing, or the closest miss."""

    found: bool
    drawing: Optional[Drawing] = None
    trials: int = 0
    best_failed_checks: Optional[int] = None
    histogram: Dict[str, int] = field(default_factory=dict)


def _plain(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    if isinstance(value, list):
        return [_plain(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    if value is None or isinstance(value, (str, int, bool, float)):
        return value
    return str(value)
