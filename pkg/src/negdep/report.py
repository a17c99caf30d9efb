"""Verdict containers returned by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .lattice import RankError


class Verdict(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass
class PropertyReport:
    """Outcome of a property query.

    ``witness`` is set exactly when the verdict is ``fails`` and holds enough
    structure to re-check the violation independently.  ``budget_used`` counts
    candidate evaluations for sampled checks.
    """

    property: str
    verdict: Verdict
    witness: dict[str, Any] | None = None
    budget_used: int | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.verdict = Verdict(self.verdict)
        if self.verdict is Verdict.FAILS and self.witness is None:
            raise ValueError("a failing report needs a witness")

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @property
    def fails(self) -> bool:
        return self.verdict is Verdict.FAILS

    @property
    def inconclusive(self) -> bool:
        return self.verdict is Verdict.INCONCLUSIVE

    def __bool__(self) -> bool:
        return self.holds

    def __str__(self) -> str:
        s = f"{self.property}: {self.verdict}"
        if self.witness:
            s += f" witness={self.witness}"
        if self.budget_used is not None:
            s += f" budget_used={self.budget_used}"
        return s


def holds(prop: str, **details) -> PropertyReport:
    return PropertyReport(prop, Verdict.HOLDS, details=details)


def fails(prop: str, witness: dict, **details) -> PropertyReport:
    return PropertyReport(prop, Verdict.FAILS, witness=witness, details=details)


# checkers raise this when asked for more variables than they support
SizeLimitError = RankError
