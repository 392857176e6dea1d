"""Trichotomous decision results with re-checkable evidence."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

YES = "YES"
NO = "NO"
UNKNOWN = "UNKNOWN_AT_DEGREE"


@dataclass
class Verdict:
    """YES with a witness, NO with a certificate, or UNKNOWN at a degree.

    A YES always carries enough data to re-verify it independently; a NO
    is qualified by the degree of the lift/jet computations that produced
    it unless the underlying module is known exactly.
    """

    status: str
    degree: int
    witness: Any = None
    certificate: Any = None
    evidence: list[dict] = field(default_factory=list)

    @property
    def yes(self) -> bool:
        return self.status == YES

    @property
    def no(self) -> bool:
        return self.status == NO

    def note(self, step: str, **data) -> "Verdict":
        self.evidence.append({"step": step, **data})
        return self


class UnsupportedShape(ValueError):
    """The input is outside the shapes this method can handle."""


class Inapplicable(ValueError):
    """A theorem's hypotheses fail, so its pipeline gives no verdict."""
