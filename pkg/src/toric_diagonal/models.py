"""Data model for verification reports.

A :class:`CaseResult` records one checked claim; a
:class:`VerificationReport` collects the cases of one suite run in
``claim_id`` order, so that equal inputs serialize to equal bytes.
"""

import enum
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


class Status(str, enum.Enum):
    """Outcome of a single check."""

    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


#: Suite names accepted by the runner, in execution order for ``all``.
SUITES = (
    "algebra",
    "frustration-free",
    "ltqo",
    "expectation",
    "symmetries",
    "groupoid",
    "invariant",
    "no-lift",
    "oracle-crosscheck",
)

#: Version of the JSON layout produced by :meth:`VerificationReport.to_dict`.
SCHEMA_VERSION = 1


@dataclass
class CaseResult:
    """A single verified claim.

    Attributes:
        claim_id: Stable identifier, e.g. ``"algebra.ribbon-commutation"``.
        anchor: Formula or statement the check realizes.
        parameters: Sizes and counts the check ran with.
        status: Pass, fail or skipped.
        witness: Evidence on success, a counterexample on failure.
        elapsed: Wall-clock seconds spent in the check.
    """

    claim_id: str
    anchor: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    status: Status = Status.PASS
    witness: Dict[str, Any] = field(default_factory=dict)
    elapsed: float = 0.0

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "claim_id": self.claim_id,
            "anchor": self.anchor,
            "parameters": self.parameters,
            "status": self.status.value,
            "witness": self.witness,
        }
        if include_timing:
            out["elapsed"] = round(self.elapsed, 6)
        return out


@dataclass
class VerificationReport:
    """All cases of one suite run.

    Attributes:
        suite: Suite name (one of :data:`SUITES` or ``"all"``).
        seed: Base RNG seed.
        parameters: Run-wide parameters (box size, samples, ...).
        cases: Results sorted by ``claim_id``.
        elapsed: Wall-clock seconds for the whole run.
    """

    suite: str
    seed: int
    parameters: Dict[str, Any] = field(default_factory=dict)
    cases: List[CaseResult] = field(default_factory=list)
    elapsed: Optional[float] = None

    @property
    def passed(self) -> bool:
        return bool(self.cases) and all(c.status is Status.PASS for c in self.cases)

    def counts(self) -> Dict[str, int]:
        out = {s.value: 0 for s in Status}
        for c in self.cases:
            out[c.status.value] += 1
        return out

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "seed": self.seed,
            "parameters": self.parameters,
            "summary": self.counts(),
            "cases": [c.to_dict(include_timing) for c in self.cases],
        }
        if include_timing and self.elapsed is not None:
            out["elapsed"] = round(self.elapsed, 6)
        return out
