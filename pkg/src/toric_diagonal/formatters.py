"""Human-readable formatters for exact values and reports.

Scalars print exactly: phases as ``1``, ``i``, ``-1``, ``-i``;
dyadics as ``a/2^k``; Gaussian rationals as ``re+imi``.  Reports
render either as canonical JSON (sorted keys, so equal reports give
equal bytes) or as a markdown table.
"""

import json
from typing import Any, List, Optional, Sequence

from toric_diagonal.cylinder import Dyadic
from toric_diagonal.lattice import LatticePath, Patch, site_key
from toric_diagonal.models import Status, VerificationReport
from toric_diagonal.pauli import GaussianRational, Phase, PauliOperator
from toric_diagonal.toric import NoLiftReport

_STATUS_MARKS = {
    Status.PASS: "✅ pass",
    Status.FAIL: "❌ fail",
    Status.SKIPPED: "⏭ skipped",
}


def format_phase(value: Optional[Phase]) -> str:
    """``""`` for ``None``, otherwise the phase label."""
    return "" if value is None else value.label


def format_dyadic(value: Optional[Dyadic]) -> str:
    """Format a dyadic rational.

    * ``None`` → ``""``
    * integer → ``"<n>"``
    * otherwise → ``"<a>/2^<k>"`` in lowest terms
    """
    return "" if value is None else str(value)


def format_gaussian(value: Optional[GaussianRational]) -> str:
    return "" if value is None else str(value)


def format_duration(seconds: Optional[float]) -> str:
    """Seconds with up to 2 decimals, trailing zeros stripped, plus ``s``."""
    if seconds is None:
        return ""
    formatted = f"{seconds:.2f}"
    if "." in formatted:
        formatted = formatted.rstrip("0").rstrip(".")
    return f"{formatted}s"


def _compact(value: Any) -> str:
    text = json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return text.replace("|", "\\|")


def render_json(report: VerificationReport, include_timing: bool = False) -> str:
    """Canonical JSON with a trailing newline."""
    return json.dumps(
        report.to_dict(include_timing), sort_keys=True, indent=2, ensure_ascii=False
    ) + "\n"


def render_markdown(report: VerificationReport, include_timing: bool = False) -> str:
    """A markdown summary line followed by one table row per case."""
    counts = report.counts()
    lines: List[str] = [
        f"# Verification report: {report.suite}",
        "",
        f"seed {report.seed} · {counts['pass']} pass · {counts['fail']} fail · "
        f"{counts['skipped']} skipped"
        + (f" · {format_duration(report.elapsed)}" if include_timing and report.elapsed is not None else ""),
        "",
    ]
    header = ["claim", "anchor", "status", "parameters", "witness"]
    if include_timing:
        header.append("time")
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + "---|" * len(header))
    for case in report.cases:
        row = [
            f"`{case.claim_id}`",
            case.anchor.replace("|", "\\|"),
            _STATUS_MARKS[case.status],
            _compact(case.parameters),
            _compact(case.witness),
        ]
        if include_timing:
            row.append(format_duration(case.elapsed))
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def render_no_lift_table(reports: Sequence[NoLiftReport]) -> str:
    """One markdown row per box size with every certificate fact."""
    lines = [
        "| n | stars | ribbon steps | product = ribbon | single flip infeasible "
        "| pair feasible | pair ribbon | holds |",
        "|" + "---|" * 8,
    ]
    mark = {True: "yes", False: "NO"}
    for r in reports:
        lines.append(
            f"| {r.n} | {r.star_count} | {r.ribbon_steps} | {mark[r.product_is_ribbon]} "
            f"| {mark[r.single_flip_infeasible]} | {mark[r.pair_feasible]} "
            f"| {mark[r.pair_ribbon_ok]} | {mark[r.holds]} |"
        )
    return "\n".join(lines) + "\n"


def describe_object(obj: object) -> str:
    """Multi-line summary of a patch, path or Pauli operator.

    Raises:
        TypeError: For any other object.
    """
    if isinstance(obj, Patch):
        lines = [f"patch: {len(obj)} edges"]
        if obj.edges:
            xmin, xmax, ymin, ymax = obj.bounding_box()
            lines.append(f"bounding box: [{xmin}, {xmax}] x [{ymin}, {ymax}]")
        lines.append(f"vertices: {len(obj.vertices())} ({len(obj.interior_vertices())} interior)")
        lines.append(f"faces: {len(obj.faces())} ({len(obj.interior_faces())} interior)")
        return "\n".join(lines) + "\n"
    if isinstance(obj, LatticePath):
        ends = ", ".join(str(w) for w in sorted(obj.endpoints, key=site_key))
        return "\n".join([
            f"{obj.kind.value} path: {len(obj.edges)} steps",
            f"closed: {'yes' if obj.is_closed else 'no'}",
            f"endpoints: {ends or '-'}",
            "edges: " + " ".join(str(e) for e in obj.edges),
        ]) + "\n"
    if isinstance(obj, PauliOperator):
        return "\n".join([
            f"pauli operator: {obj}",
            f"phase: {format_phase(obj.phase)}",
            f"weight: {obj.weight}",
            f"hermitian: {'yes' if obj.is_hermitian else 'no'}",
        ]) + "\n"
    raise TypeError(f"Cannot describe {type(obj).__name__}")
