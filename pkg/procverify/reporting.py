"""
Plain-text rendering of verification results.

Every rendered report ends with a `VERDICT: <word>` line so scripts can
read the outcome from the last line of output.
"""

from typing import Dict, List, Mapping, Optional

from .conformance import ConformanceReport, ElementSummary, Trace
from .constants import (
    VERDICT_CONFORMING,
    VERDICT_ENUMERATED,
    VERDICT_FAILS,
    VERDICT_HOLDS,
    VERDICT_NON_CONFORMING,
    VERDICT_REACHABLE,
    VERDICT_SUMMARIZED,
    VERDICT_UNREACHABLE,
    VERDICT_WELL_FORMED,
    VERDICT_ILL_FORMED,
)
from .validation import Violation, WellFormednessReport

RULE_WIDTH = 70


def verdict_line(word: str) -> str:
    return f"VERDICT: {word}"


class ReportRenderer:
    """
    Renders reports for the terminal.

    `source` names the file a report is about; violations carrying a source
    span are printed as `source:line:col: CODE ...`.
    """

    def __init__(self, source: str = "<input>"):
        self.source = source

    def _header(self, title: str) -> str:
        return f"{title}\n" + "=" * RULE_WIDTH

    def _violation_line(self, violation: Violation) -> str:
        location = f"{self.source}:{violation.span.line}:{violation.span.column}" if violation.span else self.source
        return f"{location}: {violation.code} [{', '.join(violation.elements)}] {violation.message}"

    def render_validation(self, report: WellFormednessReport) -> str:
        """
        Render a well-formedness report.

        Args:
            report: Result of `validate`

        Returns:
            Report text ending with the verdict line
        """
        lines = [self._header(f"Process '{report.model_name}': well-formedness")]
        lines.extend(self._violation_line(v) for v in report.violations)
        lines.extend(f"warning: {self._violation_line(w)}" for w in report.warnings)
        lines.append(f"{len(report.violations)} violation(s), {len(report.warnings)} warning(s)")
        lines.append(verdict_line(VERDICT_WELL_FORMED if report.is_well_formed else VERDICT_ILL_FORMED))
        return "\n".join(lines)

    def _conformance_body(self, report: ConformanceReport) -> List[str]:
        lines = []
        for timed in report.violations:
            violation = timed.violation
            elements = f" [{', '.join(violation.elements)}]" if violation.elements else ""
            lines.append(f"t={timed.t} {violation.rule.value}{elements} {violation.message}")
        return lines

    def render_conformance(self, report: ConformanceReport, trace: Trace) -> str:
        """Render one conformance report with rule codes and time indexes."""
        lines = [self._header(f"Trace {self.source} against process '{report.model_name}'")]
        lines.append(f"{len(trace)} states (t=0..{trace.steps})")
        lines.extend(self._conformance_body(report))
        lines.append(f"{len(report.violations)} violation(s)")
        lines.append(verdict_line(report.verdict))
        return "\n".join(lines)

    def render_batch(self, reports: Mapping[str, ConformanceReport]) -> str:
        """Render a batch of conformance reports, one block per trace."""
        lines = [self._header(f"{len(reports)} trace(s) against {self.source}")]
        failing = 0
        for name, report in reports.items():
            lines.append(f"{name}: {report.verdict}")
            lines.extend(f"  {line}" for line in self._conformance_body(report))
            failing += 0 if report.is_conforming else 1
        lines.append(f"{len(reports) - failing} conforming, {failing} non-conforming")
        lines.append(verdict_line(VERDICT_NON_CONFORMING if failing else VERDICT_CONFORMING))
        return "\n".join(lines)

    def render_ltl(self, formula_text: str, holds: bool, trace: Trace, conformance: Optional[ConformanceReport]) -> str:
        lines = [self._header(f"Formula on {self.source}"), f"formula: {formula_text}"]
        lines.append(f"trace: {len(trace)} states (t=0..{trace.steps})")
        if conformance is not None and not conformance.is_conforming:
            lines.append(f"note: trace is non-conforming ({len(conformance.violations)} violation(s))")
        lines.append(f"result: {VERDICT_HOLDS if holds else VERDICT_FAILS}")
        lines.append(verdict_line(VERDICT_HOLDS if holds else VERDICT_FAILS))
        return "\n".join(lines)

    def render_reach(self, goal_text: str, depth: int, witness: Optional[Trace], witness_text: str = "") -> str:
        """Render a reachability result; the witness is shown in trace format."""
        lines = [self._header(f"Reachability on {self.source}"), f"goal: {goal_text}", f"depth: {depth}"]
        if witness is None:
            lines.append(f"no legal evolution of at most {depth} steps reaches the goal")
            lines.append(verdict_line(VERDICT_UNREACHABLE))
        else:
            lines.append(f"shortest witness: {witness.steps} step(s)")
            lines.append(witness_text.rstrip("\n"))
            lines.append(verdict_line(VERDICT_REACHABLE))
        return "\n".join(lines)

    def render_enumeration(self, depth: int, count: int, listing: str = "") -> str:
        lines = [self._header(f"Conforming traces of {self.source}")]
        if listing:
            lines.append(listing.rstrip("\n"))
        lines.append(f"{count} conforming trace(s) with {depth} step(s)")
        lines.append(verdict_line(VERDICT_ENUMERATED))
        return "\n".join(lines)

    def render_summary(self, summary: Dict[str, ElementSummary]) -> str:
        """Per-element table: first Active/Done index, activations, final state."""
        def cell(value: Optional[int]) -> str:
            return "-" if value is None else str(value)

        width = max((len(element_id) for element_id in summary), default=7)
        lines = [self._header(f"Summary of {self.source}")]
        lines.append(f"{'element':<{width}}  active  done  runs  final")
        for element_id, entry in summary.items():
            lines.append(
                f"{element_id:<{width}}  {cell(entry.first_active):>6}  {cell(entry.first_done):>4}  "
                f"{entry.activations:>4}  {entry.final_state.value}"
            )
        reworked = sorted(e for e, entry in summary.items() if entry.activations > 1)
        if reworked:
            lines.append(f"reworked: {', '.join(reworked)}")
        lines.append(verdict_line(VERDICT_SUMMARIZED))
        return "\n".join(lines)
