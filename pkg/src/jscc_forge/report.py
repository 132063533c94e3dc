#!/usr/bin/python3
"""
Report Module

Render computation results as styled text tables, JSON documents or CSV.
Numbers are printed with a fixed number of decimals so that reports diff
cleanly between runs.
"""

import json
import logging
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, TextIO

import numpy as np
from blessed import Terminal

from .config import Config
from .criteria import StrongInterferenceReport, Verdict
from .prob_core import CommonPart, StructureReport
from .regions import COMPONENT_LABELS, RegionHull
from .simulate import COMPONENTS, EVENTS, SimResult


class ColorMode(str, Enum):
    AUTO = "auto"
    ALWAYS = "always"
    NEVER = "never"


def _jsonable(value: Any) -> Any:
    """Convert numpy and enum values and round floats for stable output."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if not np.isfinite(number):
            return None
        return round(number, Config.DECIMALS)
    return value


def to_json(data: Any) -> str:
    """Sorted-key JSON with floats rounded to the configured decimals."""
    return json.dumps(_jsonable(data), sort_keys=True, indent=2) + "\n"


class ReportFormatter:
    """Text, JSON and CSV rendering of results."""

    # Status color mappings (blessed formatting names)
    STATUS_COLORS = {
        "yes": "bright_green",
        "no": "bright_red",
        "boundary": "bright_yellow",
        "no-witness-found": "bright_yellow",
        "holds": "bright_green",
        "fails": "bright_red",
    }

    def __init__(self, color: str = "auto", stream: Optional[TextIO] = None) -> None:
        mode = ColorMode(color)
        # blessed: False styles only on a tty, True always, None never
        force_styling: Optional[bool] = {
            ColorMode.AUTO: False,
            ColorMode.ALWAYS: True,
            ColorMode.NEVER: None,
        }[mode]
        self.mode = mode
        self.term = Terminal(stream=stream, force_styling=force_styling)
        logging.debug(f"Report styling: mode={mode.value}, colors={self.term.number_of_colors}")

    @staticmethod
    def number(value: Optional[float]) -> str:
        if value is None:
            return "-"
        return f"{value:.{Config.DECIMALS}f}"

    def status(self, text: str) -> str:
        color = self.STATUS_COLORS.get(text)
        if color is None:
            return text
        return str(getattr(self.term, color)(text))

    def bold(self, text: str) -> str:
        return str(self.term.bold(text))

    def table(self, headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
        """Box-drawn table; cells are plain strings (styling applied after sizing)."""
        plain_rows = [[str(cell) for cell in row] for row in rows]
        widths = [len(h) for h in headers]
        for row in plain_rows:
            for i, cell in enumerate(row):
                widths[i] = max(widths[i], self.term.length(cell))
        widths = [w + 2 for w in widths]

        def rule(left: str, mid: str, right: str) -> str:
            return left + mid.join("─" * w for w in widths) + right

        def line(cells: Sequence[str]) -> str:
            padded = [
                " " + cell + " " * (w - 1 - self.term.length(cell))
                for cell, w in zip(cells, widths)
            ]
            return "│" + "│".join(padded) + "│"

        out = [rule("┌", "┬", "┐"), line(headers), rule("├", "┼", "┤")]
        out += [line(row) for row in plain_rows]
        out.append(rule("└", "┴", "┘"))
        return "\n".join(out)

    def heading(self, title: str, width: int = 60) -> str:
        return "\n".join(["=" * width, self.bold(title.center(width)), "=" * width])

    # ------------------------------------------------------------------
    # info
    # ------------------------------------------------------------------

    def format_value(self, label: str, value: float) -> str:
        return f"{label} = {self.number(value)}"

    def format_structure(self, reports: Sequence[StructureReport]) -> str:
        rows = [
            [r.pattern, self.status("holds" if r.holds else "fails"), f"{r.max_deviation:.3g}"]
            for r in reports
        ]
        return self.table(["Check", "Result", "Max deviation"], rows)

    def format_common_part(self, common: CommonPart) -> str:
        rows = [
            ["|U|", str(common.u_cardinality)],
            ["H(U)", self.number(common.u_entropy)],
            ["f(S1)", " ".join(str(u) for u in common.map1)],
            ["g(S2)", " ".join(str(u) for u in common.map2)],
            ["p(U)", " ".join(self.number(p) for p in common.u_pmf)],
        ]
        return self.table(["Common part", "Value"], rows)

    # ------------------------------------------------------------------
    # regions and verdicts
    # ------------------------------------------------------------------

    def format_hull(self, hull: RegionHull) -> str:
        headers = [
            f"{label}_rx{k}"
            for k in range(1, hull.receivers + 1)
            for label in COMPONENT_LABELS
        ]
        rows = [[self.number(v) for v in point] for point in hull.points]
        mode = "cooperative" if hull.cooperation else "product"
        summary = (
            f"{len(hull.points)} vertices kept of {hull.candidate_count} candidates "
            f"({mode} inputs, grid {hull.grid_resolution})"
        )
        return self.table(headers, rows) + "\n" + summary

    def format_verdict(
        self, verdict: Verdict, references: Optional[Dict[str, float]] = None
    ) -> str:
        references = references or {}
        lines = [self.heading(f"{verdict.theorem.upper()} VERDICT")]
        rows = [
            ["mode", verdict.mode.value],
            ["achievable", self.status(verdict.achievable.value)],
            ["b_min", self.number(verdict.b_min)],
        ]
        if verdict.b_query is not None:
            rows.append(["b", self.number(verdict.b_query)])
        rows.append(["margin", self.number(verdict.margin)])
        if verdict.theorem in references:
            rows.append(["reference", self.number(references[verdict.theorem])])
        if verdict.entropy_vector is not None:
            values = verdict.entropy_vector.values
            rows.append(["entropy vector", " ".join(self.number(v) for v in values)])
        if verdict.witness_weights:
            rows.append(
                ["time sharing", " ".join(self.number(w) for w in verdict.witness_weights)]
            )
        if verdict.witness is not None and not verdict.witness.source_conditioned:
            for q in range(verdict.witness.q_cardinality):
                rows.append(
                    [
                        f"p(x1|q={q}) p(x2|q={q})",
                        " ".join(self.number(p) for p in verdict.witness.cond1[q])
                        + " | "
                        + " ".join(self.number(p) for p in verdict.witness.cond2[q]),
                    ]
                )
        for key in ("oracle_b_min", "cooperative_capacity", "common_part_entropy"):
            if key in verdict.extras:
                rows.append([key.replace("_", " "), self.number(verdict.extras[key])])
        for label, margin in verdict.extras.get("conditions", {}).items():
            rows.append([label, self.number(margin)])
        lines.append(self.table(["Field", "Value"], rows))
        if verdict.precondition_report:
            lines.append(self.format_structure(verdict.precondition_report))
        strong = verdict.extras.get("strong_interference")
        if strong:
            lines.append(
                f"strong interference: {'holds' if strong['holds'] else 'not certified'} "
                f"(worst violation {self.number(strong['worst_violation'])})"
            )
        lines.extend(f"note: {note}" for note in verdict.notes)
        return "\n".join(lines)

    def format_minrate_value(
        self,
        theorem: str,
        value: float,
        oracle: Optional[float] = None,
        references: Optional[Dict[str, float]] = None,
    ) -> str:
        parts = [f"{theorem}: b_min = {self.number(value)}"]
        if oracle is not None:
            parts.append(f"oracle = {self.number(oracle)}")
        if references and theorem in references:
            parts.append(f"reference = {self.number(references[theorem])}")
        return ", ".join(parts)

    def format_strong_interference(self, report: StrongInterferenceReport) -> str:
        rows = [
            ["holds", self.status("holds" if report.holds else "fails")],
            ["b", self.number(report.b)],
            ["worst violation", self.number(report.worst_violation)],
            ["violation rx1 / rx2", " ".join(self.number(v) for v in report.violations)],
            ["classical form", str(report.classical)],
            ["grid / restarts", f"{report.grid_resolution} / {report.restarts}"],
            ["evaluations", str(report.evaluations)],
        ]
        return self.table(["Strong interference", "Value"], rows)

    # ------------------------------------------------------------------
    # simulation
    # ------------------------------------------------------------------

    def format_simulation(self, result: SimResult) -> str:
        lines = [
            self.heading("SIMULATION SUMMARY"),
            f"scheme={result.scheme} m={result.m} n={result.n} b={self.number(result.b)} "
            f"trials={result.trials} seed={result.seed}",
        ]
        headers = ["Receiver", "Errors", "Error rate", *EVENTS, *COMPONENTS]
        rows: List[List[str]] = []
        for i, k in enumerate(result.receivers):
            rows.append(
                [
                    f"rx{k}",
                    str(result.error_counts[i]),
                    self.number(result.error_rates[i]),
                    *[str(result.event_counts[i][e]) for e in EVENTS],
                    *[str(result.component_counts[i][c]) for c in COMPONENTS],
                ]
            )
        lines.append(self.table(headers, rows))
        if result.symbol_errors:
            lines.append(
                "symbol error rates: "
                + " ".join(self.number(s / result.symbols) for s in result.symbol_errors)
            )
        return "\n".join(lines)
