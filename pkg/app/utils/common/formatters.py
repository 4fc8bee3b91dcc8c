"""
Common formatting utilities for command-line output.

This module provides reusable formatting functions for scores, evaluation
tables and graph summaries printed by the commands.
"""

from typing import List

from app.schemas.evaluation import EvalReport, SectionReport
from app.schemas.graph import KnowledgeGraph


def format_percentage(value: float, digits: int = 2) -> str:
    """
    Format a fraction as a percentage without the percent sign.

    Args:
        value: Fraction in [0, 1]
        digits: Decimal places (default: 2)

    Returns:
        Formatted percentage string

    Example:
        >>> format_percentage(0.9013)
        "90.13"
    """
    return f"{value * 100:.{digits}f}"


def _section_lines(title: str, section: SectionReport) -> List[str]:
    width = max([len(title), len("micro avg")] + [len(row.label) for row in section.rows])
    lines = [f"{title:<{width}}  {'P':>6}  {'R':>6}  {'F1':>6}  {'support':>7}"]
    for row in section.rows:
        lines.append(
            f"{row.label:<{width}}  {format_percentage(row.precision):>6}  "
            f"{format_percentage(row.recall):>6}  {format_percentage(row.f1):>6}  {row.support:>7}"
        )
    support = sum(row.support for row in section.rows)
    micro = section.micro
    lines.append(
        f"{'micro avg':<{width}}  {format_percentage(micro.precision):>6}  "
        f"{format_percentage(micro.recall):>6}  {format_percentage(micro.f1):>6}  {support:>7}"
    )
    return lines


def format_eval_table(report: EvalReport) -> str:
    """
    Render an evaluation report as a plain-text table.

    One block per element kind with per-label precision, recall, F1 (as
    percentages with two decimals) and support, followed by the micro average.

    Args:
        report: Report produced by ScorerService.evaluate

    Returns:
        Multi-line table ending with a newline
    """
    blocks = [
        _section_lines("entities", report.entities),
        _section_lines("attributes", report.attributes),
        _section_lines("relations", report.relations),
    ]
    return "\n\n".join("\n".join(block) for block in blocks) + "\n"


def format_graph_summary(graph: KnowledgeGraph) -> str:
    """Single-line count summary of a sentence graph."""
    return (
        f"{len(graph.tokens)} tokens, {len(graph.entities)} entities, "
        f"{len(graph.attributes)} attributes, {len(graph.relations)} relations"
    )
