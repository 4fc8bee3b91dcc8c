"""
Common utilities module.

This package provides reusable formatting helpers shared by the commands.
"""

from .formatters import (
    format_eval_table,
    format_graph_summary,
    format_percentage,
)

__all__ = [
    "format_eval_table",
    "format_graph_summary",
    "format_percentage",
]
