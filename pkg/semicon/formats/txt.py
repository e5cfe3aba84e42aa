"""
TXT format writer: an aligned, human-readable table.

The title comes first, then metadata as "key: value" lines, then the table
with columns padded to a common width.
"""

from typing import List

from . import FormatWriter, Report, register_format, render_cell


def format_table(columns: List[str], rows: List[List[str]]) -> List[str]:
    """Pad every column to its widest cell."""
    widths = [len(c) for c in columns]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return lines


class TxtFormatWriter(FormatWriter):
    """Writer for TXT format output."""

    def render(self, report: Report) -> str:
        lines = [report.title]
        for key, value in report.metadata.items():
            lines.append(f"{key}: {render_cell(value)}")
        if report.columns:
            lines.append("")
            lines.extend(format_table(report.columns, [[render_cell(v) for v in row] for row in report.rows]))
        return "\n".join(lines) + "\n"


# Register the format
register_format("txt", TxtFormatWriter())
