"""
JSON format writer for structured output with metadata.

Rows become records keyed by column name; the report metadata (spec, solver
diagnostics, seeds) travels alongside them.
"""

import json

from . import FormatWriter, Report, plain_value, register_format


class JsonFormatWriter(FormatWriter):
    """Writer for JSON format output."""

    def _create_report_data(self, report: Report) -> dict:
        """Create the complete report data structure."""
        return {
            "title": report.title,
            "rows": [
                {column: plain_value(value) for column, value in zip(report.columns, row)}
                for row in report.rows
            ],
            "metadata": plain_value(report.metadata),
        }

    def render(self, report: Report) -> str:
        return json.dumps(self._create_report_data(report), indent=2, ensure_ascii=False) + "\n"


# Register the format
register_format("json", JsonFormatWriter())
