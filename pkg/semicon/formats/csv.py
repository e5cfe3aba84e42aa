"""
CSV format writer, the default for every table.

A fixed header row followed by one line per report row. Metadata is not part
of the CSV body so that tables stay directly loadable by plotting tools.
"""

import csv
import io

from . import FormatWriter, Report, register_format, render_cell


class CsvFormatWriter(FormatWriter):
    """Writer for CSV format output."""

    def render(self, report: Report) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(report.columns)
        for row in report.rows:
            writer.writerow([render_cell(value) for value in row])
        return buffer.getvalue()


# Register the format
register_format("csv", CsvFormatWriter())
