"""
Output formats for command results.

Every command produces a Report: a title, column names, rows of cells and a
metadata mapping. This package renders reports through a registry of
writers so the CLI can offer every format with a single -f/--format flag.

Architecture:
    - Report: Plain table plus metadata, independent of any output format
    - FormatWriter: Base class that all format writers must inherit from
    - Registry system: Automatic discovery of available formats
    - Individual modules: Each format (csv, json, txt) in its own file
    - Auto-registration: Formats register themselves on import

Adding New Formats:
    1. Create a new file in this package (e.g., foo.py)
    2. Inherit from FormatWriter and implement render()
    3. Call register_format() at module level
    4. Import the module in this __init__.py file

Cell values are rendered deterministically: rationals as "num/den", floats
with 17 significant digits, booleans as true/false.
"""

import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np


@dataclass
class Report:
    """Tabular command result."""
    title: str
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def column(self, name: str) -> List[Any]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


def render_cell(value: Any) -> str:
    """Locale-independent text form of a cell value."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def plain_value(value: Any) -> Any:
    """JSON-compatible form of a cell or metadata value."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, Fraction):
        return render_cell(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else render_cell(value)
    if isinstance(value, np.ndarray):
        return [plain_value(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): plain_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain_value(v) for v in value]
    return value


class FormatWriter:
    """Base class for format writers."""

    def render(self, report: Report) -> str:
        """Render a report as text."""
        raise NotImplementedError("Format writers must implement render()")

    def write(self, report: Report, output_file: Path, verbose: bool = False,
              vprint_func: Optional[Callable[[str, int], None]] = None) -> None:
        """Write a report to a file."""
        content = self.render(report)
        with output_file.open("w", encoding="utf-8", newline="") as f:
            f.write(content)
        if verbose and vprint_func is not None:
            vprint_func(f"{report.title}: {len(report.rows)} rows written", 1)

    def write_to_stdout(self, report: Report) -> None:
        """Write a report to stdout."""
        sys.stdout.write(self.render(report))


# Format registry - populated by the individual format modules
_format_registry: Dict[str, FormatWriter] = {}


def register_format(name: str, writer: FormatWriter) -> None:
    """Register a format writer."""
    _format_registry[name] = writer


def get_format_writer(name: str) -> FormatWriter:
    """Get a format writer by name."""
    if name not in _format_registry:
        raise ValueError(f"Unknown format: {name}")
    return _format_registry[name]


def get_supported_formats() -> List[str]:
    """Get list of supported format names."""
    return list(_format_registry.keys())


def write_format(format_name: str, report: Report, output_file: Path, verbose: bool = False,
                 vprint_func: Optional[Callable[[str, int], None]] = None) -> None:
    """Write a report using the specified format."""
    get_format_writer(format_name).write(report, output_file, verbose, vprint_func)


def write_format_to_stdout(format_name: str, report: Report) -> None:
    """Write a report to stdout using the specified format."""
    get_format_writer(format_name).write_to_stdout(report)


# Auto-import format modules to register them
from . import csv, json, txt  # noqa: E402
