import json
import subprocess
from pathlib import Path

PROJECT_ROOT = Path(__file__).parent.parent.parent


def run_semicon_stdout(args, cwd=None):
    """Run semicon with output on stdout and return the result."""
    if cwd is None:
        cwd = PROJECT_ROOT

    return subprocess.run(
        ["semicon"] + list(args),
        capture_output=True,
        text=True,
        cwd=str(cwd)
    )


def golden_path(name: str) -> Path:
    return Path(__file__).parent.parent / "data" / name


def load_golden_file(name):
    """Load a golden file; JSON files are parsed."""
    with golden_path(name).open(encoding="utf-8") as f:
        if name.endswith(".json"):
            return json.load(f)
        return f.read()


def assert_exact_match(actual, expected, format_type):
    """Assert that actual output matches the golden file byte for byte."""
    if format_type == "json":
        assert actual == expected, (
            f"JSON output doesn't match expected:\n"
            f"Expected: {json.dumps(expected, indent=2)}\n"
            f"Actual:   {json.dumps(actual, indent=2)}"
        )
    else:
        assert actual == expected, (
            f"{format_type.upper()} output doesn't match expected:\n"
            f"Expected lines: {expected.splitlines()}\n"
            f"Actual lines:   {actual.splitlines()}"
        )
