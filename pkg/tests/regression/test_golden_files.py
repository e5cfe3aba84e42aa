import json

from . import assert_exact_match, golden_path, load_golden_file, run_semicon_stdout


def test_csv_exact_output_match():
    """The reference triple table as CSV (golden file test)."""
    expected_output = load_golden_file("expected_table1.csv")

    result = run_semicon_stdout(["verify-table1"])

    assert result.returncode == 0
    assert_exact_match(result.stdout, expected_output, "csv")


def test_json_exact_output_match():
    """The reference triple table as JSON (golden file test)."""
    expected_data = load_golden_file("expected_table1.json")

    result = run_semicon_stdout(["verify-table1", "-f", "json"])

    assert result.returncode == 0
    assert_exact_match(json.loads(result.stdout), expected_data, "json")
    # Key order and indentation are part of the format
    assert result.stdout == golden_path("expected_table1.json").read_text(encoding="utf-8")


def test_txt_exact_output_match():
    """The reference triple table as TXT (golden file test)."""
    expected_output = load_golden_file("expected_table1.txt")

    result = run_semicon_stdout(["verify-table1", "-f", "txt"])

    assert result.returncode == 0
    assert_exact_match(result.stdout, expected_output, "txt")


def test_file_output_matches_stdout(tmp_path):
    """Writing through -o produces the same bytes as stdout."""
    out = tmp_path / "table.csv"

    result = run_semicon_stdout(["verify-table1", "-o", str(out)])

    assert result.returncode == 0
    assert out.read_text(encoding="utf-8") == load_golden_file("expected_table1.csv")
