import json

import pytest

from . import csv_rows, metadata_value, run_semicon_with_timeout

LOG2_GOLDEN = 0.6942419136306174


class TestReportCommands:
    """End-to-end runs of the table-producing commands."""

    def test_verify_table1(self):
        result = run_semicon_with_timeout(["verify-table1"])
        assert result.returncode == 0
        rows = csv_rows(result.stdout)
        assert rows[0] == ["quantity", "expected", "observed", "match"]
        assert len(rows) == 11
        assert all(row[-1] == "true" for row in rows[1:])

    def test_capacity_at_threshold_is_one(self):
        result = run_semicon_with_timeout(["capacity", "--rll", "1", "--cap", "1/4"])
        assert result.returncode == 0
        assert float(metadata_value(result.stdout, "capacity")) == pytest.approx(1.0)
        assert metadata_value(result.stdout, "feasible") == "true"

    def test_capacity_run_free(self):
        result = run_semicon_with_timeout(["capacity", "--rll", "1", "--cap", "0"])
        assert result.returncode == 0
        assert float(metadata_value(result.stdout, "capacity")) == pytest.approx(LOG2_GOLDEN, abs=1e-6)

    def test_capacity_from_spec_file(self, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"alphabet_size": 2, "forbidden": [{"word": "11", "cap": "1/8"}]}))
        from_file = run_semicon_with_timeout(["capacity", "--spec", str(spec), "-f", "json"])
        shortcut = run_semicon_with_timeout(["capacity", "--rll", "1", "--cap", "1/8", "-f", "json"])
        assert from_file.returncode == 0
        assert shortcut.returncode == 0
        first = json.loads(from_file.stdout)["metadata"]["capacity"]
        second = json.loads(shortcut.stdout)["metadata"]["capacity"]
        assert first == pytest.approx(second, abs=1e-9)

    def test_bounds_grid_without_solver(self):
        result = run_semicon_with_timeout(["bounds", "--k", "2", "--p-grid", "0:1/8:1/16", "--no-solve"])
        assert result.returncode == 0
        rows = csv_rows(result.stdout)
        assert rows[0] == ["k", "p", "lower", "solved", "upper", "refined_upper_gap"]
        assert [row[1] for row in rows[1:]] == ["0", "1/16", "1/8"]
        assert rows[1][4] == ""
        assert float(rows[3][2]) == pytest.approx(1.0)

    def test_bounds_with_solver_to_file(self, tmp_path):
        out = tmp_path / "bounds.csv"
        result = run_semicon_with_timeout(["bounds", "--k", "1", "--p", "1/20", "-o", str(out)])
        assert result.returncode == 0
        assert result.stdout == ""
        k, p, lower, solved, upper, _ = csv_rows(out.read_text())[1]
        assert (k, p) == ("1", "1/20")
        assert float(lower) <= float(solved) + 1e-7 <= float(upper) + 2e-7

    def test_enumerate_counts(self):
        result = run_semicon_with_timeout(["enumerate", "--rll", "1", "--cap", "0", "--n", "5"])
        assert result.returncode == 0
        rows = csv_rows(result.stdout)
        assert [row[1] for row in rows[1:]] == ["2", "3", "5", "8", "13"]

    def test_enumerate_cyclic_check(self):
        result = run_semicon_with_timeout(["enumerate", "--rll", "1", "--cap", "1/10", "--n", "10",
                                           "--check-cyclic", "-f", "json"])
        assert result.returncode == 0
        assert json.loads(result.stdout)["metadata"]["all_hold"] is True

    def test_synth_chain(self):
        result = run_semicon_with_timeout(["synth-chain", "--rll", "1", "--cap", "1/8", "--mixing", "6", "-f", "json"])
        assert result.returncode == 0
        data = json.loads(result.stdout)
        assert len(data["rows"]) == 4
        assert sum(row["edge_frequency"] for row in data["rows"]) == pytest.approx(1.0)
        assert "mixing_alpha" in data["metadata"]

    def test_simulate(self):
        result = run_semicon_with_timeout(["simulate", "--rll", "1", "--cap", "1/2", "--n", "1024",
                                           "--epsilon", "1/5", "--trials", "3", "-f", "json"])
        assert result.returncode == 0
        data = json.loads(result.stdout)
        assert data["metadata"]["success_rate"] == 1.0
        assert [row["success"] for row in data["rows"]] == [True, True, True]


class TestVerbosity:
    """Progress messages go to stderr only."""

    def test_verbose_messages_on_stderr(self):
        result = run_semicon_with_timeout(["capacity", "--rll", "2", "--cap", "1/20", "-vv"])
        assert result.returncode == 0
        assert "📐" in result.stderr
        assert "📐" not in result.stdout

    def test_quiet(self, tmp_path):
        out = tmp_path / "table.csv"
        result = run_semicon_with_timeout(["verify-table1", "-v", "--quiet", "-o", str(out)])
        assert result.returncode == 0
        assert result.stderr == ""
        assert out.exists()


class TestErrors:
    """Failures exit 1 with a one-line diagnostic."""

    def test_missing_constraint(self):
        result = run_semicon_with_timeout(["capacity"])
        assert result.returncode == 1
        assert "Error: input:" in result.stderr

    def test_missing_spec_file(self, tmp_path):
        result = run_semicon_with_timeout(["capacity", "--spec", str(tmp_path / "none.json")])
        assert result.returncode == 1
        assert "Error: parse: File not found" in result.stderr

    def test_bounds_outside_range(self):
        result = run_semicon_with_timeout(["bounds", "--k", "1", "--p", "1/2"])
        assert result.returncode == 1
        assert "Error:" in result.stderr

    def test_existing_output_with_closed_stdin(self, tmp_path):
        out = tmp_path / "table.csv"
        out.write_text("keep me")
        result = run_semicon_with_timeout(["verify-table1", "-o", str(out)], input="")
        assert result.returncode == 1
        assert "User aborted" in result.stderr
        assert out.read_text() == "keep me"

    def test_overwrite_flag(self, tmp_path):
        out = tmp_path / "table.csv"
        out.write_text("old")
        result = run_semicon_with_timeout(["verify-table1", "-o", str(out), "--overwrite"])
        assert result.returncode == 0
        assert out.read_text().startswith("quantity,")
