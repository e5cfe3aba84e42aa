"""
Unit tests for the helper functions of semicon.__main__ and the output formats.

These tests focus on functions that can be tested in isolation, without
running a solver or touching files outside tmp_path.
"""
import argparse
import json
import math
from fractions import Fraction
from pathlib import Path
from unittest.mock import MagicMock, patch

import numpy as np
import pytest
from returns.pipeline import is_successful

from semicon.__main__ import (Config, check_file_overwrite, create_config, create_print_wrapper,
                              create_run_context, describe_failure, parse_arguments, parse_p_grid,
                              resolve_spec, run_command, run_enumerate, table1_report)
from semicon.errors import DecodeFailure, InfeasibleSpecError, InputError, SpecError
from semicon.formats import (Report, get_format_writer, get_supported_formats, plain_value, render_cell,
                             write_format)
from semicon.words import dump_spec, make_spec, rll_spec

from . import create_mock_run_context


def sample_report() -> Report:
    return Report(
        title="Sample",
        columns=["p", "value", "ok"],
        rows=[[Fraction(1, 8), 0.5, True], [Fraction(0), None, False]],
        metadata={"k": 2, "cap": Fraction(1, 20)},
    )


class TestRenderCell:
    """Test locale-independent cell rendering."""

    def test_rationals(self):
        assert render_cell(Fraction(1, 8)) == "1/8"
        assert render_cell(Fraction(3)) == "3"

    def test_floats_use_17_significant_digits(self):
        assert render_cell(0.1) == "0.10000000000000001"
        assert render_cell(np.float64(0.5)) == "0.5"

    def test_special_values(self):
        assert render_cell(math.inf) == "inf"
        assert render_cell(None) == ""
        assert render_cell(True) == "true"
        assert render_cell(np.bool_(False)) == "false"
        assert render_cell(np.int64(7)) == "7"

    def test_plain_value_nesting(self):
        value = plain_value({"a": [Fraction(1, 3), math.inf], "b": np.array([1, 2])})
        assert value == {"a": ["1/3", "inf"], "b": [1, 2]}


class TestFormatWriters:
    """Test the csv, json and txt writers."""

    def test_registry(self):
        assert set(get_supported_formats()) == {"csv", "json", "txt"}
        with pytest.raises(ValueError):
            get_format_writer("xml")

    def test_csv(self):
        text = get_format_writer("csv").render(sample_report())
        assert text == "p,value,ok\n1/8,0.5,true\n0,,false\n"

    def test_json(self):
        data = json.loads(get_format_writer("json").render(sample_report()))
        assert data["title"] == "Sample"
        assert data["rows"][0] == {"p": "1/8", "value": 0.5, "ok": True}
        assert data["rows"][1]["value"] is None
        assert data["metadata"] == {"k": 2, "cap": "1/20"}

    def test_txt(self):
        lines = get_format_writer("txt").render(sample_report()).splitlines()
        assert lines[0] == "Sample"
        assert lines[1] == "k: 2"
        assert lines[2] == "cap: 1/20"
        assert lines[4].split() == ["p", "value", "ok"]
        assert lines[6].split() == ["1/8", "0.5", "true"]

    def test_write_to_file(self, tmp_path):
        target = tmp_path / "out.csv"
        write_format("csv", sample_report(), target)
        assert target.read_text().startswith("p,value,ok\n")


class TestCreatePrintWrapper:
    """Test the create_print_wrapper function."""

    def test_verbose_level_0_always_prints(self, capsys):
        """Test that level 0 messages always print when not quiet."""
        vprint = create_print_wrapper(verbose_level=0, quiet=False)
        vprint("Test message", 0)

        captured = capsys.readouterr()
        assert "Test message" in captured.err
        assert captured.out == ""

    def test_verbose_levels(self, capsys):
        """Test that level 1 needs -v and level 2 needs -vv."""
        create_print_wrapper(verbose_level=0, quiet=False)("Level 1 message", 1)
        assert capsys.readouterr().err == ""

        create_print_wrapper(verbose_level=1, quiet=False)("Level 1 message", 1)
        assert "Level 1 message" in capsys.readouterr().err

        create_print_wrapper(verbose_level=1, quiet=False)("Level 2 message", 2)
        assert capsys.readouterr().err == ""

        create_print_wrapper(verbose_level=2, quiet=False)("Level 2 message", 2)
        assert "Level 2 message" in capsys.readouterr().err

    def test_quiet_suppresses_all_output(self, capsys):
        vprint = create_print_wrapper(verbose_level=2, quiet=True)
        for level in (0, 1, 2):
            vprint("Should not print", level)
        assert capsys.readouterr().err == ""


class TestArgumentHelpers:
    """Test grid parsing and failure descriptions."""

    def test_inclusive_grid(self):
        assert parse_p_grid("1/100:1/20:1/100") == [Fraction(k, 100) for k in range(1, 6)]

    def test_decimal_grid_is_exact(self):
        assert parse_p_grid("0:0.1:0.05") == [Fraction(0), Fraction(1, 20), Fraction(1, 10)]

    def test_bad_grids(self):
        for text in ("1:2", "0:1:0", "1/2:1/4:1/8", "a:b:c"):
            with pytest.raises(argparse.ArgumentTypeError):
                parse_p_grid(text)

    def test_failure_labels(self):
        assert describe_failure(InfeasibleSpecError(0.25)).startswith("infeasible: ")
        assert describe_failure(SpecError("bad")) == "parse: bad"
        assert describe_failure(DecodeFailure("short")) == "codec: short"
        assert describe_failure(InputError("n")) == "input: n"
        assert describe_failure(ValueError("User aborted")) == "User aborted"


class TestParseArguments:
    """Test the parse_arguments and create_config functions."""

    def test_capacity_defaults(self):
        config = create_config(parse_arguments(["capacity", "--rll", "1", "--cap", "1/8"]))
        assert config.command == "capacity"
        assert config.rll == 1
        assert config.cap == Fraction(1, 8)
        assert config.method == "dual"
        assert config.format is None
        assert config.output is None
        assert config.verbose_level == 0

    def test_bounds_grid(self):
        config = create_config(parse_arguments(["bounds", "--k", "2", "--p-grid", "0:1/8:1/16", "--no-solve"]))
        assert config.k == 2
        assert config.p_values == [Fraction(0), Fraction(1, 16), Fraction(1, 8)]
        assert config.solve is False

    def test_bounds_single_p(self):
        config = create_config(parse_arguments(["bounds", "--k", "1", "--p", "0.05", "--dimensions", "2"]))
        assert config.p_values == [Fraction(1, 20)]
        assert config.dimensions == 2

    def test_bounds_needs_p(self):
        with pytest.raises(SystemExit) as exc_info:
            parse_arguments(["bounds", "--k", "2"])
        assert exc_info.value.code == 2

    def test_simulate_flags(self, tmp_path):
        out = tmp_path / "sim.json"
        args = parse_arguments(["simulate", "--rll", "2", "--cap", "1/20", "--n", "4096", "--trials", "7",
                                "--seed", "3", "--jobs", "2", "--epsilon", "1/8", "-f", "json", "-o", str(out),
                                "-vv", "--overwrite"])
        config = create_config(args)
        assert (config.n, config.trials, config.seed, config.jobs) == (4096, 7, 3, 2)
        assert config.epsilon == Fraction(1, 8)
        assert config.format == "json"
        assert config.output == out
        assert config.verbose_level == 2
        assert config.overwrite_files is True

    def test_tail_rule_defaults_to_literal(self):
        assert create_config(parse_arguments(["simulate", "--rll", "1", "--cap", "1/2", "--n", "64"])).tail_rule == "literal"
        args = parse_arguments(["simulate", "--rll", "1", "--cap", "1/2", "--n", "64", "--tail-rule", "pinned"])
        assert create_config(args).tail_rule == "pinned"

    def test_output_path_is_absolute(self):
        config = create_config(parse_arguments(["verify-table1", "-o", "~/table.csv"]))
        assert config.output.is_absolute()
        assert "~" not in str(config.output)

    def test_missing_command_exits(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            parse_arguments([])
        assert exc_info.value.code == 1
        assert "usage: semicon" in capsys.readouterr().err

    def test_unknown_format_rejected(self):
        with pytest.raises(SystemExit):
            parse_arguments(["verify-table1", "-f", "xml"])


class TestResolveSpec:
    """Test constraint resolution."""

    def test_rll_shortcut(self):
        result = resolve_spec(Config(command="capacity", rll=2, cap=Fraction(1, 20)))
        assert is_successful(result)
        assert result.unwrap() == rll_spec(2, "1/20")

    def test_spec_file(self, tmp_path):
        path = tmp_path / "spec.json"
        dump_spec(rll_spec(1, "1/8"), path)
        assert resolve_spec(Config(command="capacity", spec_path=path)).unwrap() == rll_spec(1, "1/8")

    def test_missing_file(self, tmp_path):
        result = resolve_spec(Config(command="capacity", spec_path=tmp_path / "none.json"))
        assert isinstance(result.failure(), SpecError)

    def test_no_constraint(self):
        result = resolve_spec(Config(command="capacity"))
        assert isinstance(result.failure(), InputError)


class TestCheckFileOverwrite:
    """Test overwrite confirmation."""

    def test_missing_target_is_fine(self, tmp_path):
        assert is_successful(check_file_overwrite(tmp_path / "new.csv", False))

    def test_overwrite_flag_skips_prompt(self, tmp_path):
        target = tmp_path / "old.csv"
        target.touch()
        with patch("builtins.input") as mock_input:
            assert is_successful(check_file_overwrite(target, True))
            mock_input.assert_not_called()

    def test_user_confirms(self, tmp_path):
        target = tmp_path / "old.csv"
        target.touch()
        with patch("builtins.input", return_value="y"):
            assert is_successful(check_file_overwrite(target, False))

    def test_user_declines(self, tmp_path):
        target = tmp_path / "old.csv"
        target.touch()
        with patch("builtins.input", return_value="n"):
            assert not is_successful(check_file_overwrite(target, False))

    def test_eof_aborts(self, tmp_path, capsys):
        target = tmp_path / "old.csv"
        target.touch()
        with patch("builtins.input", side_effect=EOFError):
            result = check_file_overwrite(target, False)
        assert str(result.failure()) == "User aborted with EOF"
        assert "EOF received" in capsys.readouterr().err


class TestReferenceTable:
    """Test the triple distribution check."""

    def test_all_values_match(self):
        report = table1_report()
        assert report.metadata["all_match"] is True
        assert len(report.rows) == 10
        assert report.rows[-1][:3] == ["M[100]", Fraction(1, 5), Fraction(1, 5)]

    def test_run_command_writes_output(self, tmp_path):
        out = tmp_path / "table.csv"
        ctx = create_run_context(Config(command="verify-table1", output=out))
        result = run_command(ctx)
        assert is_successful(result)
        lines = out.read_text().splitlines()
        assert lines[0] == "quantity,expected,observed,match"
        assert lines[1] == "000,1/10,1/10,true"

    def test_run_command_to_stdout(self, capsys):
        ctx = create_run_context(Config(command="verify-table1", format="txt"))
        assert is_successful(run_command(ctx))
        assert "all_match: true" in capsys.readouterr().out

    def test_context_workdir(self):
        ctx = create_run_context(Config(command="verify-table1"))
        assert ctx.workdir.exists()
        assert isinstance(ctx.workdir, Path)
        assert callable(ctx.vprint)


class TestRunEnumerate:
    """Enumeration next to the capacity column."""

    def test_infeasible_spec_leaves_capacity_empty(self):
        ctx = create_mock_run_context()
        ctx.vprint = MagicMock()
        ctx.config = Config(command="enumerate", n=6, mode="weak")
        report = run_enumerate(ctx, make_spec(2, {"0": "1/3", "1": "1/3"})).unwrap()
        assert report.metadata["feasible"] is False
        assert all(row[3] is None for row in report.rows)
        assert report.rows[2][1] == 8
        ctx.vprint.assert_called()

    def test_feasible_spec_has_capacity(self):
        ctx = create_mock_run_context()
        ctx.vprint = MagicMock()
        ctx.config = Config(command="enumerate", n=4)
        report = run_enumerate(ctx, rll_spec(1, 0)).unwrap()
        assert report.metadata["feasible"] is True
        assert all(row[3] == pytest.approx(math.log2((1 + math.sqrt(5)) / 2)) for row in report.rows)
