"""Tests for formatting helpers."""

import json
import math
from argparse import Namespace

import pytest

from betactl.util.formatting import _jsonable, die, format_output, format_sci, format_short, format_table, truncate


class TestTruncate:
    def test_short_string(self):
        assert truncate("hello", 10) == "hello"

    def test_long_string(self):
        assert truncate("hello world", 8) == "hello..."

    def test_empty(self):
        assert truncate("", 5) == ""


class TestFormatSci:
    def test_float(self):
        assert format_sci(0.5) == "5.0000000000000000e-01"

    def test_int_and_bool(self):
        assert format_sci(1000) == "1000"
        assert format_sci(True) == "1"

    @pytest.mark.parametrize("value, expected", [(math.nan, "nan"), (math.inf, "inf"), (-math.inf, "-inf")])
    def test_nonfinite(self, value, expected):
        assert format_sci(value) == expected


class TestFormatShort:
    def test_float(self):
        assert format_short(1 / 3) == "0.3333333333"

    def test_int(self):
        assert format_short(42) == "42"


class TestFormatTable:
    def test_layout(self):
        table = format_table(["x", "value"], [["1", "0.5"]], [3, 5])
        lines = table.splitlines()
        assert lines[0].startswith("┌")
        assert "│ x   │ value │" in lines
        assert "│ 1   │ 0.5   │" in lines
        assert lines[-1].startswith("└")

    def test_truncates_cells(self):
        table = format_table(["v"], [["0.123456789"]], [6])
        assert "0.1..." in table


class TestOutput:
    def test_jsonable_replaces_nonfinite(self):
        assert _jsonable({"a": [1.0, math.nan], "b": (math.inf,)}) == {"a": [1.0, "nan"], "b": ["inf"]}

    def test_text(self, capsys):
        format_output(Namespace(json=False), "plain", json_data={"v": 1})
        assert capsys.readouterr().out == "plain\n"

    def test_json(self, capsys):
        format_output(Namespace(json=True), "plain", json_data={"v": math.nan})
        assert json.loads(capsys.readouterr().out) == {"v": "nan"}

    def test_json_without_data_falls_back(self, capsys):
        format_output(Namespace(json=True), "plain")
        assert capsys.readouterr().out == "plain\n"


class TestDie:
    def test_exit_code(self, capsys):
        with pytest.raises(SystemExit) as exc:
            die("bad grid", 2)
        assert exc.value.code == 2
        assert capsys.readouterr().err == "Error: bad grid\n"
