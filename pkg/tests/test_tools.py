"""Tests for CSV/JSON writers, the run log and SVG output."""

import io
import json
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest

from core.spectral import density_f
from tools.csv_tools import (
    emit_json,
    emit_text,
    format_value,
    frame_to_text,
    json_value,
    records_frame,
    write_csv,
)
from tools.logging_tools import RUN_LOG_COLUMNS, log_run_event
from tools.svg_tools import write_density_svg


@pytest.mark.unit
class TestFormatting:
    def test_integers(self):
        assert format_value(55) == "55"
        assert format_value(2**80) == str(2**80)
        assert format_value(3.0) == "3"
        assert format_value(Fraction(10, 2)) == "5"

    def test_floats_use_repr(self):
        assert format_value(1.25) == "1.25"
        assert format_value(0.1 + 0.2) == repr(0.1 + 0.2)
        assert format_value(float("nan")) == "nan"
        assert format_value(Fraction(1, 3)) == repr(1 / 3)

    def test_json_value(self):
        assert json_value(12) == 12
        assert json_value(2**60) == str(2**60)
        assert json_value(Fraction(5, 4)) == 1.25

    def test_frame_to_text(self):
        frame = records_frame([{"k": 1, "value": 1.25}], ["k", "value"])
        assert frame_to_text(frame) == "k,value\n1,1.25\n"
        assert json.loads(frame_to_text(frame, "json")) == [{"k": "1", "value": "1.25"}]


@pytest.mark.unit
class TestWriters:
    def test_emit_text_to_stream(self):
        stream = io.StringIO()
        emit_text("a,b\n", stream=stream)
        assert stream.getvalue() == "a,b\n"

    def test_emit_json_to_file(self, tmp_path):
        out = tmp_path / "nested" / "x.json"
        emit_json({"count": 3}, out)
        assert json.loads(out.read_text()) == {"count": 3}

    def test_write_csv_uses_lf(self, tmp_path):
        path = tmp_path / "a.csv"
        assert write_csv(pd.DataFrame({"x": ["1", "2"]}), path) == 2
        assert path.read_bytes() == b"x\n1\n2\n"


@pytest.mark.unit
class TestRunLog:
    def test_appends_rows(self, tmp_path):
        path = tmp_path / "run_log.csv"
        assert log_run_event(path, "verify", "moment_table", "pass", "ok")
        assert log_run_event(path, "verify", "density", "fail")
        df = pd.read_csv(path, dtype=str, keep_default_na=False)
        assert list(df.columns) == RUN_LOG_COLUMNS
        assert list(df["check"]) == ["moment_table", "density"]
        assert df["detail"].iloc[1] == ""

    def test_failure_is_reported_not_raised(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        assert log_run_event(blocker / "run_log.csv", "simulate", "trials", "completed") is False


@pytest.mark.unit
class TestSvg:
    def test_density_svg_is_stable(self, tmp_path):
        curve = density_f(np.linspace(0.1, 7.0, 50), 0.0)
        first = write_density_svg(curve, tmp_path / "a.svg")
        second = write_density_svg(curve, tmp_path / "b.svg")
        text = first.read_text()
        assert text.startswith("<?xml")
        assert "<svg" in text
        assert first.read_bytes() == second.read_bytes()
