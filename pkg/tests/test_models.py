"""Tests for pydantic models."""

from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from models.config import RunConfig
from models.moments import MomentTable
from models.polynomial import IntPolynomial
from models.report import CheckResult, IdentityReport, SeriesMomentRecord, TraceComparison
from models.simulation import HistogramResult


@pytest.mark.unit
class TestRunConfig:
    def test_defaults(self):
        config = RunConfig(command="moments", options={"k": 3})
        assert config.output_format == "csv"
        assert config.rho is None
        assert config.option("k") == 3
        assert config.option("missing", 7) == 7

    def test_unknown_command(self):
        with pytest.raises(ValidationError):
            RunConfig(command="plot")

    def test_rho_range(self):
        with pytest.raises(ValidationError):
            RunConfig(command="density", rho=1.2)

    def test_positive_counts(self):
        with pytest.raises(ValidationError, match="--half-size must be positive"):
            RunConfig(command="diagrams", options={"half_size": 0})

    def test_nonnegative_k(self):
        assert RunConfig(command="moments", options={"k": 0}).option("k") == 0
        with pytest.raises(ValidationError):
            RunConfig(command="moments", options={"k": -1})

    def test_out_path(self):
        assert RunConfig(command="simulate", out="runs/a").out == Path("runs/a")


@pytest.mark.unit
class TestReports:
    def test_moment_table_initial_conditions(self):
        with pytest.raises(ValidationError):
            MomentTable(u_polys=(IntPolynomial.zero(),), v_polys=(IntPolynomial.one(),), kmax=0)
        with pytest.raises(ValidationError):
            MomentTable(u_polys=(IntPolynomial.one(),), v_polys=(), kmax=0)

    def test_identity_report(self):
        assert IdentityReport(n_max=3, checked=33).passed

    def test_trace_comparison(self):
        record = TraceComparison(n=2, rho=Fraction(1, 2), diag_variance="unit",
                                 exact=Fraction(15, 8), formula=Fraction(51, 16))
        assert not record.agrees
        assert record.difference == Fraction(-21, 16)

    def test_check_result_status(self):
        with pytest.raises(ValidationError):
            CheckResult(name="x", status="skipped", seconds=0.0)

    def test_series_record_kind(self):
        with pytest.raises(ValidationError):
            SeriesMomentRecord(m=0, estimate=1.0, expected=1.0, error=0.0, kind="other", passed=True)

    def test_histogram_helpers(self):
        hist = HistogramResult(edges=np.array([0.0, 1.0, 2.0]), counts=np.array([1, 1]),
                               heights=np.array([0.25, 0.25]), total=4)
        assert hist.bins == 2
        assert hist.mass_in_range() == pytest.approx(0.5)
