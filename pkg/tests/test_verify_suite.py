"""Tests for the acceptance-check runner."""

import pandas as pd
import pytest

from core import verify_suite
from core.verify_suite import build_checks, run_suite


@pytest.mark.unit
class TestCheckRegistry:
    def test_fast_mode_skips_figure_check(self):
        fast = [name for name, _ in build_checks(True, 1)]
        full = [name for name, _ in build_checks(False, 1)]
        assert "monte_carlo_figure" not in fast
        assert full[-1] == "monte_carlo_figure"
        assert full[:-1] == fast


@pytest.mark.integration
class TestRunSuite:
    def test_errors_become_rows(self, monkeypatch, tmp_path):
        def broken():
            raise RuntimeError("boom")

        monkeypatch.setattr(verify_suite, "build_checks", lambda fast, workers: [
            ("good", lambda: (True, "fine")),
            ("bad", lambda: (False, "off by one")),
            ("broken", broken),
        ])
        log = tmp_path / "run_log.csv"
        results = run_suite(fast=True, workers=1, log_file=log)
        assert [r.status for r in results] == ["pass", "fail", "error"]
        assert results[2].detail == "RuntimeError: boom"
        assert list(pd.read_csv(log)["status"]) == ["pass", "fail", "error"]

    @pytest.mark.parametrize("check", [
        verify_suite.check_moment_table,
        verify_suite.check_endpoint_sequences,
        verify_suite.check_diagram_oracle,
        verify_suite.check_atomic_diagrams,
        verify_suite.check_identity_suite,
        verify_suite.check_finite_n_formula,
    ])
    def test_exact_checks_pass(self, check):
        passed, detail = check()
        assert passed, detail

    @pytest.mark.slow
    def test_fast_suite_passes(self):
        results = run_suite(fast=True, workers=4)
        assert all(r.status == "pass" for r in results), [r for r in results if r.status != "pass"]

    def test_figure_check_pools_every_trial(self, monkeypatch):
        ellipticmc = verify_suite.ellipticmc
        real_run_trials, real_histogram = ellipticmc.run_trials, ellipticmc.histogram
        pooled = []

        def small_run(n, rho, trials, seed, workers=1):
            return real_run_trials(8, rho, 3, seed, workers=workers)

        def spy_histogram(samples, bins, *args, **kwargs):
            pooled.append(sum(len(s.eigenvalues) for s in samples))
            return real_histogram(samples, bins, *args, **kwargs)

        monkeypatch.setattr(ellipticmc, "run_trials", small_run)
        monkeypatch.setattr(ellipticmc, "histogram", spy_histogram)
        verify_suite.check_monte_carlo_figure(workers=1)
        assert pooled == [3 * 8]
