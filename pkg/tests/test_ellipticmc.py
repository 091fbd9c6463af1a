"""Tests for elliptic matrix sampling, eigensolvers and histograms."""

from fractions import Fraction

import numpy as np
import pytest

from core.chorddiag import exact_expected_trace
from core.errors import DomainError, EigenSolverError
from core.ellipticmc import (
    empirical_moments,
    form_w,
    histogram,
    jacobi_eigenvalues,
    run_trials,
    sample_elliptic,
    spectrum_of_w,
    theory_bin_masses,
    total_variation,
    trial_generator,
)
from core.momentrec import build_uv, moment_polynomial
from core.trial_runner import TrialRunner
from models.simulation import EllipticMatrixSample, SpectrumSample


@pytest.mark.unit
class TestSampling:
    def test_same_seed_same_matrix(self):
        a = sample_elliptic(6, 0.4, seed=11, trial=3)
        b = sample_elliptic(6, 0.4, seed=11, trial=3)
        np.testing.assert_array_equal(a.entries, b.entries)

    def test_trials_are_independent_streams(self):
        a = sample_elliptic(6, 0.4, seed=11, trial=0)
        b = sample_elliptic(6, 0.4, seed=11, trial=1)
        assert not np.array_equal(a.entries, b.entries)

    def test_generator_depends_only_on_seed_and_trial(self):
        first = trial_generator(5, 2).standard_normal(4)
        second = trial_generator(5, 2).standard_normal(4)
        np.testing.assert_array_equal(first, second)

    def test_symmetric_at_rho_one(self):
        x = sample_elliptic(8, 1.0, seed=1).entries
        np.testing.assert_array_equal(x, x.T)

    def test_antisymmetric_off_diagonal_at_rho_minus_one(self):
        x = sample_elliptic(8, -1.0, seed=1).entries
        off = x - np.diag(np.diag(x))
        np.testing.assert_array_equal(off, -off.T)

    def test_pair_correlation(self):
        x = sample_elliptic(300, 0.6, seed=3).entries
        upper = np.triu_indices(300, 1)
        pairs = np.corrcoef(x[upper], x.T[upper])[0, 1]
        assert pairs == pytest.approx(0.6, abs=0.02)

    def test_one_plus_rho_scales_diagonal(self):
        unit = sample_elliptic(5, 0.44, seed=9).entries
        scaled = sample_elliptic(5, 0.44, seed=9, diag_variance="one_plus_rho").entries
        np.testing.assert_allclose(np.diag(scaled), np.diag(unit) * 1.2)

    @pytest.mark.parametrize("kwargs", [{"n": 0}, {"rho": 1.5}, {"diag_variance": "half"}])
    def test_invalid_arguments(self, kwargs):
        args = {"n": 4, "rho": 0.5, "seed": 0}
        args.update(kwargs)
        with pytest.raises(DomainError):
            sample_elliptic(**args)


@pytest.mark.unit
class TestEigensolvers:
    def test_w_is_symmetric_psd(self):
        w = form_w(sample_elliptic(10, 0.3, seed=2))
        np.testing.assert_array_equal(w, w.T)
        assert np.linalg.eigvalsh(w).min() > -1e-10

    def test_jacobi_matches_lapack(self):
        x = sample_elliptic(12, 0.5, seed=4)
        lapack = spectrum_of_w(x, "lapack").eigenvalues
        jacobi = spectrum_of_w(x, "jacobi").eigenvalues
        np.testing.assert_allclose(jacobi, lapack, rtol=1e-9, atol=1e-12)

    def test_jacobi_reports_non_convergence(self):
        w = form_w(sample_elliptic(8, 0.5, seed=4))
        _, _, converged = jacobi_eigenvalues(w, sweeps=0)
        assert not converged

    def test_jacobi_sweep_budget_raises(self, monkeypatch):
        import core.ellipticmc as ellipticmc

        monkeypatch.setattr(ellipticmc, "jacobi_eigenvalues",
                            lambda w: (np.zeros(len(w)), np.eye(len(w)), False))
        with pytest.raises(EigenSolverError) as excinfo:
            spectrum_of_w(sample_elliptic(4, 0.5, seed=8, trial=2), "jacobi")
        assert excinfo.value.seed == 8
        assert excinfo.value.trial == 2

    def test_negative_spectrum_rejected(self, monkeypatch):
        import core.ellipticmc as ellipticmc

        monkeypatch.setattr(ellipticmc, "form_w", lambda x: -np.eye(x.n))
        with pytest.raises(EigenSolverError):
            spectrum_of_w(sample_elliptic(3, 0.5, seed=0))
        with pytest.raises(ValueError):
            SpectrumSample(eigenvalues=np.array([-1e-6, 1.0]), n=2, rho=0.0, seed=0)

    def test_two_by_two_symmetric_fourth_powers(self):
        x = EllipticMatrixSample(entries=np.array([[2.0, 1.0], [1.0, 0.0]]), n=2, rho=1.0, seed=0)
        expected = np.sort(np.linalg.eigvalsh(x.entries) ** 4 / 4)
        np.testing.assert_allclose(spectrum_of_w(x).eigenvalues, expected, rtol=1e-10, atol=1e-13)
        # (1 ± √2)⁴ = 17 ± 12√2
        np.testing.assert_allclose(expected, [(17 - 12 * np.sqrt(2)) / 4, (17 + 12 * np.sqrt(2)) / 4])

    def test_sampled_two_by_two_at_rho_one(self):
        for seed in range(10):
            x = sample_elliptic(2, 1.0, seed=seed)
            expected = np.sort(np.linalg.eigvalsh(x.entries) ** 4 / 4)
            np.testing.assert_allclose(spectrum_of_w(x).eigenvalues, expected, rtol=1e-10, atol=1e-14)

    def test_unknown_solver(self):
        with pytest.raises(DomainError):
            spectrum_of_w(sample_elliptic(3, 0.5, seed=0), "qr")

    def test_trace_identity(self):
        x = sample_elliptic(16, 0.2, seed=5)
        spectrum = spectrum_of_w(x)
        assert np.sum(spectrum.eigenvalues) == pytest.approx(np.trace(form_w(x)), rel=1e-10)
        assert np.all(np.diff(spectrum.eigenvalues) >= 0)


@pytest.mark.unit
class TestTrials:
    def test_results_independent_of_workers(self):
        serial = run_trials(6, 0.5, 8, seed=42, workers=1)
        parallel = run_trials(6, 0.5, 8, seed=42, workers=4)
        for a, b in zip(serial, parallel):
            assert a.trial == b.trial
            np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)

    def test_caller_runner_records_summary(self):
        runner = TrialRunner(workers=2)
        spectra = run_trials(5, 0.3, 4, seed=9, runner=runner)
        assert [s.trial for s in spectra] == [0, 1, 2, 3]
        summary = runner.summary()
        assert (summary.completed, summary.failed, summary.workers) == (4, 0, 2)

    def test_requires_trials(self):
        with pytest.raises(DomainError):
            run_trials(4, 0.5, 0, seed=0)

    def test_empirical_moments_need_two_samples(self):
        spectra = run_trials(4, 0.5, 1, seed=0)
        with pytest.raises(DomainError):
            empirical_moments(spectra, 1)

    def test_zeroth_moment(self):
        estimates = empirical_moments(run_trials(5, 0.1, 3, seed=1), 2)
        assert estimates[0].mean == pytest.approx(1.0)
        assert estimates[0].stderr == pytest.approx(0.0, abs=1e-15)


@pytest.mark.unit
class TestHistogram:
    def _sample(self, values):
        return SpectrumSample(eigenvalues=np.asarray(values, dtype=float), n=len(values), rho=0.0, seed=0)

    def test_heights_integrate_to_one(self):
        hist = histogram([self._sample([0.1, 0.5, 0.9, 1.5])], bins=4, value_range=(0.0, 2.0))
        assert hist.bins == 4
        assert hist.total == 4
        assert hist.mass_in_range() == pytest.approx(1.0, abs=1e-12)

    def test_out_of_range_mass(self):
        hist = histogram([self._sample([0.1, 0.5, 3.0, 4.0])], bins=2, value_range=(0.0, 1.0))
        assert hist.mass_in_range() == pytest.approx(0.5)

    def test_empty(self):
        hist = histogram([], bins=3)
        assert hist.total == 0
        assert np.all(hist.heights == 0)

    def test_invalid(self):
        with pytest.raises(DomainError):
            histogram([self._sample([1.0])], bins=0)
        with pytest.raises(DomainError):
            histogram([self._sample([1.0])], bins=3, value_range=(1.0, 1.0))

    def test_theory_bin_masses_sum_to_one(self):
        edges = np.linspace(0.0, 17.0, 69)
        masses = theory_bin_masses(edges, 0.5)
        assert np.all(masses >= 0)
        assert masses.sum() == pytest.approx(1.0, abs=5e-3)


@pytest.fixture(scope="module")
def figure_spectra():
    """20 trials at n=512, rho=0.5."""
    return run_trials(512, 0.5, 20, seed=2024, workers=4)


def abs_semicircle_cdf(t: np.ndarray) -> np.ndarray:
    """CDF of |y| for y semicircular on [−2, 2]."""
    t = np.clip(t, 0.0, 2.0)
    return t * np.sqrt(4.0 - t * t) / (2.0 * np.pi) + 2.0 / np.pi * np.arcsin(t / 2.0)


@pytest.mark.accuracy
class TestMonteCarloOracles:
    @pytest.mark.slow
    @pytest.mark.parametrize("k", [1, 2])
    def test_moments_at_n512(self, figure_spectra, k):
        theory = float(moment_polynomial(build_uv(4), k).evaluate(0.5))
        estimate = empirical_moments(figure_spectra, 2)[k]
        assert abs(estimate.mean - theory) <= 4 * estimate.stderr
        assert abs(estimate.mean - theory) <= 0.02 * theory

    @pytest.mark.slow
    def test_pooled_histogram_close_to_density(self, figure_spectra):
        hist = histogram(figure_spectra, 60)
        assert hist.total == 20 * 512
        assert total_variation(hist, 0.5) <= 0.08

    @pytest.mark.parametrize("rho", [-0.9, 0.0, 0.5, 1.0])
    def test_spectra_nonnegative(self, rho):
        sizes = (16, 32, 64, 128, 256)
        for i in range(25):
            spectrum = spectrum_of_w(sample_elliptic(sizes[i % 5], rho, seed=i, trial=i))
            assert spectrum.eigenvalues.min() >= -1e-8

    @pytest.mark.slow
    def test_first_moment_error_shrinks_with_size(self):
        # at rho = 1 the finite-N mean is 2 + 1/N
        errors = {}
        for n, trials in ((64, 20_000), (512, 80)):
            estimate = empirical_moments(run_trials(n, 1.0, trials, seed=31, workers=4), 1)[1]
            errors[n] = abs(estimate.mean - 2.0)
        assert errors[512] < errors[64]

    def test_semicircle_at_rho_one(self):
        spectrum = spectrum_of_w(sample_elliptic(256, 1.0, seed=12))
        # W = X⁴/N² here, so W^{1/4} = |λ(X)|/√N
        radii = np.sort(np.clip(spectrum.eigenvalues, 0.0, None) ** 0.25)
        cdf = abs_semicircle_cdf(radii)
        n = len(radii)
        upper = np.arange(1, n + 1) / n - cdf
        lower = cdf - np.arange(n) / n
        assert max(upper.max(), lower.max()) <= 0.05

    @pytest.mark.slow
    def test_wick_oracle_small_n(self):
        spectra = run_trials(4, 0.3, 20_000, seed=7, workers=4)
        estimate = empirical_moments(spectra, 1)[1]
        exact = float(exact_expected_trace(1, 4, Fraction(3, 10)))
        assert exact == pytest.approx(1.305)
        assert abs(estimate.mean - exact) <= 4 * estimate.stderr

    @pytest.mark.slow
    def test_histogram_close_to_density(self):
        spectra = run_trials(2500, 0.5, 1, seed=2024)
        hist = histogram(spectra, 60)
        assert total_variation(hist, 0.5) <= 0.08

    def test_sample_model_validates_seed(self):
        with pytest.raises(ValueError):
            EllipticMatrixSample(entries=np.zeros((1, 1)), n=1, rho=0.0, seed=-1)
