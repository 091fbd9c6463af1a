"""Acceptance checks run by ``verify``; each check reports pass, fail or error."""

import logging
import time
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Callable, List, Optional, Tuple

import numpy as np

from core import chorddiag, ellipticmc, exactpoly, momentrec, ncpartition, spectral
from models.diagram import ColoringRule
from models.polynomial import IntPolynomial
from models.report import CheckResult
from tools.logging_tools import log_run_event

logger = logging.getLogger(__name__)

CheckOutcome = Tuple[bool, str]


def check_moment_table() -> CheckOutcome:
    table = momentrec.build_uv(16)
    expected = {
        1: [1, 0, 1],
        2: [3, 0, 8, 0, 3],
        3: [12, 0, 54, 0, 54, 0, 12],
        4: [55, 0, 352, 0, 616, 0, 352, 0, 55],
    }
    bad = [k for k, coeffs in expected.items()
           if momentrec.moment_polynomial(table, k) != IntPolynomial(coeffs=coeffs)]
    return not bad, f"mismatched M_k for k={bad}" if bad else "M_1..M_4 exact"


def check_endpoint_sequences() -> CheckOutcome:
    table = momentrec.build_uv(20)
    at_zero = momentrec.moment_values(table, 0, 10)
    at_one = momentrec.moment_values(table, 1, 10)
    ok = all(at_zero[k] == exactpoly.fuss_catalan(k) and at_one[k] == exactpoly.even_catalan(k)
             for k in range(11))
    return ok, "Fuss-Catalan and even Catalan endpoints for k ≤ 10"


def check_diagram_oracle() -> CheckOutcome:
    table = momentrec.build_uv(10)
    bad = [k for k in range(1, 6)
           if chorddiag.partition_function(2 * k, ColoringRule.U) != table.u_polys[2 * k]]
    return not bad, f"partition function differs for k={bad}" if bad else "U_{2k} for k ≤ 5"


def check_cumulant_pipeline() -> CheckOutcome:
    table = momentrec.build_uv(24)
    cumulants = ncpartition.cumulants_from_moments(momentrec.symmetrized_moments(table, 24), 24)
    bad = []
    for order, c in enumerate(cumulants, start=1):
        expected = (exactpoly.narayana_b(order // 2).substitute_square()
                    if order % 2 == 0 else IntPolynomial.zero())
        if c != expected:
            bad.append(order)
    return not bad, f"cumulant orders {bad} differ" if bad else "c_{2n} = N^B_n(rho^2), n ≤ 12"


def check_atomic_diagrams() -> CheckOutcome:
    bad = [n for n in range(1, 5)
           if chorddiag.atomic_partition_function(n) != exactpoly.narayana_b(n).substitute_square()]
    return not bad, f"atomic sums differ for n={bad}" if bad else "atomic sums for n ≤ 4"


def check_identity_suite() -> CheckOutcome:
    report = exactpoly.check_identities(12)
    detail = ", ".join(f"{f.identity_id}@{f.n}" for f in report.failures[:5])
    return report.passed, detail or f"{report.checked} identity instances"


def check_combinatorial_counts() -> CheckOutcome:
    problems = []
    for n in range(1, 9):
        if len(ncpartition.enumerate_nca(n)) != exactpoly.catalan(n):
            problems.append(f"|NC({n})|")
    for n in range(1, 7):
        if len(ncpartition.enumerate_ncb(n)) != comb(2 * n, n):
            problems.append(f"|NC^B({n})|")
    for n in range(1, 6):
        if set(ncpartition.abs_fiber_sizes(n).values()) != {n + 1}:
            problems.append(f"abs fibers n={n}")
    for n in range(1, 8):
        for p in ncpartition.enumerate_nca(n):
            if p.block_count + ncpartition.kreweras(p).block_count != n + 1:
                problems.append(f"kreweras n={n}")
                break
    return not problems, ", ".join(problems) or "all counts exact"


def check_transform_consistency() -> CheckOutcome:
    rng = np.random.default_rng(20240101)
    z = rng.uniform(-4.0, 4.0, 500) + 1j * rng.uniform(0.05, 3.0, 500)
    worst = 0.0
    for rho in (0.0, 0.5, 0.9, 1.0):
        batch = spectral.cauchy_g_many(z, rho)
        if not batch.ok.all():
            return False, f"continuation failed for rho={rho}"
        defect = np.abs(spectral.r_transform(batch.s, rho) + 1.0 / batch.s - z)
        worst = max(worst, float(defect.max()))
    series_ok = all(
        all(r.passed for r in spectral.series_moments_check(rho, 2).records)
        for rho in (0.0, 0.5)
    )
    return worst <= 1e-8 and series_ok, f"max |R(s)+1/s-z| = {worst:.2e}, series moments ok={series_ok}"


def mass_grid(rho: float) -> np.ndarray:
    """Grid for d_F: geometric near 0, linear up to just past the edge."""
    edge = spectral.support_edge(rho, "f")
    return np.concatenate([np.geomspace(1e-8, 0.5, 600), np.linspace(0.5, edge * 1.001, 3000)[1:]])


def check_density() -> CheckOutcome:
    problems = []
    for rho in (0.0, 0.5, 0.9):
        curve = spectral.density_f(mass_grid(rho), rho, eps=1e-9)
        mass, first = curve.mass(), curve.moment(1)
        if abs(mass - 1.0) > 1e-3 or abs(first - (1 + rho * rho)) > 1e-3:
            problems.append(f"rho={rho}: mass={mass:.5f}, mean={first:.5f}")
    edge = spectral.support_edge(0.0, "f")
    if abs(edge - 6.75) > 0.01:
        problems.append(f"rho=0 edge {edge:.4f}")
    ys = np.array([0.5, 1.0, 2.0, 3.0])
    curve = spectral.density_g(ys, 1.0)
    analytic = np.sqrt(4.0 - ys) / (4.0 * np.pi * np.sqrt(ys))
    worst = float(np.max(np.abs(curve.values - analytic)))
    if not worst <= 1e-4:
        problems.append(f"rho=1 pointwise error {worst:.2e}")
    return not problems, "; ".join(problems) or "mass, mean, edge and rho=1 density"


def check_finite_n_formula() -> CheckOutcome:
    records = chorddiag.compare_example_formula(
        range(2, 9), [0, Fraction(1, 2), Fraction(-1, 2), 1], "one_plus_rho"
    )
    bad = [(r.n, str(r.rho)) for r in records if not r.agrees]
    return not bad, f"disagreements {bad}" if bad else "exact for N = 2..8"


def _wick_oracle(trials: int, workers: int) -> CheckOutcome:
    spectra = ellipticmc.run_trials(4, 0.3, trials, seed=7, workers=workers)
    estimate = ellipticmc.empirical_moments(spectra, 1)[1]
    exact = float(chorddiag.exact_expected_trace(1, 4, Fraction(3, 10)))
    ok = abs(estimate.mean - exact) <= 4 * estimate.stderr
    return ok, f"empirical {estimate.mean:.5f} ± {estimate.stderr:.5f} vs exact {exact:.5f}"


def check_monte_carlo_figure(workers: int) -> CheckOutcome:
    rho = 0.5
    spectra = ellipticmc.run_trials(512, rho, 20, seed=2024, workers=workers)
    estimates = ellipticmc.empirical_moments(spectra, 2)
    table = momentrec.build_uv(4)
    problems = []
    for k in (1, 2):
        theory = float(momentrec.moment_polynomial(table, k).evaluate(rho))
        est = estimates[k]
        if abs(est.mean - theory) > 4 * est.stderr or abs(est.mean - theory) > 0.02 * theory:
            problems.append(f"M_{k}: {est.mean:.4f} ± {est.stderr:.4f} vs {theory:.4f}")
    hist = ellipticmc.histogram(spectra, 60)
    tv = ellipticmc.total_variation(hist, rho)
    if tv > 0.08:
        problems.append(f"total variation {tv:.3f}")
    return not problems, "; ".join(problems) or f"moments within 4 sigma, TV={tv:.3f}"


def build_checks(fast: bool, workers: int) -> List[Tuple[str, Callable[[], CheckOutcome]]]:
    checks = [
        ("moment_table", check_moment_table),
        ("endpoint_sequences", check_endpoint_sequences),
        ("diagram_oracle", check_diagram_oracle),
        ("cumulant_pipeline", check_cumulant_pipeline),
        ("atomic_diagrams", check_atomic_diagrams),
        ("identity_suite", check_identity_suite),
        ("combinatorial_counts", check_combinatorial_counts),
        ("transform_consistency", check_transform_consistency),
        ("density", check_density),
        ("finite_n_formula", check_finite_n_formula),
        ("wick_oracle", lambda: _wick_oracle(20_000 if fast else 100_000, workers)),
    ]
    if not fast:
        checks.append(("monte_carlo_figure", lambda: check_monte_carlo_figure(workers)))
    return checks


def run_suite(
    fast: bool = True,
    workers: int = 1,
    log_file: Optional[Path] = None,
) -> List[CheckResult]:
    """Run every check; exceptions become ``error`` rows instead of propagating."""
    results = []
    for name, check in build_checks(fast, workers):
        started = time.perf_counter()
        try:
            passed, detail = check()
            status = "pass" if passed else "fail"
        except Exception as e:
            logger.error(f"Check {name} raised: {e}", exc_info=True)
            status, detail = "error", f"{type(e).__name__}: {e}"
        result = CheckResult(
            name=name, status=status, seconds=time.perf_counter() - started, detail=detail
        )
        logger.info(f"{name}: {status} ({result.seconds:.2f}s)")
        if log_file is not None:
            log_run_event(log_file, "verify", name, status, detail)
        results.append(result)
    failed = sum(1 for r in results if r.status != "pass")
    logger.info(f"Verification finished: {len(results) - failed} passed, {failed} failed")
    return results
