"""Monte Carlo sampling of Gaussian elliptic matrices and spectra of W = N⁻²X²(Xᵀ)²."""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.errors import DomainError, EigenSolverError
from core.spectral import density_f
from core.trial_runner import TrialRunner
from models.simulation import (
    EIGENVALUE_FLOOR,
    EllipticMatrixSample,
    HistogramResult,
    MomentEstimate,
    SpectrumSample,
)
from models.spectral import DensityCurve

logger = logging.getLogger(__name__)

JACOBI_SWEEPS = 30
JACOBI_THRESHOLD = 1e-12
RESIDUAL_TOL = 1e-8
MOMENT_KMAX = 6


def trial_generator(seed: int, trial: int = 0) -> np.random.Generator:
    """Counter-based stream for (seed, trial); independent of execution order."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trial,))))


def sample_elliptic(
    n: int,
    rho: float,
    seed: int,
    trial: int = 0,
    diag_variance: str = "unit",
) -> EllipticMatrixSample:
    """Draw X with (X_ij, X_ji) standard bivariate Gaussian of correlation ρ.

    For i < j, X_ij = Z₁ and X_ji = ρZ₁ + √(1−ρ²)Z₂. Diagonal entries are
    standard normal, scaled by √(1+ρ) under ``one_plus_rho``.

    Raises:
        DomainError: If n < 1, |rho| > 1 or the diagonal convention is unknown.
    """
    if n < 1:
        raise DomainError(f"matrix size must be at least 1, got {n}")
    if abs(rho) > 1:
        raise DomainError(f"rho must satisfy |rho| ≤ 1, got {rho}")
    if diag_variance not in ("unit", "one_plus_rho"):
        raise DomainError(f"unknown diag_variance {diag_variance!r}")

    rng = trial_generator(seed, trial)
    z1 = rng.standard_normal((n, n))
    z2 = rng.standard_normal((n, n))
    upper = np.triu(z1, 1)
    # rho = ±1 must give exact (anti)symmetry, so skip the 0·Z₂ term
    partner = rho * z1 if abs(rho) == 1 else rho * z1 + math.sqrt(1.0 - rho * rho) * z2
    entries = upper + np.triu(partner, 1).T
    diagonal = np.diag(z1).copy()
    if diag_variance == "one_plus_rho":
        diagonal *= math.sqrt(1.0 + rho)
    entries[np.diag_indices(n)] = diagonal
    return EllipticMatrixSample(
        entries=entries, n=n, rho=rho, seed=seed, trial=trial, diag_variance=diag_variance
    )


def form_w(x: EllipticMatrixSample) -> np.ndarray:
    """W = N⁻²·X²·(Xᵀ)², symmetrized against roundoff."""
    square = x.entries @ x.entries
    w = square @ square.T / float(x.n) ** 2
    return 0.5 * (w + w.T)


def jacobi_eigenvalues(
    w: np.ndarray,
    sweeps: int = JACOBI_SWEEPS,
    threshold: float = JACOBI_THRESHOLD,
) -> Tuple[np.ndarray, np.ndarray, bool]:
    """Cyclic Jacobi rotations on a symmetric matrix.

    Returns:
        (eigenvalues, eigenvectors as columns, converged) where convergence
        means the off-diagonal Frobenius norm fell below threshold·‖W‖_F.
    """
    a = np.array(w, dtype=float, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    limit = threshold * scale if scale > 0 else 0.0
    for _ in range(sweeps):
        off = math.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= limit:
            return np.diag(a).copy(), v, True
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rows_p, rows_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rows_p - s * rows_q
                a[q, :] = s * rows_p + c * rows_q
                cols_p, cols_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cols_p - s * cols_q
                a[:, q] = s * cols_p + c * cols_q
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    off = math.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
    return np.diag(a).copy(), v, off <= limit


def spectrum_of_w(x: EllipticMatrixSample, solver: str = "lapack") -> SpectrumSample:
    """Sorted eigenvalues of W, with per-eigenpair residual checks.

    Args:
        x: Matrix sample.
        solver: ``lapack`` (numpy.linalg.eigh) or ``jacobi``.

    Raises:
        EigenSolverError: On non-convergence, a residual above 1e−8·‖W‖ or an
            eigenvalue below −1e−8.
    """
    w = form_w(x)
    try:
        if solver == "jacobi":
            values, vectors, converged = jacobi_eigenvalues(w)
            if not converged:
                raise EigenSolverError(
                    x.n, x.rho, x.seed, x.trial, f"no convergence in {JACOBI_SWEEPS} sweeps"
                )
        elif solver == "lapack":
            values, vectors = np.linalg.eigh(w)
        else:
            raise DomainError(f"unknown eigensolver {solver!r}")
    except np.linalg.LinAlgError as e:
        raise EigenSolverError(x.n, x.rho, x.seed, x.trial, str(e)) from e

    # spectral norm of a symmetric matrix
    norm = float(np.max(np.abs(values))) if values.size else 0.0
    residuals = np.linalg.norm(w @ vectors - vectors * values, axis=0)
    worst = float(np.max(residuals)) if residuals.size else 0.0
    if worst > RESIDUAL_TOL * max(norm, 1e-300):
        raise EigenSolverError(x.n, x.rho, x.seed, x.trial, f"residual {worst:.3e}")
    if values.size and float(np.min(values)) < EIGENVALUE_FLOOR:
        raise EigenSolverError(
            x.n, x.rho, x.seed, x.trial, f"negative eigenvalue {float(np.min(values)):.3e}"
        )

    return SpectrumSample(
        eigenvalues=np.sort(values),
        n=x.n,
        rho=x.rho,
        seed=x.seed,
        trial=x.trial,
        diag_variance=x.diag_variance,
    )


def run_trials(
    n: int,
    rho: float,
    trials: int,
    seed: int,
    workers: int = 1,
    solver: str = "lapack",
    diag_variance: str = "unit",
    progress_callback=None,
    runner: Optional[TrialRunner] = None,
) -> List[SpectrumSample]:
    """Sample and diagonalize ``trials`` independent matrices, merged by trial index.

    A caller-supplied ``runner`` overrides ``workers`` and keeps the per-trial
    status registry for ``runner.summary()``.
    """
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")

    def one_trial(trial: int) -> SpectrumSample:
        sample = sample_elliptic(n, rho, seed, trial, diag_variance)
        return spectrum_of_w(sample, solver)

    runner = runner or TrialRunner(workers)
    spectra = runner.run(one_trial, trials, progress_callback)
    logger.info(f"Completed {trials} trial(s) at n={n}, rho={rho}, seed={seed}")
    return spectra


def empirical_moments(samples: Sequence[SpectrumSample], kmax: int) -> List[MomentEstimate]:
    """Across-sample mean and standard error of (1/N)·Σλᵏ for k = 0..kmax.

    Raises:
        DomainError: With fewer than 2 samples or kmax outside 0..6.
    """
    if len(samples) < 2:
        raise DomainError(f"empirical moments need at least 2 samples, got {len(samples)}")
    if not 0 <= kmax <= MOMENT_KMAX:
        raise DomainError(f"kmax must lie in 0..{MOMENT_KMAX}, got {kmax}")
    estimates = []
    count = len(samples)
    for k in range(kmax + 1):
        per_sample = [math.fsum(s.eigenvalues ** k) / s.n for s in samples]
        mean = math.fsum(per_sample) / count
        variance = math.fsum((v - mean) ** 2 for v in per_sample) / (count - 1)
        estimates.append(MomentEstimate(k=k, mean=mean, stderr=math.sqrt(variance / count)))
    return estimates


def default_range(samples: Sequence[SpectrumSample]) -> Tuple[float, float]:
    """[0, 1.05·max eigenvalue], or [0, 1] with no samples."""
    if not samples:
        return 0.0, 1.0
    top = max(float(s.eigenvalues[-1]) for s in samples)
    return 0.0, 1.05 * top if top > 0 else 1.0


def histogram(
    samples: Sequence[SpectrumSample],
    bins: int = 60,
    value_range: Optional[Tuple[float, float]] = None,
) -> HistogramResult:
    """Pooled eigenvalue histogram with heights = counts / (total · width).

    Heights integrate to the fraction of eigenvalues inside the range; an
    empty sample list gives all-zero counts.

    Raises:
        DomainError: If bins < 1 or lo ≥ hi.
    """
    if bins < 1:
        raise DomainError(f"bins must be positive, got {bins}")
    lo, hi = value_range if value_range is not None else default_range(samples)
    if not lo < hi:
        raise DomainError(f"histogram range needs lo < hi, got ({lo}, {hi})")
    pooled = np.concatenate([s.eigenvalues for s in samples]) if samples else np.empty(0)
    counts, edges = np.histogram(pooled, bins=bins, range=(lo, hi))
    total = int(pooled.size)
    widths = np.diff(edges)
    heights = counts / (total * widths) if total else np.zeros(bins)
    return HistogramResult(edges=edges, counts=counts, heights=heights, total=total)


def theory_bin_masses(
    edges: np.ndarray,
    rho: float,
    eps: float = 1e-6,
    points_per_bin: int = 32,
) -> np.ndarray:
    """Mass of d_F in each bin, by trapezoid on a per-bin sub-grid.

    All sub-grids are evaluated in one batched density call. A bin starting
    at 0 is sampled geometrically from a 1e−10 cutoff and gets the
    power-law extrapolated mass below it.
    """
    grids = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if lo <= 0.0:
            grids.append(np.geomspace(1e-10, hi, points_per_bin * 4))
        else:
            grids.append(np.linspace(lo, hi, points_per_bin))
    curve = density_f(np.concatenate(grids), rho, eps)
    if curve.missing:
        logger.warning(f"{curve.missing} theory point(s) missing; treated as zero density")
    values = np.nan_to_num(curve.values)

    masses = np.zeros(len(grids))
    offset = 0
    for i, grid in enumerate(grids):
        piece = DensityCurve(
            xs=grid, values=values[offset:offset + len(grid)], dist="F", eps=eps, rho=rho
        )
        masses[i] = piece.mass(extrapolate=bool(edges[i] <= 0.0))
        offset += len(grid)
    return masses


def total_variation(hist: HistogramResult, rho: float, eps: float = 1e-6) -> float:
    """½·Σ|empirical bin mass − theoretical bin mass| over the histogram bins."""
    empirical = hist.heights * np.diff(hist.edges)
    theory = theory_bin_masses(hist.edges, rho, eps)
    return 0.5 * float(np.sum(np.abs(empirical - theory)))


def theory_heights(hist: HistogramResult, rho: float, eps: float = 1e-6) -> np.ndarray:
    """Bin-averaged d_F for comparison columns."""
    return theory_bin_masses(hist.edges, rho, eps) / np.diff(hist.edges)
