"""R-transform, Cauchy transform and spectral densities of G and F.

The Cauchy transform s = s_G(z) solves 1/(s·√Δ(s)) = z with
Δ(s) = (ρ²−1)²s⁴ − 2(ρ²+1)s² + 1. Squaring gives a cubic in u = s²,

    (1−ρ²)² z² u³ − 2(1+ρ²) z² u² + z² u − 1 = 0,

whose six candidate roots ±√u include spurious ones. The physical root is
followed by continuation from z = x + i·10⁴, where s ≈ 1/z, down a vertical
path to the target, always taking the candidate nearest the previous value.
"""

import cmath
import logging
import math
from typing import Optional, Sequence, Union

import numpy as np

from core.errors import BranchCutError, ContinuationError, DomainError
from core.exactpoly import narayana_b
from core.momentrec import build_uv, moment_polynomial
from models.report import SeriesMomentRecord, SeriesMomentReport
from models.spectral import CauchyBatch, CauchyEvaluation, DensityCurve

logger = logging.getLogger(__name__)

START_HEIGHT = 1e4
STEPS_PER_DECADE = 40
DEGENERATE_LEADING = 1e-14
AMBIGUITY_TOL = 1e-12
RESIDUAL_TOL = 1e-12
SERIES_RADIUS = 1e-3
# roundoff allowance on Im s for targets within ~1e-12 of the real axis
HERGLOTZ_SLACK = 1e-12
_SERIES_TERMS = 6

ComplexLike = Union[complex, float, np.ndarray]


def _check_rho(rho: float) -> float:
    if abs(rho) > 1:
        raise DomainError(f"rho must satisfy |rho| ≤ 1, got {rho}")
    return float(rho)


def narayana_b_generating_function(x: ComplexLike, t: float) -> ComplexLike:
    """f(x, t) = 1/√((1 − (t−1)x)² − 4x) = Σ_n N^B_n(t) xⁿ, principal square root."""
    return 1.0 / np.sqrt((1.0 - (t - 1.0) * np.asarray(x, dtype=complex)) ** 2 - 4.0 * np.asarray(x, dtype=complex))


def _r_series(z: complex, rho: float) -> complex:
    # R_G(z) = Σ_n N^B_n(ρ²) z^{2n−1}
    t = rho * rho
    return sum(narayana_b(n).evaluate(t) * z ** (2 * n - 1) for n in range(1, _SERIES_TERMS + 1))


def r_transform(z: ComplexLike, rho: float) -> ComplexLike:
    """R_G(z) = (1/z)·(1/√(((ρ²−1)z² − 1)² − 4z²) − 1).

    Scalars with |z| < 1e−3 use the Taylor series Σ N^B_n(ρ²) z^{2n−1};
    z = 0 returns 0.

    Raises:
        BranchCutError: If the square-root argument is real and ≤ 0.
    """
    rho = _check_rho(rho)
    if np.ndim(z) == 0:
        z = complex(z)
        if abs(z) < SERIES_RADIUS:
            return _r_series(z, rho)
        arg = (((rho * rho - 1.0) * z * z - 1.0) ** 2) - 4.0 * z * z
        if arg.imag == 0.0 and arg.real <= 0.0:
            raise BranchCutError(z, rho)
        return (1.0 / cmath.sqrt(arg) - 1.0) / z

    zs = np.asarray(z, dtype=complex)
    arg = ((rho * rho - 1.0) * zs * zs - 1.0) ** 2 - 4.0 * zs * zs
    on_cut = (arg.imag == 0.0) & (arg.real <= 0.0) & (np.abs(zs) >= SERIES_RADIUS)
    if np.any(on_cut):
        raise BranchCutError(complex(zs[on_cut][0]), rho)
    small = np.abs(zs) < SERIES_RADIUS
    safe = np.where(small, 1.0, zs)
    result = (1.0 / np.sqrt(np.where(small, 1.0, arg)) - 1.0) / safe
    for index in np.flatnonzero(small):
        result.flat[index] = _r_series(complex(zs.flat[index]), rho)
    return result


def _equation_coefficients(rho: float):
    leading = (1.0 - rho * rho) ** 2
    middle = 1.0 + rho * rho
    return leading, middle


def _candidates(z: np.ndarray, rho: float) -> np.ndarray:
    """All ±√u for the roots u of the squared equation, shape (P, 2·degree)."""
    leading, middle = _equation_coefficients(rho)
    z2 = z * z
    count = z.shape[0]
    if leading < DEGENERATE_LEADING:
        # quadratic: u² − u/(2B) + 1/(2B z²) = 0
        companion = np.zeros((count, 2, 2), dtype=complex)
        companion[:, 0, 0] = 1.0 / (2.0 * middle)
        companion[:, 0, 1] = -1.0 / (2.0 * middle * z2)
        companion[:, 1, 0] = 1.0
    else:
        # monic cubic: u³ − (2B/A)u² + (1/A)u − 1/(A z²) = 0
        companion = np.zeros((count, 3, 3), dtype=complex)
        companion[:, 0, 0] = 2.0 * middle / leading
        companion[:, 0, 1] = -1.0 / leading
        companion[:, 0, 2] = 1.0 / (leading * z2)
        companion[:, 1, 0] = 1.0
        companion[:, 2, 1] = 1.0
    roots = np.linalg.eigvals(companion)
    s = np.sqrt(roots)
    return np.concatenate([s, -s], axis=1)


def _defect(s: np.ndarray, z: np.ndarray, rho: float) -> np.ndarray:
    """A z² s⁶ − 2B z² s⁴ + z² s² − 1, the squared equation in s."""
    leading, middle = _equation_coefficients(rho)
    s2 = s * s
    z2 = z * z
    return z2 * s2 * (leading * s2 * s2 - 2.0 * middle * s2 + 1.0) - 1.0


def _relative_defect(s: np.ndarray, z: np.ndarray, rho: float) -> np.ndarray:
    """|defect| divided by the sum of the magnitudes of its terms."""
    leading, middle = _equation_coefficients(rho)
    s2 = np.abs(s) ** 2
    scale = np.abs(z) ** 2 * s2 * (leading * s2 * s2 + 2.0 * middle * s2 + 1.0) + 1.0
    return np.abs(_defect(s, z, rho)) / scale


def _defect_derivative(s: np.ndarray, z: np.ndarray, rho: float) -> np.ndarray:
    leading, middle = _equation_coefficients(rho)
    s2 = s * s
    return z * z * s * (6.0 * leading * s2 * s2 - 8.0 * middle * s2 + 2.0)


def _polish(s: np.ndarray, z: np.ndarray, rho: float, iterations: int = 2) -> np.ndarray:
    """Newton steps on the squared equation, kept only where they reduce the defect."""
    for _ in range(iterations):
        f = _defect(s, z, rho)
        df = _defect_derivative(s, z, rho)
        with np.errstate(divide="ignore", invalid="ignore"):
            candidate = s - f / df
        better = np.isfinite(candidate) & (np.abs(_defect(candidate, z, rho)) < np.abs(f))
        s = np.where(better, candidate, s)
    return s


def cauchy_g_many(
    zs: Sequence[complex],
    rho: float,
    start_height: float = START_HEIGHT,
    steps_per_decade: int = STEPS_PER_DECADE,
) -> CauchyBatch:
    """Continue the physical root to every target in one batched march.

    Each target x + iy is reached along x + iy_j with y_j geometric from
    ``start_height`` to y; all targets advance together so each step is one
    stacked companion-matrix eigenvalue solve.

    Args:
        zs: Targets with Im(z) > 0.
        rho: Correlation in [−1, 1].

    Returns:
        CauchyBatch; points whose continuation hit a root collision, left the
        lower half-plane or kept a relative residual of 1e−12 or more have ok=False.

    Raises:
        DomainError: If any target has Im(z) ≤ 0 or |rho| > 1.
    """
    rho = _check_rho(rho)
    targets = np.atleast_1d(np.asarray(zs, dtype=complex))
    if np.any(targets.imag <= 0.0):
        raise DomainError("cauchy_g requires Im(z) > 0")
    xs, ys = targets.real, targets.imag
    decades = float(np.max(np.abs(np.log10(start_height / ys))))
    steps = max(int(math.ceil(steps_per_decade * max(decades, 1.0))), 1)
    ratio = ys / start_height

    z = xs + 1j * start_height
    s = 1.0 / z
    ok = np.ones(targets.shape[0], dtype=bool)
    branch = np.zeros(targets.shape[0], dtype=int)
    rows = np.arange(targets.shape[0])
    for j in range(steps + 1):
        z = xs + 1j * start_height * ratio ** (j / steps)
        candidates = _candidates(z, rho)
        distance = np.abs(candidates - s[:, None])
        order = np.argsort(distance, axis=1)
        nearest, runner_up = order[:, 0], order[:, 1]
        gap = distance[rows, runner_up] - distance[rows, nearest]
        ambiguous = gap <= AMBIGUITY_TOL * (1.0 + np.abs(s))
        if np.any(ambiguous & ok):
            logger.debug(f"Root collision at step {j} for {int(np.count_nonzero(ambiguous & ok))} point(s)")
        ok &= ~ambiguous
        s = candidates[rows, nearest]
        branch = nearest

    s = _polish(s, targets, rho)
    residual = _relative_defect(s, targets, rho)
    ok &= residual < RESIDUAL_TOL
    ok &= s.imag < HERGLOTZ_SLACK * (1.0 + np.abs(s))
    failed = int(np.count_nonzero(~ok))
    if failed:
        logger.warning(f"Continuation failed at {failed} of {targets.shape[0]} point(s), rho={rho}")
    return CauchyBatch(z=targets, s=s, residual=residual, branch_id=branch, ok=ok, rho=rho)


def cauchy_g(z: complex, rho: float) -> CauchyEvaluation:
    """Cauchy transform s_G(z) for Im(z) > 0 on the physical branch.

    Raises:
        DomainError: If Im(z) ≤ 0 or |rho| > 1.
        ContinuationError: If the tracked root collided with another candidate.
    """
    batch = cauchy_g_many([z], rho)
    if not batch.ok[0]:
        raise ContinuationError(complex(z), rho)
    return batch.evaluation(0)


def _density_values(xs: np.ndarray, rho: float, eps: float) -> np.ndarray:
    batch = cauchy_g_many(xs + 1j * eps, rho)
    values = -batch.s.imag / math.pi
    return np.where(batch.ok, values, np.nan)


def density_g(
    xs: Sequence[float],
    rho: float,
    eps: float = 1e-6,
    richardson: bool = False,
) -> DensityCurve:
    """d_G(x) = −Im s_G(x + i·eps)/π on a grid.

    With ``richardson`` the values 2·d(eps/2) − d(eps) cancel the first-order
    offset error. Points where continuation fails are NaN and counted in
    ``metadata["missing"]``.
    """
    if eps <= 0.0:
        raise DomainError(f"eps must be positive, got {eps}")
    grid = np.asarray(xs, dtype=float)
    values = _density_values(grid, rho, eps)
    if richardson:
        values = 2.0 * _density_values(grid, rho, eps / 2.0) - values
    curve = DensityCurve(xs=grid, values=values, dist="G", eps=eps, rho=rho)
    curve.metadata["missing"] = curve.missing
    curve.metadata["richardson"] = richardson
    if curve.missing:
        logger.warning(f"density_g: {curve.missing} grid point(s) missing for rho={rho}")
    return curve


def density_f(
    xs: Sequence[float],
    rho: float,
    eps: float = 1e-6,
    richardson: bool = False,
) -> DensityCurve:
    """d_F(x) = d_G(√x)/√x on a grid of positive reals.

    Raises:
        DomainError: If any x ≤ 0.
    """
    grid = np.asarray(xs, dtype=float)
    if np.any(grid <= 0.0):
        raise DomainError("density_f requires x > 0")
    roots = np.sqrt(grid)
    g_curve = density_g(roots, rho, eps, richardson)
    curve = DensityCurve(xs=grid, values=g_curve.values / roots, dist="F", eps=eps, rho=rho)
    curve.metadata.update(g_curve.metadata)
    return curve


def support_edge(
    rho: float,
    dist: str = "g",
    threshold: float = 1e-8,
    eps: float = 1e-12,
    tol: float = 1e-10,
) -> float:
    """Right edge of the support, by bisection on density_g < threshold.

    The G-edge lies in (0, 4]; the F-edge is its square.
    """
    rho = _check_rho(rho)
    lo, hi = 0.05, 4.5
    for _ in range(100):
        if hi - lo < tol:
            break
        mid = 0.5 * (lo + hi)
        value = _density_values(np.array([mid]), rho, eps)[0]
        if np.isnan(value):
            raise ContinuationError(complex(mid, eps), rho, "edge bisection")
        if value > threshold:
            lo = mid
        else:
            hi = mid
    edge = 0.5 * (lo + hi)
    logger.info(f"Support edge for rho={rho}: G {edge:.10f}, F {edge * edge:.10f}")
    return edge * edge if dist.lower() == "f" else edge


def series_moments_check(
    rho: float,
    kmax: int,
    radius: float = 4.5,
    points: int = 512,
    rel_tol: float = 1e-6,
    abs_tol: float = 1e-8,
) -> SeriesMomentReport:
    """Recover M̃_m = (1/2πi)∮ s(z) z^m dz on |z| = radius and compare with M_k(ρ).

    The contour is sampled at ``points`` angles offset by half a step; the
    lower half-circle uses s(z̄) = conj(s(z)). Even m = 2k is compared to
    M_k(ρ) relatively, odd m to 0 absolutely.

    Raises:
        DomainError: If kmax is outside 0..8.
    """
    if not 0 <= kmax <= 8:
        raise DomainError(f"series_moments_check supports 0 ≤ kmax ≤ 8, got {kmax}")
    rho = _check_rho(rho)
    half = points // 2
    theta = 2.0 * math.pi * (np.arange(half) + 0.5) / points
    z = radius * np.exp(1j * theta)
    batch = cauchy_g_many(z, rho)
    table = build_uv(2 * kmax)

    records = []
    for m in range(2 * kmax + 1):
        estimate = float(2.0 * np.sum((batch.s * z ** (m + 1)).real) / points)
        if m % 2 == 0:
            expected = float(moment_polynomial(table, m // 2).evaluate(rho))
            error = abs(estimate - expected) / abs(expected)
            kind, passed = "relative", error <= rel_tol
        else:
            expected, error = 0.0, abs(estimate)
            kind, passed = "absolute", error <= abs_tol
        if not batch.ok.all():
            passed = False
        records.append(
            SeriesMomentRecord(
                m=m, estimate=estimate, expected=expected, error=error, kind=kind, passed=passed
            )
        )
    report = SeriesMomentReport(rho=rho, kmax=kmax, radius=radius, records=records)
    logger.info(f"Series moment check rho={rho}, kmax={kmax}: passed={report.passed}")
    return report


def density_grid(
    dist: str, xmin: Optional[float], xmax: float, points: int
) -> np.ndarray:
    """Evenly spaced grid; F grids must stay strictly positive."""
    if points < 2:
        raise DomainError("density grids need at least 2 points")
    if xmin is None:
        xmin = xmax / points if dist.lower() == "f" else -xmax
    if xmin >= xmax:
        raise DomainError(f"xmin {xmin} must be below xmax {xmax}")
    return np.linspace(xmin, xmax, points)
