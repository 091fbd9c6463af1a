"""Moment recurrence for the squared singular values of X².

U_k and V_k are the weighted planar chord-diagram sums under the two
colorings; they satisfy, with U_0 = V_0 = 1,

    U_{k+1} = Σ_{i=0}^{⌊(k−1)/2⌋} U_{k−2i−1} V_{2i+1} + ρ Σ_{i=0}^{⌊k/2⌋} V_{2i} U_{k−2i}
    V_{k+1} = Σ_{i=0}^{⌊k/2⌋} U_{2i} V_{k−2i} + ρ Σ_{i=0}^{⌊(k−1)/2⌋} U_{2i+1} V_{k−2i−1}

and the moments of W are M_k(ρ) = U_{2k}(ρ).
"""

import logging
from fractions import Fraction
from typing import List, Union

from core.errors import DomainError
from core.exactpoly import even_catalan, fuss_catalan
from models.moments import MomentTable
from models.polynomial import IntPolynomial

logger = logging.getLogger(__name__)

Real = Union[int, Fraction, float]


def build_uv(kmax: int) -> MomentTable:
    """Fill U_0..U_kmax and V_0..V_kmax by dynamic programming.

    Args:
        kmax: Largest index to compute.

    Returns:
        Immutable MomentTable with exact polynomials in ρ.

    Raises:
        DomainError: If kmax is negative.
    """
    if kmax < 0:
        raise DomainError(f"kmax must be nonnegative, got {kmax}")
    u: List[IntPolynomial] = [IntPolynomial.one()]
    v: List[IntPolynomial] = [IntPolynomial.one()]
    for k in range(kmax):
        # floor division keeps (k-1)//2 = -1 at k=0, so the sum is empty
        u_plain = IntPolynomial.zero()
        for i in range((k - 1) // 2 + 1):
            u_plain = u_plain + u[k - 2 * i - 1] * v[2 * i + 1]
        u_rho = IntPolynomial.zero()
        for i in range(k // 2 + 1):
            u_rho = u_rho + v[2 * i] * u[k - 2 * i]

        v_plain = IntPolynomial.zero()
        for i in range(k // 2 + 1):
            v_plain = v_plain + u[2 * i] * v[k - 2 * i]
        v_rho = IntPolynomial.zero()
        for i in range((k - 1) // 2 + 1):
            v_rho = v_rho + u[2 * i + 1] * v[k - 2 * i - 1]

        u.append(u_plain + u_rho.shift(1))
        v.append(v_plain + v_rho.shift(1))

    table = MomentTable(u_polys=tuple(u), v_polys=tuple(v), kmax=kmax)
    logger.debug(f"Built U/V table up to k={kmax}")
    return table


def moment_polynomial(table: MomentTable, k: int) -> IntPolynomial:
    """Return M_k = U_{2k}.

    Raises:
        DomainError: If k < 0 or 2k exceeds the table.
    """
    if k < 0 or 2 * k > table.kmax:
        raise DomainError(f"moment index {k} needs 2k ≤ kmax={table.kmax}")
    return table.u_polys[2 * k]


def _check_rho(rho: Real) -> Real:
    if abs(rho) > 1:
        raise DomainError(f"rho must satisfy |rho| ≤ 1, got {rho}")
    if isinstance(rho, float) and rho.is_integer():
        return int(rho)
    return rho


def moment_values(table: MomentTable, rho: Real, kmax: int) -> List[Real]:
    """Evaluate M_0..M_kmax at ρ, exactly for int or Fraction arguments.

    Args:
        table: Table with kmax ≥ 2·kmax.
        rho: Correlation in [−1, 1].
        kmax: Largest moment index.

    Returns:
        Moments as ints for integral ρ, Fractions for rational ρ and floats otherwise.

    Raises:
        DomainError: If |rho| > 1 or the table is too short.
    """
    rho = _check_rho(rho)
    return [moment_polynomial(table, k).evaluate(rho) for k in range(kmax + 1)]


def moment_bounds_hold(table: MomentTable, rho: Real, kmax: int) -> bool:
    """Check binom(3k,k)/(2k+1) ≤ M_k(ρ) ≤ binom(4k,2k)/(2k+1) for k ≤ kmax."""
    values = moment_values(table, rho, kmax)
    for k, value in enumerate(values):
        if not fuss_catalan(k) <= value <= even_catalan(k):
            logger.warning(f"Moment bound violated at k={k}, rho={rho}: {value}")
            return False
    return True


def symmetrized_moments(table: MomentTable, n: int) -> List[IntPolynomial]:
    """Moments m_1..m_n of the symmetrized law G: m_{2k} = M_k, odd moments 0."""
    result = []
    for order in range(1, n + 1):
        if order % 2:
            result.append(IntPolynomial.zero())
        else:
            result.append(moment_polynomial(table, order // 2))
    return result
