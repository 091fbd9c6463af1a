"""Exact polynomial arithmetic, Narayana families and their identity suite.

Narayana polynomials of types A and B and the derivative family Q are kept in
an abstract variable t; callers substitute t ← ρ² with
``IntPolynomial.substitute_square`` when they need a polynomial in ρ.
"""

import logging
from functools import lru_cache
from math import comb
from typing import Dict, List, Tuple

from core.errors import DomainError
from models.polynomial import IntPolynomial, Scalar
from models.report import IdentityFailure, IdentityReport

logger = logging.getLogger(__name__)

T = IntPolynomial.monomial(1)


def poly_add(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    return a + b


def poly_mul(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    return a * b


def poly_reverse(p: IntPolynomial, n: int) -> IntPolynomial:
    """Return x^n·p(1/x).

    Args:
        p: Polynomial with degree at most n.
        n: Degree bound.

    Returns:
        The polynomial whose coefficient of x^i is p's coefficient of x^(n-i).

    Raises:
        DomainError: If degree(p) > n.
    """
    if p.degree > n:
        raise DomainError(f"cannot reverse degree-{p.degree} polynomial with bound {n}")
    return p.reverse(n)


def poly_eval(p: IntPolynomial, x: Scalar) -> Scalar:
    return p.evaluate(x)


def catalan(n: int) -> int:
    if n < 0:
        raise DomainError(f"Catalan index must be nonnegative, got {n}")
    return comb(2 * n, n) // (n + 1)


def fuss_catalan(k: int) -> int:
    """binom(3k, k)/(2k+1): moments of the squared i.i.d. case."""
    return comb(3 * k, k) // (2 * k + 1)


def even_catalan(k: int) -> int:
    """binom(4k, 2k)/(2k+1) = Catalan(2k): moments of the symmetric case."""
    return comb(4 * k, 2 * k) // (2 * k + 1)


@lru_cache(maxsize=None)
def narayana_a(n: int) -> IntPolynomial:
    """Type-A Narayana polynomial N^A_n(t) = Σ_k (1/k)·C(n−1,k−1)·C(n,k−1)·t^k.

    N^A_0 is the constant 1.
    """
    if n < 0:
        raise DomainError(f"narayana_a index must be nonnegative, got {n}")
    if n == 0:
        return IntPolynomial.one()
    coeffs = [0] * (n + 1)
    for k in range(1, n + 1):
        numerator = comb(n - 1, k - 1) * comb(n, k - 1)
        # always divisible: k·N(n,k) = C(n-1,k-1)·C(n,k-1)
        coeffs[k] = numerator // k
    return IntPolynomial(coeffs=coeffs)


@lru_cache(maxsize=None)
def narayana_b(n: int) -> IntPolynomial:
    """Type-B Narayana polynomial N^B_n(t) = Σ_k C(n,k)²·t^k."""
    if n < 0:
        raise DomainError(f"narayana_b index must be nonnegative, got {n}")
    return IntPolynomial(coeffs=[comb(n, k) ** 2 for k in range(n + 1)])


@lru_cache(maxsize=None)
def q_poly(m: int) -> IntPolynomial:
    """Q_m(t) = Σ_{k=1}^{m+1} C(m,k−1)·C(m+1,k−1)·t^(k−1), the derivative of N^A_{m+1}."""
    if m < 0:
        raise DomainError(f"q_poly index must be nonnegative, got {m}")
    n = m + 1
    return IntPolynomial(coeffs=[comb(n - 1, k - 1) * comb(n, k - 1) for k in range(1, n + 1)])


def _conv_sum(terms: List[Tuple[IntPolynomial, IntPolynomial]]) -> IntPolynomial:
    total = IntPolynomial.zero()
    for a, b in terms:
        total = total + a * b
    return total


def _identity_sides(n: int) -> Dict[str, Tuple[IntPolynomial, IntPolynomial]]:
    """Left- and right-hand sides of every identity at index n ≥ 1."""
    na, nb, q = narayana_a, narayana_b, q_poly
    sides = {}

    # N^B_n = Q_{n-1} + t^n Q_{n-1}(1/t)
    sides["nb_from_q"] = (nb(n), q(n - 1) + q(n - 1).reverse(n))

    # (n+1) N^A_n = t Q_{n-1} + t^n Q_{n-1}(1/t)
    sides["na_from_q"] = ((n + 1) * na(n), T * q(n - 1) + q(n - 1).reverse(n))

    # Q_{n-1} = Σ_{k=1}^n N^A_{k-1} N^B_{n-k}
    sides["q_convolution"] = (q(n - 1), _conv_sum([(na(k - 1), nb(n - k)) for k in range(1, n + 1)]))

    # Q_n = (n+1) N^A_n + Σ_{k=1}^n N^A_{k-1} Q_{n-k}
    sides["q_recurrence"] = (
        q(n),
        (n + 1) * na(n) + _conv_sum([(na(k - 1), q(n - k)) for k in range(1, n + 1)]),
    )

    # N^A_n = t N^A_{n-1} + Σ_{k=1}^{n-1} N^A_{k-1} N^A_{n-k}
    sides["na_recurrence"] = (
        na(n),
        T * na(n - 1) + _conv_sum([(na(k - 1), na(n - k)) for k in range(1, n)]),
    )

    # N^B_n = t N^B_{n-1} + Σ_{k=1}^n N^A_{k-1} N^B_{n-k} + Σ_{k=1}^{n-1} N^B_{k-1} N^A_{n-k}
    sides["nb_recurrence"] = (
        nb(n),
        T * nb(n - 1)
        + _conv_sum([(na(k - 1), nb(n - k)) for k in range(1, n + 1)])
        + _conv_sum([(nb(k - 1), na(n - k)) for k in range(1, n)]),
    )

    # coupled recurrences, evaluated on the closed forms
    sides["nb_coupled"] = (
        nb(n),
        q(n - 1).reverse(n) + _conv_sum([(na(k - 1), nb(n - k)) for k in range(1, n + 1)]),
    )
    sides["q_reflected_coupled"] = (
        q(n).reverse(n),
        nb(n) + _conv_sum([(na(k - 1), q(n - k).reverse(n - k)) for k in range(1, n + 1)]),
    )
    sides["na_coupled"] = (
        na(n),
        _conv_sum([(na(k - 1), T * na(n - k).reverse(n - k)) for k in range(1, n + 1)]),
    )

    # N^A_n(t) = t^{n+1} N^A_n(1/t)
    sides["palindromy"] = (na(n), na(n).reverse(n + 1))
    return sides


def corollary_families(
    n_max: int,
) -> Tuple[List[IntPolynomial], List[IntPolynomial], List[IntPolynomial]]:
    """Generate P^A, P^B and R from the coupled recurrences alone.

    Starts from P^A_0 = P^B_0 = R_0 = 1 and, for each n, applies the type-A
    recurrence, then the type-B one (which needs R_{n-1}), then solves for
    t^n R_n(1/t) and reverses it.

    Args:
        n_max: Largest index to generate.

    Returns:
        Tuple (P^A_0..P^A_n_max, P^B_0..P^B_n_max, R_0..R_n_max).
    """
    pa = [IntPolynomial.one()]
    pb = [IntPolynomial.one()]
    r = [IntPolynomial.one()]
    for n in range(1, n_max + 1):
        pa.append(_conv_sum([(pa[k - 1], T * pa[n - k].reverse(n - k)) for k in range(1, n + 1)]))
        pb.append(
            r[n - 1].reverse(n) + _conv_sum([(pa[k - 1], pb[n - k]) for k in range(1, n + 1)])
        )
        reversed_r = pb[n] + _conv_sum(
            [(pa[k - 1], r[n - k].reverse(n - k)) for k in range(1, n + 1)]
        )
        r.append(reversed_r.reverse(n))
    return pa, pb, r


IDENTITY_IDS = (
    "nb_from_q", "na_from_q", "q_convolution", "q_recurrence", "na_recurrence", "nb_recurrence",
    "nb_coupled", "q_reflected_coupled", "na_coupled", "palindromy", "recurrence_uniqueness",
)


def check_identities(n_max: int) -> IdentityReport:
    """Verify the Narayana identity suite as exact polynomial equalities.

    Args:
        n_max: Largest index checked; every 1 ≤ n ≤ n_max is covered.

    Returns:
        IdentityReport listing each failure with its difference polynomial.
    """
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    failures: List[IdentityFailure] = []
    checked = 0
    for n in range(1, n_max + 1):
        for identity_id, (lhs, rhs) in _identity_sides(n).items():
            checked += 1
            if lhs != rhs:
                failures.append(IdentityFailure(identity_id=identity_id, n=n, difference=lhs - rhs))

    pa, pb, r = corollary_families(n_max)
    for n in range(1, n_max + 1):
        checked += 1
        expected = (narayana_a(n), narayana_b(n), q_poly(n))
        for got, want in zip((pa[n], pb[n], r[n]), expected):
            if got != want:
                failures.append(
                    IdentityFailure(identity_id="recurrence_uniqueness", n=n, difference=got - want)
                )
                break

    if failures:
        logger.warning(f"Identity suite up to n={n_max}: {len(failures)} failure(s)")
    else:
        logger.info(f"Identity suite up to n={n_max}: all {checked} checks passed")
    return IdentityReport(n_max=n_max, checked=checked, failures=failures)
