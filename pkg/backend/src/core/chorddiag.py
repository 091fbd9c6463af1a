"""Weighted planar chord diagrams and exact finite-N Wick expectations.

A diagram on 2m linearly ordered vertices is weighted ρ^l, where l counts
chords joining two vertices of the same color under a ColoringRule. Summing
over planar diagrams reproduces U_m (U-rule) and V_m (V-rule).

A diagram is decomposable when some contiguous interval of 4l vertices
(l ≥ 1) is closed under the matching and the vertex right after it is the
right endpoint of a chord opened before the interval. The remaining diagrams
are atomic; their U-rule sum over 4n vertices is N^B_n(ρ²).
"""

import logging
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple, Union

from core.errors import DomainError
from core.exactpoly import narayana_a, narayana_b, q_poly
from models.diagram import ChordDiagram, ColoringRule
from models.polynomial import IntPolynomial
from models.report import TraceComparison

logger = logging.getLogger(__name__)

PLANAR_MAX = 10
TRACE_GUARD = 10**8
DIAG_VARIANCES = ("unit", "one_plus_rho")

Pairs = Tuple[Tuple[int, int], ...]
Rational = Union[int, Fraction, float]


@lru_cache(maxsize=None)
def _matchings(lo: int, hi: int) -> Tuple[Pairs, ...]:
    """Planar perfect matchings of vertices lo..hi (inclusive)."""
    if lo > hi:
        return ((),)
    result = []
    # an even number of vertices must sit strictly inside the chord (lo, partner)
    for partner in range(lo + 1, hi + 1, 2):
        for inner in _matchings(lo + 1, partner - 1):
            for outer in _matchings(partner + 1, hi):
                result.append(((lo, partner),) + inner + outer)
    return tuple(result)


def enumerate_planar(m: int) -> List[ChordDiagram]:
    """All Catalan(m) planar diagrams on vertices 1..2m.

    Raises:
        DomainError: If m is outside 1..10.
    """
    if not 1 <= m <= PLANAR_MAX:
        raise DomainError(f"enumerate_planar supports 1 ≤ m ≤ {PLANAR_MAX}, got {m}")
    return [
        ChordDiagram.model_construct(pairs=tuple(sorted(pairs)), m=m)
        for pairs in _matchings(1, 2 * m)
    ]


def _same_color_count(pairs: Pairs, rule: ColoringRule) -> int:
    return sum(1 for a, b in pairs if rule.is_black(a) == rule.is_black(b))


def diagram_weight(d: ChordDiagram, c: ColoringRule) -> IntPolynomial:
    """ρ^l with l the number of same-color chords.

    Raises:
        DomainError: If d is not planar.
    """
    if not d.is_planar():
        raise DomainError("diagram weights are defined for planar diagrams only")
    return IntPolynomial.monomial(_same_color_count(d.pairs, c))


def _weight_polynomial(exponents: Counter) -> IntPolynomial:
    if not exponents:
        return IntPolynomial.zero()
    coeffs = [0] * (max(exponents) + 1)
    for power, count in exponents.items():
        coeffs[power] = count
    return IntPolynomial(coeffs=coeffs)


def partition_function(m: int, c: ColoringRule) -> IntPolynomial:
    """Σ of diagram weights over all planar diagrams on 2m vertices."""
    if m == 0:
        return IntPolynomial.one()
    if not 1 <= m <= PLANAR_MAX:
        raise DomainError(f"partition_function supports 0 ≤ m ≤ {PLANAR_MAX}, got {m}")
    exponents = Counter(_same_color_count(pairs, c) for pairs in _matchings(1, 2 * m))
    return _weight_polynomial(exponents)


def is_decomposable(pairs: Pairs, total: int) -> bool:
    """Decomposability test on a planar matching of vertices 1..total."""
    partner: Dict[int, int] = {}
    for a, b in pairs:
        partner[a] = b
        partner[b] = a
    for start in range(1, total + 1):
        low, high = total + 1, 0
        for end in range(start, total):
            low = min(low, partner[end])
            high = max(high, partner[end])
            length = end - start + 1
            if length % 4 or low < start or high > end:
                continue
            following = end + 1
            if partner[following] < start:
                return True
    return False


def _atomic_sum(total: int) -> IntPolynomial:
    exponents = Counter(
        _same_color_count(pairs, ColoringRule.U)
        for pairs in _matchings(1, total)
        if not is_decomposable(pairs, total)
    )
    return _weight_polynomial(exponents)


def atomic_partition_function(n: int) -> IntPolynomial:
    """U-rule weight sum over atomic diagrams on 4n vertices, equal to N^B_n(ρ²).

    Raises:
        DomainError: If n is outside 0..5.
    """
    if not 0 <= n <= 5:
        raise DomainError(f"atomic_partition_function supports 0 ≤ n ≤ 5, got {n}")
    if n == 0:
        return IntPolynomial.one()
    return _atomic_sum(4 * n)


def atomic_partition_function_odd(n: int) -> IntPolynomial:
    """U-rule weight sum over atomic diagrams on 4n+2 vertices, equal to ρ^{2n+1}Q_n(1/ρ²).

    Raises:
        DomainError: If n is outside 0..4.
    """
    if not 0 <= n <= 4:
        raise DomainError(f"atomic_partition_function_odd supports 0 ≤ n ≤ 4, got {n}")
    return _atomic_sum(4 * n + 2)


def atomic_family(kmax: int) -> Dict[str, List[IntPolynomial]]:
    """Atomic partition-function families from the first-chord recurrences.

    Returns a dict of lists indexed by k = 0..kmax:
        ``b_even[k]`` = B_{2k}, ``b_odd[k]`` = B̃_{2k+1},
        ``a[k]`` = A_{2k+1}, ``a_tilde[k]`` = Ã_{2k+1},
    started from B_0 = 1, A_1 = ρ, Ã_1 = 1.
    """
    if kmax < 0:
        raise DomainError(f"kmax must be nonnegative, got {kmax}")
    one = IntPolynomial.one()
    a: List[IntPolynomial] = [IntPolynomial.monomial(1)]
    a_tilde: List[IntPolynomial] = [one]
    b_even: List[IntPolynomial] = [one]
    b_odd: List[IntPolynomial] = [IntPolynomial.monomial(1)]
    for k in range(1, kmax + 1):
        a.append(sum((a_tilde[i - 1] * a[k - i] for i in range(1, k + 1)), IntPolynomial.zero()))
        a_tilde.append(
            sum((a[i - 1] * a_tilde[k - i] for i in range(1, k + 1)), IntPolynomial.zero()).shift(1)
        )
        b_even.append(
            b_odd[k - 1].shift(1)
            + sum((a_tilde[i - 1] * b_even[k - i] for i in range(1, k + 1)), IntPolynomial.zero())
        )
        b_odd.append(
            b_even[k].shift(1)
            + sum((a_tilde[i - 1] * b_odd[k - i] for i in range(1, k + 1)), IntPolynomial.zero())
        )
    return {"b_even": b_even, "b_odd": b_odd, "a": a, "a_tilde": a_tilde}


def atomic_family_closed_forms(kmax: int) -> Dict[str, List[IntPolynomial]]:
    """Closed forms matching ``atomic_family``, written through the Narayana families."""
    rho = IntPolynomial.monomial(1)
    return {
        "b_even": [narayana_b(n).substitute_square() for n in range(kmax + 1)],
        "b_odd": [rho * q_poly(n).reverse(n).substitute_square() for n in range(kmax + 1)],
        "a": [rho * narayana_a(n).reverse(n).substitute_square() for n in range(kmax + 1)],
        "a_tilde": [narayana_a(n).substitute_square() for n in range(kmax + 1)],
    }


def _relabel(pairs: Sequence[Tuple[int, int]], offset: int) -> Pairs:
    return tuple((a - offset, b - offset) for a, b in pairs)


def splitting_identity_holds(k: int) -> bool:
    """Check the first-chord split on every planar diagram with 2(k+1) vertices.

    Removing the chord (1, p) leaves an inner piece on 2..p−1 colored by the
    V-rule and an outer piece on p+1..2k+2 colored by the U-rule, or by the
    inverted U-rule when p ≡ 2 (mod 4), in which case the first chord is
    same-colored and contributes a factor ρ.
    """
    total = 2 * (k + 1)
    for pairs in _matchings(1, total):
        p = pairs[0][1]
        inner = _relabel([pair for pair in pairs[1:] if pair[0] < p], 1)
        outer = _relabel([pair for pair in pairs[1:] if pair[0] > p], p)
        if p % 4 == 0:
            outer_rule, extra = ColoringRule.U, 0
        else:
            outer_rule, extra = ColoringRule.U_INVERTED, 1
        split = (
            _same_color_count(inner, ColoringRule.V)
            + _same_color_count(outer, outer_rule)
            + extra
        )
        if split != _same_color_count(pairs, ColoringRule.U):
            logger.warning(f"Splitting identity fails for {pairs}")
            return False
    return True


def _restricted_growth(length: int, max_blocks: int) -> Iterator[Tuple[List[int], int]]:
    """Set partitions of range(length) as restricted growth strings with ≤ max_blocks blocks."""
    labels = [0] * length

    def extend(position: int, used: int) -> Iterator[Tuple[List[int], int]]:
        if position == length:
            yield labels, used
            return
        for label in range(min(used + 1, max_blocks)):
            labels[position] = label
            yield from extend(position + 1, max(used, label + 1))

    if length == 0:
        yield labels, 0
        return
    labels[0] = 0
    yield from extend(1, 1)


def _falling_factorial(n: int, k: int) -> int:
    result = 1
    for i in range(k):
        result *= n - i
    return result


def _covariance(e: Tuple[int, int], f: Tuple[int, int], diag_variance: str) -> IntPolynomial:
    """E[X_e X_f] as a polynomial in ρ for entry positions e = (a, b), f = (c, d)."""
    a, b = e
    c, d = f
    if a == b:
        if c == a and d == a:
            return IntPolynomial(coeffs=(1, 1)) if diag_variance == "one_plus_rho" else IntPolynomial.one()
        return IntPolynomial.zero()
    if a == c and b == d:
        return IntPolynomial.one()
    if a == d and b == c:
        return IntPolynomial.monomial(1)
    return IntPolynomial.zero()


def _wick_sum(entries: Tuple[Tuple[int, int], ...], diag_variance: str) -> IntPolynomial:
    """Σ over pair partitions of Π covariances."""
    if not entries:
        return IntPolynomial.one()
    first, rest = entries[0], entries[1:]
    total = IntPolynomial.zero()
    for j, other in enumerate(rest):
        cov = _covariance(first, other, diag_variance)
        if cov.is_zero():
            continue
        total = total + cov * _wick_sum(rest[:j] + rest[j + 1:], diag_variance)
    return total


def _check_trace_args(k: int, n: int, diag_variance: str) -> None:
    if k < 1 or n < 1:
        raise DomainError(f"need k ≥ 1 and N ≥ 1, got k={k}, N={n}")
    if n ** (4 * k) > TRACE_GUARD:
        raise DomainError(f"N^(4k) = {n}^{4 * k} exceeds the brute-force guard {TRACE_GUARD}")
    if diag_variance not in DIAG_VARIANCES:
        raise DomainError(f"diag_variance must be one of {DIAG_VARIANCES}")


def expected_trace_polynomial(k: int, n: int, diag_variance: str = "unit") -> IntPolynomial:
    """Σ over index tuples of E[Π factors] for Tr(X²(Xᵀ)²)^k, as a polynomial in ρ.

    Factor p (1-based) of the trace word is X_{i_{p−1} i_p} when p ≡ 1, 2
    (mod 4) and X_{i_p i_{p−1}} otherwise, with i_{4k} = i_0. Index tuples
    are grouped by their equality pattern, each pattern counted with the
    falling factorial N(N−1)… of its number of distinct values.
    """
    _check_trace_args(k, n, diag_variance)
    length = 4 * k
    total = IntPolynomial.zero()
    for labels, blocks in _restricted_growth(length, n):
        entries = []
        for p in range(1, length + 1):
            previous, current = labels[p - 1], labels[p % length]
            if p % 4 in (1, 2):
                entries.append((previous, current))
            else:
                entries.append((current, previous))
        pattern_sum = _wick_sum(tuple(entries), diag_variance)
        if not pattern_sum.is_zero():
            total = total + pattern_sum * _falling_factorial(n, blocks)
    return total


def exact_expected_trace(
    k: int, n: int, rho: Rational, diag_variance: str = "unit"
) -> Fraction:
    """Exact (1/N)·E[Tr W^k] for W = N⁻²X²(Xᵀ)² with Gaussian entries.

    Args:
        k: Power of W.
        n: Matrix size N, with N^{4k} ≤ 10⁸.
        rho: Correlation; floats are converted exactly to Fractions.
        diag_variance: ``unit`` (E X_ii² = 1) or ``one_plus_rho``.

    Returns:
        The expectation as an exact Fraction.

    Raises:
        DomainError: On guard violation or invalid arguments.
    """
    if abs(rho) > 1:
        raise DomainError(f"rho must satisfy |rho| ≤ 1, got {rho}")
    numerator = expected_trace_polynomial(k, n, diag_variance).evaluate(Fraction(rho))
    return Fraction(numerator) / n ** (2 * k + 1)


def example_trace_formula(n: int, rho: Rational) -> Fraction:
    """Three-bracket finite-N expression for (1/N)·E[Tr W]."""
    rho = Fraction(rho)
    return (
        (rho**2 + Fraction(2) * rho / n + Fraction(1, n**2))
        + (rho**2 / n + (2 * rho + 1) / Fraction(n**2))
        + (1 + 2 * rho / n + rho**2 / Fraction(n**2))
    )


def compare_example_formula(
    n_values: Sequence[int],
    rho_values: Sequence[Rational],
    diag_variance: str = "unit",
) -> List[TraceComparison]:
    """Compare exact_expected_trace(1, N, ρ) with the three-bracket formula.

    Disagreements are returned and logged, never raised.
    """
    records = []
    for n in n_values:
        polynomial = expected_trace_polynomial(1, n, diag_variance)
        for rho in rho_values:
            exact = Fraction(polynomial.evaluate(Fraction(rho))) / n**3
            record = TraceComparison(
                n=n,
                rho=Fraction(rho),
                diag_variance=diag_variance,
                exact=exact,
                formula=example_trace_formula(n, rho),
            )
            if not record.agrees:
                logger.warning(
                    f"Finite-N formula differs at N={n}, rho={rho} ({diag_variance}): "
                    f"exact={exact}, formula={record.formula}"
                )
            records.append(record)
    return records
