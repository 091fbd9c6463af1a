"""Non-crossing partitions of types A and B, and moment/cumulant conversion."""

import logging
from collections import Counter
from functools import lru_cache
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple, Union

from core.errors import DomainError, MissingCumulantError
from models.partition import NCPartitionA, NCPartitionB, label_b
from models.polynomial import IntPolynomial

logger = logging.getLogger(__name__)

Blocks = Tuple[Tuple[int, ...], ...]
CumulantInput = Union[Sequence[IntPolynomial], Mapping[int, IntPolynomial]]

NCA_MAX = 10
NCB_MAX = 7
ENUMERATE_MAX = 10

# sub-ranges up to this span are materialized once and reused
_CACHE_SPAN = 10


def _nc_generate(lo: int, hi: int) -> Iterator[Blocks]:
    """Non-crossing partitions of range(lo, hi), blocks ordered by minimum.

    The block holding ``lo`` is either a singleton or continues at its next
    element j; the points strictly between lo and j then form an independent
    partition, and j's block in the partition of range(j, hi) absorbs lo.
    """
    if lo >= hi:
        yield ()
        return
    for rest in _nc_blocks(lo + 1, hi):
        yield ((lo,),) + rest
    for j in range(lo + 1, hi):
        for inner in _nc_blocks(lo + 1, j):
            for outer in _nc_blocks(j, hi):
                yield ((lo,) + outer[0],) + inner + outer[1:]


@lru_cache(maxsize=None)
def _nc_cached(lo: int, hi: int) -> Tuple[Blocks, ...]:
    return tuple(_nc_generate(lo, hi))


def _nc_blocks(lo: int, hi: int) -> Iterator[Blocks]:
    if hi - lo <= _CACHE_SPAN:
        return iter(_nc_cached(lo, hi))
    return _nc_generate(lo, hi)


def enumerate_nca(n: int) -> List[NCPartitionA]:
    """All non-crossing partitions of [n], Catalan(n) of them.

    Raises:
        DomainError: If n is outside 0..10.
    """
    if not 0 <= n <= NCA_MAX:
        raise DomainError(f"enumerate_nca supports 0 ≤ n ≤ {NCA_MAX}, got {n}")
    return [NCPartitionA.model_construct(n=n, blocks=blocks) for blocks in _nc_blocks(1, n + 1)]


def _is_half_turn_symmetric(blocks: Blocks, n: int) -> bool:
    block_of = {}
    for index, block in enumerate(blocks):
        for p in block:
            block_of[p] = index
    for block in blocks:
        image = {(p + n) % (2 * n) for p in block}
        target = block_of[next(iter(image))]
        if set(blocks[target]) != image:
            return False
    return True


def enumerate_ncb(n: int) -> List[NCPartitionB]:
    """All type-B non-crossing partitions of {±1..±n}, binom(2n, n) of them.

    Enumerates non-crossing partitions of 2n points in the order
    −1 < … < −n < 1 < … < n and keeps those invariant under the half turn
    p ↦ p + n (mod 2n), which is negation on labels.

    Raises:
        DomainError: If n is outside 0..7.
    """
    if not 0 <= n <= NCB_MAX:
        raise DomainError(f"enumerate_ncb supports 0 ≤ n ≤ {NCB_MAX}, got {n}")
    result = []
    for blocks in _nc_blocks(0, 2 * n):
        if _is_half_turn_symmetric(blocks, n):
            labelled = tuple(tuple(label_b(p, n) for p in block) for block in blocks)
            result.append(NCPartitionB.model_construct(n=n, blocks=labelled))
    logger.debug(f"Enumerated {len(result)} type-B partitions for n={n}")
    return result


def kreweras(p: NCPartitionA) -> NCPartitionA:
    """Kreweras complement K(π) = π⁻¹∘γ, with γ the cycle (1 2 … n).

    Each block is read as the increasing cyclic permutation of its elements;
    the cycles of π⁻¹∘γ are the blocks of the complement.
    """
    n = p.n
    successor = {}
    for block in p.blocks:
        for index, x in enumerate(block):
            successor[x] = block[(index + 1) % len(block)]
    predecessor = {y: x for x, y in successor.items()}

    def step(i: int) -> int:
        return predecessor[i % n + 1]

    seen = set()
    blocks = []
    for start in range(1, n + 1):
        if start in seen:
            continue
        cycle = []
        i = start
        while i not in seen:
            seen.add(i)
            cycle.append(i)
            i = step(i)
        blocks.append(tuple(sorted(cycle)))
    return NCPartitionA(n=n, blocks=blocks)


def abs_map(p: NCPartitionB) -> NCPartitionA:
    """Identify i with −i: {|x| : x ∈ B} over all blocks B, deduplicated."""
    blocks = {tuple(sorted({abs(x) for x in block})) for block in p.blocks}
    return NCPartitionA(n=p.n, blocks=sorted(blocks))


def block_count_polynomial(n: int) -> IntPolynomial:
    """Σ_{π ∈ NC(n)} t^{#blocks(π)}, equal to N^A_n(t)."""
    counts = Counter(len(blocks) for blocks in _nc_blocks(1, n + 1))
    return _histogram_polynomial(counts)


def half_nonzero_block_polynomial(n: int) -> IntPolynomial:
    """Σ_{π ∈ NC^B(n)} t^{#nonzero blocks(π)/2}, equal to N^B_n(t)."""
    counts = Counter(p.nonzero_block_count() // 2 for p in enumerate_ncb(n))
    return _histogram_polynomial(counts)


def bstats_zero_block(n: int) -> IntPolynomial:
    """Σ t^{#nonzero blocks/2} over zero-block partitions of NC^B(n), equal to Q_{n−1}(t).

    Raises:
        DomainError: If n is outside 1..6.
    """
    if not 1 <= n <= 6:
        raise DomainError(f"bstats_zero_block supports 1 ≤ n ≤ 6, got {n}")
    counts = Counter(
        p.nonzero_block_count() // 2 for p in enumerate_ncb(n) if p.zero_block() is not None
    )
    return _histogram_polynomial(counts)


def abs_fiber_sizes(n: int) -> Dict[NCPartitionA, int]:
    """Number of preimages of each σ ∈ NC(n) under abs_map."""
    fibers: Dict[NCPartitionA, int] = Counter(abs_map(p) for p in enumerate_ncb(n))
    for sigma in enumerate_nca(n):
        key = NCPartitionA(n=n, blocks=sigma.blocks)
        fibers.setdefault(key, 0)
    return dict(fibers)


def _histogram_polynomial(counts: Mapping[int, int]) -> IntPolynomial:
    if not counts:
        return IntPolynomial.zero()
    coeffs = [0] * (max(counts) + 1)
    for power, count in counts.items():
        coeffs[power] = count
    return IntPolynomial(coeffs=coeffs)


class _SeriesPowers:
    """Coefficients [z^d] M(z)^s for M(z) = Σ_j m_j z^j, m_0 = 1, grown lazily."""

    def __init__(self):
        self.moments: List[IntPolynomial] = [IntPolynomial.one()]
        self._memo: Dict[Tuple[int, int], IntPolynomial] = {}

    def coefficient(self, s: int, d: int) -> IntPolynomial:
        if s == 0:
            return IntPolynomial.one() if d == 0 else IntPolynomial.zero()
        if s == 1:
            return self.moments[d]
        key = (s, d)
        if key not in self._memo:
            total = IntPolynomial.zero()
            for e in range(d + 1):
                total = total + self.coefficient(s - 1, e) * self.moments[d - e]
            self._memo[key] = total
        return self._memo[key]


def _cumulant_lookup(cumulants: CumulantInput, n: int) -> Dict[int, IntPolynomial]:
    if isinstance(cumulants, Mapping):
        found = {size: cumulants[size] for size in range(1, n + 1) if size in cumulants}
    else:
        found = {i + 1: c for i, c in enumerate(cumulants[:n])}
    missing = [size for size in range(1, n + 1) if size not in found]
    if missing:
        raise MissingCumulantError(missing)
    return found


def moments_from_cumulants(
    cumulants: CumulantInput,
    n: int,
    method: str = "auto",
) -> IntPolynomial:
    """Free moment m_n = Σ_{π ∈ NC(n)} Π_{B ∈ π} c_{|B|}.

    Args:
        cumulants: c_1, c_2, … as a sequence (index i holds c_{i+1}) or a
            mapping from block size to cumulant.
        n: Moment order.
        method: ``enumerate`` sums over NC(n) (n ≤ 10); ``recursive`` uses
            the first-block expansion m_n = Σ_s c_s [z^{n−s}] M(z)^s;
            ``auto`` enumerates when n ≤ 10.

    Returns:
        The exact moment polynomial.

    Raises:
        MissingCumulantError: If a cumulant of size ≤ n is missing.
        DomainError: On an unknown method or n out of range for enumeration.
    """
    if n < 0:
        raise DomainError(f"moment order must be nonnegative, got {n}")
    if method not in ("auto", "enumerate", "recursive"):
        raise DomainError(f"unknown method {method!r}")
    if n == 0:
        return IntPolynomial.one()
    c = _cumulant_lookup(cumulants, n)
    if method == "auto":
        method = "enumerate" if n <= ENUMERATE_MAX else "recursive"

    if method == "enumerate":
        if n > ENUMERATE_MAX:
            raise DomainError(f"enumeration supports n ≤ {ENUMERATE_MAX}, got {n}")
        total = IntPolynomial.zero()
        for blocks in _nc_blocks(1, n + 1):
            term = IntPolynomial.one()
            for block in blocks:
                term = term * c[len(block)]
                if term.is_zero():
                    break
            total = total + term
        return total

    powers = _SeriesPowers()
    for j in range(1, n + 1):
        m_j = IntPolynomial.zero()
        for s in range(1, j + 1):
            if not c[s].is_zero():
                m_j = m_j + c[s] * powers.coefficient(s, j - s)
        powers.moments.append(m_j)
    return powers.moments[n]


def cumulants_from_moments(moments: Sequence[IntPolynomial], n: int) -> List[IntPolynomial]:
    """Invert the moment-cumulant relation for c_1..c_n.

    Uses the triangular first-block expansion: the s = n term of
    m_n = Σ_s c_s [z^{n−s}] M(z)^s is c_n itself.

    Args:
        moments: m_1..m_n (index i holds m_{i+1}).
        n: Number of cumulants.

    Returns:
        [c_1, …, c_n].

    Raises:
        DomainError: If fewer than n moments are given.
    """
    if len(moments) < n:
        raise DomainError(f"need {n} moments, got {len(moments)}")
    powers = _SeriesPowers()
    powers.moments.extend(moments[:n])
    cumulants: List[IntPolynomial] = []
    for j in range(1, n + 1):
        c_j = powers.moments[j]
        for s in range(1, j):
            if not cumulants[s - 1].is_zero():
                c_j = c_j - cumulants[s - 1] * powers.coefficient(s, j - s)
        cumulants.append(c_j)
    logger.debug(f"Inverted {n} moments into free cumulants")
    return cumulants
