"""Tests for planar chord diagrams and exact finite-N traces."""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from core.chorddiag import (
    atomic_family,
    atomic_family_closed_forms,
    atomic_partition_function,
    atomic_partition_function_odd,
    compare_example_formula,
    diagram_weight,
    enumerate_planar,
    exact_expected_trace,
    example_trace_formula,
    expected_trace_polynomial,
    is_decomposable,
    partition_function,
    splitting_identity_holds,
)
from core.errors import DomainError
from core.exactpoly import catalan, narayana_b, q_poly
from core.momentrec import build_uv
from models.diagram import ChordDiagram, ColoringRule
from models.polynomial import IntPolynomial

P = IntPolynomial
RHO = P.monomial(1)


@pytest.mark.unit
class TestEnumeration:
    def test_two_chords(self):
        diagrams = {d.pairs for d in enumerate_planar(2)}
        assert diagrams == {((1, 2), (3, 4)), ((1, 4), (2, 3))}

    def test_one_chord(self):
        assert [d.pairs for d in enumerate_planar(1)] == [((1, 2),)]

    @pytest.mark.parametrize("m", range(1, 9))
    def test_catalan_count_without_duplicates(self, m):
        diagrams = enumerate_planar(m)
        assert len(diagrams) == catalan(m)
        assert len({d.pairs for d in diagrams}) == len(diagrams)
        assert all(d.is_planar() for d in diagrams)

    @pytest.mark.parametrize("m", [0, 11])
    def test_out_of_range(self, m):
        with pytest.raises(DomainError):
            enumerate_planar(m)

    def test_diagram_rejects_non_matching(self):
        with pytest.raises(ValidationError):
            ChordDiagram(pairs=[(1, 2), (2, 3)], m=2)


@pytest.mark.unit
class TestWeights:
    def test_coloring_rules(self):
        assert [ColoringRule.U.is_black(j) for j in range(1, 5)] == [True, True, False, False]
        assert [ColoringRule.V.is_black(j) for j in range(1, 5)] == [True, False, False, True]
        assert not ColoringRule.U_INVERTED.is_black(1)

    def test_parallel_chords_u_rule(self):
        d = ChordDiagram(pairs=[(1, 2), (3, 4)], m=2)
        assert diagram_weight(d, ColoringRule.U) == P.monomial(2)

    def test_nested_chords_u_rule(self):
        d = ChordDiagram(pairs=[(4, 1), (2, 3)], m=2)
        assert d.pairs == ((1, 4), (2, 3))
        assert diagram_weight(d, ColoringRule.U) == P.one()

    @pytest.mark.parametrize("rule", list(ColoringRule))
    def test_inversion_preserves_weight(self, rule):
        for d in enumerate_planar(4):
            assert diagram_weight(d, rule) == diagram_weight(d, rule.inverted)

    def test_non_planar_rejected(self):
        d = ChordDiagram(pairs=[(1, 3), (2, 4)], m=2)
        assert not d.is_planar()
        with pytest.raises(DomainError):
            diagram_weight(d, ColoringRule.U)


@pytest.mark.unit
class TestPartitionFunctions:
    def test_small_values(self):
        assert partition_function(0, ColoringRule.U) == P.one()
        assert partition_function(1, ColoringRule.U) == RHO
        assert partition_function(1, ColoringRule.V) == P.one()
        assert partition_function(2, ColoringRule.U) == P(coeffs=[1, 0, 1])
        assert partition_function(4, ColoringRule.U) == P(coeffs=[3, 0, 8, 0, 3])

    def test_matches_recurrence(self):
        table = build_uv(8)
        for m in range(1, 9):
            assert partition_function(m, ColoringRule.U) == table.u_polys[m]
            assert partition_function(m, ColoringRule.V) == table.v_polys[m]

    def test_atomic_even(self):
        assert atomic_partition_function(0) == P.one()
        assert atomic_partition_function(1) == P(coeffs=[1, 0, 1])
        assert atomic_partition_function(2) == P(coeffs=[1, 0, 4, 0, 1])
        assert atomic_partition_function(3) == P(coeffs=[1, 0, 9, 0, 9, 0, 1])
        for n in range(4):
            assert atomic_partition_function(n) == narayana_b(n).substitute_square()

    def test_atomic_odd(self):
        for n in range(4):
            expected = RHO * q_poly(n).reverse(n).substitute_square()
            assert atomic_partition_function_odd(n) == expected

    def test_atomic_range(self):
        with pytest.raises(DomainError):
            atomic_partition_function(6)
        with pytest.raises(DomainError):
            atomic_partition_function_odd(5)

    def test_decomposable_example(self):
        # (1,6) opens before the closed interval 2..5 and closes right after it
        assert is_decomposable(((1, 6), (2, 3), (4, 5)), 6)
        assert not is_decomposable(((1, 4), (2, 3)), 4)

    def test_atomic_family_closed_forms(self):
        recurrence = atomic_family(6)
        closed = atomic_family_closed_forms(6)
        for key in ("b_even", "b_odd", "a", "a_tilde"):
            assert recurrence[key] == closed[key]

    @pytest.mark.parametrize("k", range(0, 8))
    def test_splitting_identity(self, k):
        assert splitting_identity_holds(k)


@pytest.mark.unit
class TestFiniteNTraces:
    def test_scalar_fourth_moment(self):
        assert exact_expected_trace(1, 1, Fraction(1, 3)) == 3

    def test_trace_numerator_polynomial(self):
        assert expected_trace_polynomial(1, 1) == P(coeffs=[3])
        # N^3 + 2N + 2N(N-1) rho + N^2(N-1) rho^2 at N = 2
        assert expected_trace_polynomial(1, 2) == P(coeffs=[12, 4, 4])

    def test_unit_diagonal_closed_form(self):
        for n in range(2, 6):
            for rho in (Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(1)):
                expected = 1 + Fraction(2, n**2) + 2 * rho * (n - 1) / n**2 + rho**2 * (n - 1) / n
                assert exact_expected_trace(1, n, rho) == expected

    def test_float_rho_converted_exactly(self):
        assert float(exact_expected_trace(1, 4, 0.3)) == pytest.approx(1.305, abs=1e-12)

    def test_limit_approaches_first_moment(self):
        value = exact_expected_trace(1, 40, Fraction(1, 2))
        assert abs(float(value) - 1.25) < 0.05

    def test_three_bracket_formula_exact_with_one_plus_rho(self):
        records = compare_example_formula(range(2, 9), [0, Fraction(1, 2), Fraction(-1, 2), 1],
                                          "one_plus_rho")
        assert all(r.agrees for r in records)

    def test_three_bracket_formula_differs_with_unit_diagonal(self):
        records = compare_example_formula([2, 3], [Fraction(1, 2)], "unit")
        assert not any(r.agrees for r in records)
        assert all(r.difference != 0 for r in records)

    def test_formula_at_rho_zero(self):
        assert example_trace_formula(100, 0) == 1 + Fraction(2, 100**2)

    def test_guard(self):
        with pytest.raises(DomainError):
            exact_expected_trace(2, 20, 0)
        with pytest.raises(DomainError):
            exact_expected_trace(1, 2, 0, "other")
