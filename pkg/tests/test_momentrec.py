"""Tests for the U/V moment recurrence."""

from fractions import Fraction

import pytest

from core.chorddiag import partition_function
from core.errors import DomainError
from core.exactpoly import catalan, even_catalan, fuss_catalan, narayana_b
from core.momentrec import (
    build_uv,
    moment_bounds_hold,
    moment_polynomial,
    moment_values,
    symmetrized_moments,
)
from core.ncpartition import moments_from_cumulants
from models.diagram import ColoringRule
from models.polynomial import IntPolynomial

P = IntPolynomial


@pytest.mark.unit
class TestBuildUV:
    def test_initial_conditions(self):
        table = build_uv(0)
        assert table.u_polys == (P.one(),)
        assert table.v_polys == (P.one(),)

    def test_first_terms(self):
        table = build_uv(2)
        assert table.u_polys[1] == P(coeffs=[0, 1])
        assert table.v_polys[1] == P.one()
        assert table.u_polys[2] == P(coeffs=[1, 0, 1])

    def test_fourth_moment(self):
        assert build_uv(8).u_polys[8] == P(coeffs=[55, 0, 352, 0, 616, 0, 352, 0, 55])

    def test_negative_kmax_rejected(self):
        with pytest.raises(DomainError):
            build_uv(-1)

    def test_uv_at_one_are_catalan(self):
        table = build_uv(20)
        for k in range(21):
            assert table.u_polys[k].evaluate(1) == catalan(k)
            assert table.v_polys[k].evaluate(1) == catalan(k)


@pytest.mark.unit
class TestMomentPolynomial:
    def test_listed_moments(self, moment_table):
        assert moment_polynomial(moment_table, 0) == P.one()
        assert moment_polynomial(moment_table, 2) == P(coeffs=[3, 0, 8, 0, 3])
        assert moment_polynomial(moment_table, 3) == P(coeffs=[12, 0, 54, 0, 54, 0, 12])

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            moment_polynomial(build_uv(4), 3)

    @pytest.mark.parametrize("k", range(0, 11))
    def test_endpoints_match_catalan_families(self, moment_table, k):
        m = moment_polynomial(moment_table, k)
        assert m.evaluate(0) == fuss_catalan(k)
        assert m.evaluate(1) == even_catalan(k)

    @pytest.mark.parametrize("k", range(0, 13))
    def test_palindromic(self, moment_table, k):
        assert moment_polynomial(moment_table, k).is_palindromic(2 * k)


@pytest.mark.unit
class TestMomentValues:
    def test_rho_zero(self, moment_table):
        assert moment_values(moment_table, 0, 5) == [1, 1, 3, 12, 55, 273]

    def test_rho_one(self, moment_table):
        assert moment_values(moment_table, 1, 4) == [1, 2, 14, 132, 1430]

    def test_integral_float_is_exact(self, moment_table):
        values = moment_values(moment_table, 1.0, 3)
        assert values == [1, 2, 14, 132]
        assert all(isinstance(v, int) for v in values)

    def test_half(self, moment_table):
        assert moment_values(moment_table, 0.5, 1)[1] == pytest.approx(1.25)
        assert moment_values(moment_table, Fraction(1, 2), 1)[1] == Fraction(5, 4)

    def test_rejects_large_rho(self, moment_table):
        with pytest.raises(DomainError):
            moment_values(moment_table, 1.5, 2)

    @pytest.mark.parametrize("rho", [-1, Fraction(-1, 2), 0, Fraction(1, 3), 1])
    def test_bounds(self, moment_table, rho):
        assert moment_bounds_hold(moment_table, rho, 10)


@pytest.mark.integration
class TestCrossModuleOracles:
    @pytest.mark.parametrize("k", range(1, 6))
    def test_matches_planar_diagrams(self, moment_table, k):
        assert moment_polynomial(moment_table, k) == partition_function(2 * k, ColoringRule.U)

    @pytest.mark.parametrize("k", range(1, 7))
    def test_matches_type_b_cumulants(self, moment_table, k):
        n = 2 * k
        cumulants = {}
        for size in range(1, n + 1):
            if size % 2:
                cumulants[size] = P.zero()
            else:
                cumulants[size] = narayana_b(size // 2).substitute_square()
        assert moments_from_cumulants(cumulants, n) == moment_polynomial(moment_table, k)

    def test_symmetrized_moments_shape(self, moment_table):
        moments = symmetrized_moments(moment_table, 5)
        assert len(moments) == 5
        assert moments[0].is_zero() and moments[2].is_zero() and moments[4].is_zero()
        assert moments[1] == moment_polynomial(moment_table, 1)
        assert moments[3] == moment_polynomial(moment_table, 2)
