"""
Tests for the neighborhood coefficients, the h / h* surfaces and their minima.

Run with: pytest tests/test_bounds.py -v
"""

import itertools
import math

import numpy as np
import pytest

from bounds import (
    bound_report,
    coeff_new,
    coeff_old,
    corollary_min,
    even_k_min,
    example_family,
    h_old,
    h_old_diagonal_min,
    h_star,
    h_star_gradient,
    h_star_polynomial,
    is_4perfect,
    is_perfect,
    log_ratio_peak,
    numeric_min_h_old,
    numeric_min_h_star,
    odd_k_stationary,
    profile_bounds,
    profile_sweep,
    stationarity_residuals,
    tian_xu_closing_bound,
    tian_xu_point,
)
from conftest import cycle
from errors import (
    CorollaryInapplicableError,
    DegenerateProfileError,
    DisconnectedGraphError,
    NotBipartiteError,
    PreconditionError,
    SingularSystemError,
)
from graph_core import BipartiteProfile, Graph
from utils import get_tolerances

SYMMETRIC_K5 = BipartiteProfile(5, 5, 2, 2, 5)
SYMMETRIC_K4 = BipartiteProfile(5, 5, 2, 2, 4)
UNBALANCED_K5 = BipartiteProfile(6, 4, 2, 3, 5)
SINGULAR = BipartiteProfile(3, 3, 1, 1, 1)


class TestCoefficients:
    """Tests for coeff_new() and coeff_old()."""

    @pytest.mark.parametrize("prof,expected", [
        (BipartiteProfile(10, 10, 2, 2, 5), (2, 4, 4, 2)),
        (BipartiteProfile(10, 10, 2, 2, 4), (2, 3, 3, 2)),
        (BipartiteProfile(10, 10, 3, 2, 8), (4, 7, 5, 6)),
        (BipartiteProfile(6, 4, 2, 3, 5), (3, 4, 6, 2)),
        (BipartiteProfile(4, 8, 3, 2, 5), (2, 6, 4, 3)),
        (BipartiteProfile(4, 8, 3, 2, 4), (2, 4, 3, 3)),
    ])
    def test_new_values(self, prof, expected):
        assert coeff_new(prof).as_tuple() == expected

    @pytest.mark.parametrize("d1,d2", [(1, 1), (2, 5), (7, 3)])
    def test_new_k1_is_degrees(self, d1, d2):
        assert coeff_new(BipartiteProfile(10, 10, d1, d2, 1)).as_tuple() == (0, d1, d2, 0)

    @pytest.mark.parametrize("k", range(1, 7))
    def test_old_k_up_to_6_has_no_same_side_term(self, k):
        c = coeff_old(BipartiteProfile(10, 10, 2, 2, k))
        assert c.as_tuple() == (0, 2, 2, 0)
        assert c.m_ceil == 1

    def test_old_k13(self):
        assert coeff_old(BipartiteProfile(10, 10, 2, 3, 13)).as_tuple() == (8, 8, 11, 6)

    @pytest.mark.parametrize("k", [2, 4, 6, 8, 10, 12])
    @pytest.mark.parametrize("d1,d2", [(2, 2), (2, 5), (4, 3)])
    def test_even_k_identity(self, k, d1, d2):
        c = coeff_new(BipartiteProfile(10, 10, d1, d2, k))
        assert c.a11 + 1 == c.a21
        assert c.a22 + 1 == c.a12

    @pytest.mark.parametrize("k", range(1, 30))
    def test_new_dominates_old(self, k):
        prof = BipartiteProfile(20, 20, 3, 2, k)
        new, old = coeff_new(prof).as_tuple(), coeff_old(prof).as_tuple()
        assert all(a >= b for a, b in zip(new, old))

    def test_to_dict(self):
        d = coeff_new(SYMMETRIC_K5).to_dict()
        assert d["flavor"] == "new"
        assert (d["a11"], d["a12"], d["a21"], d["a22"]) == (2, 4, 4, 2)


class TestSurfaces:
    """Tests for h_star(), h_old() and h_star_polynomial()."""

    def test_origin_is_n(self):
        assert h_star(SYMMETRIC_K5, 0.0, 0.0) == pytest.approx(10.0)
        assert h_old(SYMMETRIC_K5, 0.0, 0.0) == pytest.approx(10.0)

    def test_unit_corner(self):
        assert h_star(SYMMETRIC_K5, 1.0, 1.0) == pytest.approx(10 + 10 * math.exp(-7))

    def test_symmetric_minimizer_value(self):
        p = math.log(7) / 7
        assert h_star(SYMMETRIC_K5, p, p) == pytest.approx(4.20845, abs=1e-5)

    def test_old_symmetric_value(self):
        p = math.log(3) / 3
        assert h_old(SYMMETRIC_K5, p, p) == pytest.approx(6.99537, abs=1e-5)

    def test_vectorized(self):
        grid = np.linspace(0.0, 1.0, 5)
        values = h_star(SYMMETRIC_K5, grid[:, None], grid[None, :])
        assert values.shape == (5, 5)
        assert values[2, 3] == pytest.approx(h_star(SYMMETRIC_K5, grid[2], grid[3]))

    def test_polynomial_never_exceeds_h_star(self):
        grid = np.linspace(0.0, 1.0, 21)
        p1, p2 = np.meshgrid(grid, grid, indexing="ij")
        assert np.all(h_star_polynomial(UNBALANCED_K5, p1, p2) <= h_star(UNBALANCED_K5, p1, p2) + 1e-12)

    def test_polynomial_equal_at_origin(self):
        assert h_star_polynomial(UNBALANCED_K5, 0.0, 0.0) == pytest.approx(h_star(UNBALANCED_K5, 0.0, 0.0))

    def test_h_star_below_h(self):
        grid = np.linspace(0.0, 1.0, 17)
        p1, p2 = np.meshgrid(grid, grid, indexing="ij")
        prof = BipartiteProfile(20, 30, 3, 2, 13)
        assert np.all(h_star(prof, p1, p2) <= h_old(prof, p1, p2) + 1e-12)

    def test_gradient_matches_finite_differences(self):
        step = 1e-6
        p1, p2 = 0.3, 0.4
        g1, g2 = h_star_gradient(UNBALANCED_K5, p1, p2)
        fd1 = (h_star(UNBALANCED_K5, p1 + step, p2) - h_star(UNBALANCED_K5, p1 - step, p2)) / (2 * step)
        fd2 = (h_star(UNBALANCED_K5, p1, p2 + step) - h_star(UNBALANCED_K5, p1, p2 - step)) / (2 * step)
        assert g1 == pytest.approx(fd1, abs=1e-6)
        assert g2 == pytest.approx(fd2, abs=1e-6)


class TestNumericMinimizer:
    """Tests for numeric_min_h_star() and numeric_min_h_old()."""

    def test_symmetric_odd(self):
        result = numeric_min_h_star(SYMMETRIC_K5)
        assert result.value == pytest.approx(10 * (1 + math.log(7)) / 7, rel=1e-6)
        assert result.p1 == pytest.approx(math.log(7) / 7, abs=1e-4)
        assert result.p2 == pytest.approx(math.log(7) / 7, abs=1e-4)

    def test_symmetric_even(self):
        assert numeric_min_h_star(SYMMETRIC_K4).value == pytest.approx(4.65293, abs=1e-5)

    def test_old_symmetric(self):
        assert numeric_min_h_old(SYMMETRIC_K5).value == pytest.approx(6.99537, abs=1e-5)

    def test_not_above_corners(self):
        value = numeric_min_h_star(UNBALANCED_K5).value
        for p1, p2 in [(0, 0), (0, 1), (1, 0), (1, 1)]:
            assert value <= h_star(UNBALANCED_K5, p1, p2)

    def test_rejects_nonpositive_tol(self):
        with pytest.raises(PreconditionError):
            numeric_min_h_star(SYMMETRIC_K5, tol=0.0)

    def test_deterministic(self):
        assert numeric_min_h_star(UNBALANCED_K5) == numeric_min_h_star(UNBALANCED_K5)

    def test_diagonal_min_symmetric_matches_closing_bound(self):
        p, value = h_old_diagonal_min(SYMMETRIC_K5)
        assert p == pytest.approx(math.log(3) / 3, abs=1e-6)
        assert value == pytest.approx(tian_xu_closing_bound(10, 2, 1), rel=1e-9)


class TestOldClosedForms:
    """Tests for is_perfect(), tian_xu_point() and tian_xu_closing_bound()."""

    @pytest.mark.parametrize("k", range(1, 25))
    def test_symmetric_is_perfect(self, k):
        assert is_perfect(BipartiteProfile(8, 8, 3, 3, k))

    def test_degree_one_is_not_perfect(self):
        assert not is_perfect(BipartiteProfile(5, 5, 1, 1, 3))

    def test_lopsided_is_not_perfect(self):
        assert not is_perfect(BipartiteProfile(3, 100, 2, 2, 1))

    def test_symmetric_point(self):
        point = tian_xu_point(SYMMETRIC_K5)
        assert point.u == pytest.approx(1 / 3)
        assert point.v == pytest.approx(1 / 3)
        assert point.p1 == pytest.approx(math.log(3) / 3)
        assert point.valid and not point.clamped
        assert point.h_value == pytest.approx(6.99537, abs=1e-5)

    def test_degenerate(self):
        with pytest.raises(DegenerateProfileError):
            tian_xu_point(BipartiteProfile(5, 5, 1, 1, 3))

    def test_invalid_point_is_clamped(self):
        point = tian_xu_point(BipartiteProfile(3, 100, 2, 2, 1))
        assert point.u == pytest.approx(197 / 9)
        assert point.v < 0
        assert not point.valid
        assert point.clamped
        assert point.to_dict()["p1"] is None
        assert math.isfinite(point.h_value)

    def test_closing_bound_values(self):
        assert tian_xu_closing_bound(10, 2, 1) == pytest.approx(6.99537, abs=1e-5)
        assert tian_xu_closing_bound(10, 1, 1) == pytest.approx(10 * (1 + math.log(2)) / 2)

    def test_closing_bound_rejects_small_c(self):
        with pytest.raises(PreconditionError):
            tian_xu_closing_bound(10, 2, 0)


class TestEvenK:
    """Tests for even_k_min()."""

    def test_symmetric_case_i(self):
        result = even_k_min(SYMMETRIC_K4)
        assert result.case_tag == "i"
        assert result.T == pytest.approx(6.0)
        assert result.value == pytest.approx(4.65293, abs=1e-5)
        assert result.argmin["kind"] == "segment"

    def test_case_i_endpoints_under_log_ratio_peak(self):
        result = even_k_min(SYMMETRIC_K4)
        (p1, _), (_, p2) = result.argmin["endpoints"]
        assert p1 == pytest.approx(math.log(6) / 3)
        assert p2 == pytest.approx(math.log(6) / 3)
        assert result.argmin["endpoint_caps"] == pytest.approx([2 / math.e, 2 / math.e])
        assert p1 < 2 / math.e
        assert result.argmin["inside_square"] is True

    def test_case_ii(self):
        result = even_k_min(BipartiteProfile(4, 8, 3, 2, 4))
        assert result.case_tag == "ii"
        assert result.T == pytest.approx(9.0)
        assert result.value == pytest.approx(4.26296, abs=1e-5)
        assert result.argmin == {"kind": "point", "p1": pytest.approx(math.log(9) / 3), "p2": 0.0}

    def test_case_iii_mirrors_case_ii(self):
        result = even_k_min(BipartiteProfile(8, 4, 2, 3, 4))
        assert result.case_tag == "iii"
        assert result.value == pytest.approx(4.26296, abs=1e-5)
        assert result.argmin["p1"] == 0.0

    def test_case_none(self):
        result = even_k_min(BipartiteProfile(2, 100, 2, 2, 2))
        assert result.case_tag == "none"
        assert result.value is None
        assert result.T == pytest.approx(102.0)

    def test_closed_form_matches_surface_at_argmin(self):
        prof = BipartiteProfile(4, 8, 3, 2, 4)
        result = even_k_min(prof)
        assert h_star(prof, result.argmin["p1"], 0.0) == pytest.approx(result.value, rel=1e-12)

    def test_odd_k_rejected(self):
        with pytest.raises(PreconditionError):
            even_k_min(SYMMETRIC_K5)

    def test_degree_one_rejected(self):
        with pytest.raises(PreconditionError):
            even_k_min(BipartiteProfile(5, 5, 1, 2, 4))

    def test_log_ratio_peak(self):
        assert log_ratio_peak(1.0) == (1.0, 1.0, False)
        x, f, below = log_ratio_peak(0.0)
        assert x == pytest.approx(math.e)
        assert f == pytest.approx(1 / math.e)
        assert below is True
        x, f, _ = log_ratio_peak(math.log(7))
        assert f == pytest.approx(7 / math.e)


class TestOddK:
    """Tests for odd_k_stationary(), is_4perfect() and corollary_min()."""

    def test_symmetric_stationary_point(self):
        point = odd_k_stationary(SYMMETRIC_K5)
        assert point.e1 == pytest.approx(1 / 7, abs=1e-12)
        assert point.e2 == pytest.approx(1 / 7, abs=1e-12)
        assert point.p1_star == pytest.approx(math.log(7) / 7, abs=1e-12)
        assert point.p2_star == pytest.approx(math.log(7) / 7, abs=1e-12)
        assert point.determinant == -7
        assert point.feasible

    def test_gradient_vanishes_at_stationary_point(self):
        point = odd_k_stationary(SYMMETRIC_K5)
        g1, g2 = h_star_gradient(SYMMETRIC_K5, point.p1_star, point.p2_star)
        assert abs(g1) <= 1e-8
        assert abs(g2) <= 1e-8

    def test_stationarity_sweep(self):
        tol = get_tolerances()
        feasible = 0
        for n1, n2 in itertools.product((5, 8, 13), repeat=2):
            for d1, d2 in itertools.product(range(2, 5), repeat=2):
                for k in (1, 3, 5, 7, 9):
                    prof = BipartiteProfile(n1, n2, d1, d2, k)
                    try:
                        point = odd_k_stationary(prof)
                    except SingularSystemError:
                        continue
                    if not point.feasible:
                        continue
                    feasible += 1
                    analytic, central = stationarity_residuals(
                        prof, point.p1_star, point.p2_star, tol["finite_difference_step"]
                    )
                    assert max(abs(g) for g in analytic) <= tol["stationarity"], prof
                    assert max(abs(g) for g in central) <= tol["stationarity"] * prof.n, prof
        assert feasible > 0

    def test_probabilities_solve_second_system(self):
        prof = BipartiteProfile(10, 11, 3, 3, 5)
        point = odd_k_stationary(prof)
        c = coeff_new(prof)
        assert (c.a11 + 1) * point.p1_star + c.a12 * point.p2_star == pytest.approx(-math.log(point.e2), abs=1e-9)
        assert c.a21 * point.p1_star + (c.a22 + 1) * point.p2_star == pytest.approx(-math.log(point.e1), abs=1e-9)

    def test_residuals_away_from_stationary_point(self):
        analytic, central = stationarity_residuals(UNBALANCED_K5, 0.3, 0.4)
        assert analytic == pytest.approx(central, abs=1e-6)
        assert max(abs(g) for g in analytic) > 1e-3

    def test_unbalanced_point_outside_square(self):
        point = odd_k_stationary(UNBALANCED_K5)
        assert point.e1 == pytest.approx(1 / 6)
        assert point.e2 == pytest.approx(1 / 12)
        assert point.p1_star == pytest.approx(-0.024, abs=1e-3)
        assert not point.feasible
        assert is_4perfect(UNBALANCED_K5)

    def test_corollary_inapplicable(self):
        with pytest.raises(CorollaryInapplicableError):
            corollary_min(UNBALANCED_K5)

    def test_zero_exponential_is_not_4perfect(self):
        assert not is_4perfect(BipartiteProfile(4, 8, 3, 2, 5))

    def test_singular(self):
        with pytest.raises(SingularSystemError):
            odd_k_stationary(SINGULAR)
        with pytest.raises(SingularSystemError):
            is_4perfect(SINGULAR)

    def test_even_k_rejected(self):
        with pytest.raises(PreconditionError):
            odd_k_stationary(SYMMETRIC_K4)

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_symmetric_family_is_4perfect(self, m):
        assert is_4perfect(BipartiteProfile(20, 20, 3, 3, 4 * m + 1))

    def test_corollary_symmetric(self):
        assert corollary_min(SYMMETRIC_K5) == pytest.approx(10 * (1 + math.log(7)) / 7, abs=1e-9)
        assert corollary_min(SYMMETRIC_K5) == pytest.approx(4.20845, abs=1e-5)

    def test_corollary_matches_numeric(self):
        prof = BipartiteProfile(10, 11, 3, 3, 5)
        assert corollary_min(prof) == pytest.approx(numeric_min_h_star(prof).value, rel=1e-6)


class TestExampleFamily:
    def test_delta2_m1(self):
        fam = example_family(2, 1)
        assert fam.k == 5
        assert (fam.a_same, fam.a_cross, fam.c) == (2, 4, 7)
        assert fam.e == pytest.approx(1 / 7)
        assert fam.old_c == 3
        assert fam.refines

    def test_matches_corollary(self):
        fam = example_family(3, 2)
        prof = BipartiteProfile(10, 10, 3, 3, fam.k)
        assert corollary_min(prof) == pytest.approx(20 * fam.per_vertex_min, rel=1e-9)

    def test_rejects_degree_one(self):
        with pytest.raises(PreconditionError):
            example_family(1, 1)


class TestProfileBounds:
    """Tests for profile_bounds()."""

    def test_odd_k_uses_corollary(self):
        lb = profile_bounds(SYMMETRIC_K5)
        assert lb.method_tag == "odd_k_corollary"
        assert lb.four_perfect is True
        assert lb.new_min == pytest.approx(4.20845, abs=1e-5)
        assert lb.old_min == pytest.approx(6.99537, abs=1e-5)
        assert lb.notes == []

    def test_even_k_case_tag(self):
        assert profile_bounds(BipartiteProfile(4, 8, 3, 2, 4)).method_tag == "even_k_case_ii"

    def test_even_k_none_falls_back(self):
        lb = profile_bounds(BipartiteProfile(2, 100, 2, 2, 2))
        assert lb.method_tag == "even_k_none"
        assert lb.closed_form is None
        assert lb.new_min == lb.numeric_new.value

    def test_singular_profile_is_numeric(self):
        lb = profile_bounds(SINGULAR)
        assert lb.method_tag == "numeric"
        assert lb.notes

    def test_inapplicable_corollary_noted(self):
        lb = profile_bounds(UNBALANCED_K5)
        assert lb.method_tag == "numeric"
        assert lb.closed_form is None
        assert any("outside" in note for note in lb.notes)

    def test_to_dict_is_plain(self):
        d = profile_bounds(SYMMETRIC_K4).to_dict()
        assert d["method_tag"] == "even_k_case_i"
        assert d["stationary"] is None
        assert d["even_k"]["case"] == "i"


class TestBoundReport:
    """Tests for bound_report()."""

    def test_cycle_12_k5(self, c12):
        report = bound_report(c12, 5, exact_budget=100_000)
        assert report.new_min == pytest.approx(5.0501, abs=1e-4)
        assert report.old_min == pytest.approx(8.3944, abs=1e-4)
        assert report.exact_gamma == 2
        assert report.radius == 6
        assert report.perfect
        assert report.four_perfect
        assert report.method_tags == {"canonical": "odd_k_corollary", "swapped": "odd_k_corollary"}

    def test_bounds_dominate_exact(self, c12):
        for k in range(1, 6):
            report = bound_report(c12, k, exact_budget=100_000)
            assert report.exact_gamma <= report.new_min + 1e-9
            assert report.new_min <= report.old_min + 1e-9

    def test_complete_bipartite_even(self, k34):
        report = bound_report(k34, 2, exact_budget=1000)
        assert report.profile == BipartiteProfile(3, 4, 4, 3, 2)
        assert report.method_tags["swapped"] == "even_k_case_i"
        assert report.new_min == pytest.approx(1 + math.log(7), rel=1e-6)
        assert report.exact_gamma == 1

    def test_exact_skipped_without_budget(self, c12):
        assert bound_report(c12, 3).exact_gamma is None

    def test_labelings_share_minimum(self, k34):
        report = bound_report(k34, 3)
        first, second = report.labelings
        assert first.numeric_new.value == pytest.approx(second.numeric_new.value, rel=1e-7)

    def test_odd_cycle_rejected(self):
        with pytest.raises(NotBipartiteError):
            bound_report(cycle(5), 1)

    def test_disconnected_rejected(self):
        with pytest.raises(DisconnectedGraphError):
            bound_report(Graph.from_edges(4, [(0, 1), (2, 3)]), 1)

    def test_to_dict(self, c12):
        d = bound_report(c12, 5).to_dict()
        assert d["profile"] == {"n1": 6, "n2": 6, "delta1": 2, "delta2": 2, "k": 5}
        assert len(d["labelings"]) == 2


class TestProfileSweep:
    def test_rows_in_parameter_order(self):
        rows = profile_sweep(6, 6, 2, 3)
        assert len(rows) == 12
        assert [(r["delta1"], r["delta2"], r["k"]) for r in rows[:4]] == [(1, 1, 1), (1, 1, 2), (1, 1, 3), (1, 2, 1)]
        assert all(r["new_min"] <= r["old_min"] + 1e-9 for r in rows)

    def test_delta_capped_by_opposite_part(self):
        rows = profile_sweep(2, 3, 5, 1)
        assert max(r["delta1"] for r in rows) == 3
        assert max(r["delta2"] for r in rows) == 2


@pytest.mark.slow
class TestClosedFormOracle:
    """Every applicable closed form agrees with the numeric minimizer."""

    def test_closed_forms_match_numeric(self):
        checked = 0
        for n1 in (5, 8, 13, 20):
            for n2 in (5, 8, 13, 20):
                for d1 in (2, 3, 4):
                    for d2 in (2, 3, 4):
                        for k in range(2, 6):
                            prof = BipartiteProfile(n1, n2, d1, d2, k)
                            if k % 2 == 0:
                                closed = even_k_min(prof).value
                            elif odd_k_stationary(prof).feasible:
                                closed = corollary_min(prof)
                            else:
                                closed = None
                            if closed is None:
                                continue
                            numeric = numeric_min_h_star(prof).value
                            assert closed == pytest.approx(numeric, rel=1e-6), prof
                            checked += 1
        assert checked > 200
