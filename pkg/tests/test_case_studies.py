import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from analogia.case_studies import (
    C1_TOLERANCES,
    DEFAULT_GRID,
    ONE_THEN_PAIRS,
    PAIRS,
    PI_OVER_FOUR,
    PI_SQUARED_OVER_SIX,
    CorroborationReport,
    GroupingScheme,
    SeriesId,
    basel_limit_check,
    coefficient_identity_residual,
    cos_via_product,
    finite_regroup_control,
    leibniz_corroboration,
    partial_sum,
    polya_c1_checks,
    product_grid_error,
    random_scheme,
    regroup_series,
    run_euler,
    run_grandi,
    sin_via_product,
    sin_via_series,
    sine_product_factor,
    term,
)


def test_constants_agree_with_math():
    assert PI_SQUARED_OVER_SIX == pytest.approx(math.pi**2 / 6, abs=1e-15)
    assert PI_OVER_FOUR == pytest.approx(math.pi / 4, abs=1e-15)


class TestTerms:
    def test_first_terms(self):
        assert [term("basel", k) for k in (1, 2, 3)] == [1, 0.25, 1 / 9]
        assert [term("leibniz", k) for k in (1, 2, 3)] == [1, -1 / 3, 0.2]
        assert [term("grandi", k) for k in (1, 2, 3)] == [1, -1, 1]

    def test_fsum_oracle(self):
        for series in SeriesId:
            n = 500
            assert partial_sum(series, n) == pytest.approx(math.fsum(term(series, k) for k in range(1, n + 1)), abs=1e-14)


class TestBasel:
    def test_n2(self):
        b = basel_limit_check(2)
        assert b.partial_sum == 1.25
        assert b.residual == pytest.approx(0.3949340668, abs=1e-9)
        assert b.within_tail_bounds

    def test_n10000(self):
        b = basel_limit_check(10_000)
        assert 1 / 10_001 < b.residual < 1 / 10_000

    def test_increasing_and_bounded(self):
        sums = [partial_sum("basel", n) for n in range(1, 300)]
        assert all(a < b for a, b in zip(sums, sums[1:]))
        assert sums[-1] < PI_SQUARED_OVER_SIX

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            basel_limit_check(1)


class TestSine:
    def test_series_zero(self):
        assert sin_via_series(0.0, 10) == 0.0

    def test_series_half_pi(self):
        assert abs(sin_via_series(math.pi / 2, 20) - 1.0) <= 1e-15

    @given(st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False), st.integers(1, 40))
    def test_series_odd(self, x, n):
        assert sin_via_series(-x, n) == -sin_via_series(x, n)

    def test_product_root(self):
        for K in (1, 5, 100):
            assert sin_via_product(math.pi, K) == 0.0

    def test_product_at_zero(self):
        assert sin_via_product(0.0, 10) == 0.0
        assert sine_product_factor(0.0, 10) == 1.0

    def test_product_half_pi(self):
        assert abs(sin_via_product(math.pi / 2, 100_000) - 1.0) <= 1e-5

    def test_cosine_product(self):
        assert cos_via_product(0.0, 10) == 1.0
        assert cos_via_product(0.3, 20_000) == pytest.approx(math.cos(0.3), abs=1e-4)

    def test_grid_error_nonincreasing(self):
        errs = [product_grid_error(K, DEFAULT_GRID) for K in (10, 20, 40, 80, 160, 320)]
        assert all(b <= a for a, b in zip(errs, errs[1:]))


class TestCoefficient:
    def test_k1(self):
        assert coefficient_identity_residual(1) == pytest.approx(1 / 6 - 1 / math.pi**2, abs=1e-15)

    def test_strictly_decreasing(self):
        r = [coefficient_identity_residual(K) for K in range(1, 101)]
        assert all(b < a for a, b in zip(r, r[1:]))

    def test_tail_bound(self):
        assert coefficient_identity_residual(10_000) <= 1.1 / (math.pi**2 * 10_000)

    def test_matches_basel(self):
        K = 5000
        expected = (PI_SQUARED_OVER_SIX - partial_sum("basel", K)) / math.pi**2
        assert coefficient_identity_residual(K) == pytest.approx(expected, rel=1e-6)


class TestPolya:
    def test_default(self):
        reports = polya_c1_checks(10_000, DEFAULT_GRID, C1_TOLERANCES)
        assert len(reports) == 3
        assert reports[0].residual == 0.0
        assert all(r.passed for r in reports)
        assert reports[1].residual < 1e-3 and reports[2].residual < 1e-3

    def test_small_k_fails_shift_check(self):
        reports = polya_c1_checks(1, DEFAULT_GRID, C1_TOLERANCES)
        assert reports[0].passed
        assert not reports[1].passed


class TestLeibniz:
    def test_straddle(self):
        for k in range(1, 50):
            assert partial_sum("leibniz", 2 * k) < PI_OVER_FOUR < partial_sum("leibniz", 2 * k + 1)

    def test_single_term(self):
        r = leibniz_corroboration(1, iterations=0)
        assert r.value == 1.0
        assert r.residual == pytest.approx(0.214602, abs=1e-6)

    def test_accelerated(self):
        assert leibniz_corroboration(10_000, 4).residual < 1e-8

    def test_acceleration_helps(self):
        assert leibniz_corroboration(100, 1).residual < leibniz_corroboration(100, 0).residual

    def test_too_short(self):
        with pytest.raises(ValueError):
            leibniz_corroboration(2, 4)


class TestRegroup:
    def test_pairs(self):
        res = regroup_series("grandi", PAIRS, 1000)
        assert set(res.block_sums) == {0.0}
        assert res.stabilized and res.value == 0.0

    def test_one_then_pairs(self):
        res = regroup_series("grandi", ONE_THEN_PAIRS, 1000)
        assert res.block_sums[:3] == (1.0, 0.0, 0.0)
        assert res.stabilized and res.value == 1.0

    def test_ungrouped_grandi_oscillates(self):
        res = regroup_series("grandi", GroupingScheme(repeat=1), 100)
        assert res.verdict == "divergent"

    def test_basel_block_boundaries(self):
        scheme = GroupingScheme(prefix=(3, 1), repeat=4)
        res = regroup_series("basel", scheme, 50)
        boundaries = [sum(scheme.lengths(b + 1)) for b in range(50)]
        for n, p in zip(boundaries, res.partial_sums):
            assert p == pytest.approx(math.fsum(1 / k**2 for k in range(1, n + 1)), abs=1e-14)

    def test_bad_blocks(self):
        with pytest.raises(ValueError):
            regroup_series("grandi", PAIRS, 0)


class TestFiniteControl:
    C = [1, -1, 1, -1, 1]

    @pytest.mark.parametrize("lengths", [(2, 2, 1), (1, 2, 2), (5,)])
    def test_two_bracketings(self, lengths):
        assert finite_regroup_control(self.C, lengths) == (1, 1)

    def test_scheme_object(self):
        assert finite_regroup_control(self.C, ONE_THEN_PAIRS) == (1, 1)

    def test_mismatch(self):
        with pytest.raises(ValueError, match="covers"):
            finite_regroup_control(self.C, (2, 2))

    @settings(max_examples=300)
    @given(
        st.lists(st.fractions(max_denominator=50) | st.integers(-100, 100).map(Fraction), min_size=1, max_size=30),
        st.randoms(use_true_random=False),
    )
    def test_invariance(self, terms, rng):
        grouped, plain = finite_regroup_control(terms, random_scheme(len(terms), rng))
        assert grouped == plain == sum(terms, Fraction(0))

    def test_random_scheme_covers(self):
        rng = random.Random(3)
        for n in range(1, 20):
            assert sum(random_scheme(n, rng)) == n


class TestBundledRuns:
    def test_euler(self):
        reports = run_euler()
        assert len(reports) == 8
        assert all(r.passed for r in reports)

    def test_euler_small_k_fails(self):
        assert not all(r.passed for r in run_euler(K=10))

    def test_grandi(self):
        reports = run_grandi()
        assert all(r.passed for r in reports)

    def test_report_roundtrip(self):
        for r in run_euler(K=100):
            assert CorroborationReport.from_dict(r.to_dict()) == r
