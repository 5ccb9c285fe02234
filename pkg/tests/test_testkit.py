"""Tests for the hypothesis tests and the distribution registry."""

import json
import math

import numpy as np
import pytest
from scipy.special import ndtr

from sortgof.testkit import (
    bubble_sort_test,
    bubble_statistic,
    ks_statistic,
    ks_test,
    parse_distribution,
    registry_lookup,
    ww_runs_test,
)
from sortgof.testkit import TestReport as Report

UNIF01 = registry_lookup("uniform", {"a": 0.0, "b": 1.0})
NORMAL = registry_lookup("normal", {"mu": 0.0, "sigma": 1.0})
EXPO = registry_lookup("exponential", {"rate": 1.0})


class TestRegistry:
    def test_uniform_cdf(self):
        assert UNIF01.cdf(0.5) == 0.5
        assert UNIF01.cdf(-1.0) == 0.0
        assert UNIF01.cdf(2.0) == 1.0

    def test_normal_inverse_at_half(self):
        assert NORMAL.inv_cdf(0.5) == 0.0

    def test_round_trip_within_contract(self):
        grid = np.linspace(0.001, 0.999, 499)
        for dist in (UNIF01, NORMAL, EXPO,
                     registry_lookup("lognormal", {"mu": 0.3, "sigma": 0.8}),
                     registry_lookup("uniform", {"a": -2.5, "b": 4.0}),
                     registry_lookup("exponential", {"rate": 2.7}),
                     registry_lookup("normal", {"mu": 1.0, "sigma": 3.0})):
            back = dist.cdf(dist.inv_cdf(grid))
            assert np.max(np.abs(back - grid)) < 1e-10, dist.name

    def test_exponential_round_trip_point(self):
        assert EXPO.cdf(EXPO.inv_cdf(0.3)) == pytest.approx(0.3, abs=1e-10)

    def test_exact_preimage_recovery_rate(self):
        # the refined inverses recover the driving uniform bitwise on the
        # large majority of points; the misses are cdf staircase skips
        rng = np.random.default_rng(0)
        u = rng.random(20_000)
        for dist, floor in ((UNIF01, 1.0), (NORMAL, 0.8), (EXPO, 0.9)):
            back = dist.cdf(dist.inv_cdf(u))
            assert np.mean(back == u) >= floor
            assert np.max(np.abs(back - u)) < 2e-16

    def test_sampler_matches_inverse_construction(self):
        d = registry_lookup("normal", {"mu": 2.0, "sigma": 0.5})
        draws = d.sample(np.random.default_rng(42), 1000)
        again = d.sample(np.random.default_rng(42), 1000)
        np.testing.assert_array_equal(draws, again)
        u = np.random.default_rng(42).random(1000)
        np.testing.assert_array_equal(draws, d.inv_cdf(u))

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            registry_lookup("cauchy", {"loc": 0.0})

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            registry_lookup("normal", {"mu": 0.0, "sigma": 0.0})
        with pytest.raises(ValueError):
            registry_lookup("uniform", {"a": 1.0, "b": 1.0})
        with pytest.raises(ValueError):
            registry_lookup("exponential", {"rate": -1.0})
        with pytest.raises(ValueError):
            registry_lookup("normal", {"mu": 0.0})

    def test_inverse_domain(self):
        for dist in (UNIF01, NORMAL, EXPO):
            with pytest.raises(ValueError):
                dist.inv_cdf(0.0)
            with pytest.raises(ValueError):
                dist.inv_cdf(1.0)

    def test_empirical_table(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("x,F\n0.0,0.0\n1.0,0.25\n2.0,0.75\n4.0,1.0\n")
        d = registry_lookup("empirical-table", {"path": str(path)})
        assert d.cdf(1.0) == 0.25
        assert d.cdf(3.0) == pytest.approx(0.875)
        grid = np.linspace(0.01, 0.99, 99)
        np.testing.assert_allclose(d.cdf(d.inv_cdf(grid)), grid, atol=1e-12)

    def test_empirical_table_validation(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0.0,0.0\n1.0,0.5\n")
        with pytest.raises(ValueError):
            registry_lookup("empirical-table", {"path": str(path)})

    def test_parse_distribution(self):
        d = parse_distribution("normal(0, 1)")
        assert d.name == "normal" and d.params == {"mu": 0.0, "sigma": 1.0}
        assert parse_distribution("uniform(-1,1)").params == {"a": -1.0, "b": 1.0}
        with pytest.raises(ValueError):
            parse_distribution("normal")
        with pytest.raises(ValueError):
            parse_distribution("normal(0)")
        with pytest.raises(ValueError):
            parse_distribution("weibull(1,2)")


class TestKsStatistic:
    def test_single_point_at_median(self):
        assert ks_statistic([0.5], UNIF01) == pytest.approx(0.5, abs=1e-15)

    def test_half_spaced_quantiles(self):
        n = 25
        data = UNIF01.inv_cdf((np.arange(1, n + 1) - 0.5) / n)
        assert ks_statistic(data, UNIF01) == pytest.approx(math.sqrt(n) * 0.5 / n, abs=1e-12)

    def test_constant_sample(self):
        n, c = 30, 0.3
        expected = math.sqrt(n) * max(UNIF01.cdf(c), 1 - UNIF01.cdf(c))
        assert ks_statistic([c] * n, UNIF01) == pytest.approx(expected, abs=1e-12)

    def test_brute_force_grid(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            n = int(rng.integers(1, 40))
            data = rng.random(n)
            exact = ks_statistic(data, UNIF01)
            grid = np.linspace(-0.01, 1.01, 50001)
            ecdf = np.searchsorted(np.sort(data), grid, side="right") / n
            approx = math.sqrt(n) * np.max(np.abs(ecdf - np.clip(grid, 0, 1)))
            assert exact >= approx - 1e-9
            assert exact <= approx + 1e-3


class TestBubbleSortTest:
    def test_beta_one_equals_ks_exactly(self):
        rng = np.random.default_rng(2)
        for _ in range(300):
            n = int(rng.integers(1, 120))
            data = rng.normal(size=n)
            assert bubble_statistic(data, NORMAL, 1.0) == ks_statistic(data, NORMAL)

    def test_constant_sequence_beta_one(self):
        n, c = 50, 1.2
        rep = bubble_sort_test([c] * n, NORMAL, 1.0, 0.05)
        expected = math.sqrt(n) * max(NORMAL.cdf(c), 1 - NORMAL.cdf(c))
        assert rep.statistic == pytest.approx(expected, abs=1e-12)

    def test_report_fields(self):
        rng = np.random.default_rng(3)
        rep = bubble_sort_test(rng.random(80), UNIF01, 0.25, 0.1, seed=5)
        assert rep.test_name == "bubble"
        assert rep.n == 80
        assert rep.beta == 0.25
        assert rep.seed == 5
        assert rep.f0 == "uniform(0.0,1.0)"
        assert 0.0 <= rep.p_value <= 1.0
        assert rep.reject == (rep.p_value < 0.1)

    def test_worked_example_fixture(self):
        data = np.array([float(s) for s in
                         open("tests/data/illustration_uniform_n100.csv").read().splitlines()[1:]])
        rep = bubble_sort_test(data, UNIF01, 0.25, 0.1)
        assert rep.statistic == pytest.approx(1.598, abs=0.001)
        assert rep.p_value == pytest.approx(0.701, abs=0.005)
        assert not rep.reject

    def test_warns_on_zero_iterations(self):
        with pytest.warns(UserWarning):
            bubble_sort_test([0.5, 0.7], UNIF01, 0.05, 0.1)

    def test_propagates_nonfinite(self):
        with pytest.raises(ValueError):
            bubble_sort_test([0.1, np.nan], UNIF01, 0.5, 0.1)

    def test_rejects_bad_alpha(self):
        with pytest.raises(ValueError):
            bubble_sort_test([0.5], UNIF01, 0.5, 0.0)

    def test_engines_identical(self):
        rng = np.random.default_rng(4)
        for _ in range(40):
            n = int(rng.integers(1, 150))
            data = rng.normal(size=n)
            for beta in (0.2, 0.6, 1.0):
                assert (bubble_statistic(data, NORMAL, beta, engine="sorted")
                        == bubble_statistic(data, NORMAL, beta, engine="positions"))

    def test_distribution_free_within_float_limits(self):
        # same uniform drivers pushed through each inverse cdf; identical
        # up to the one-ulp staircase losses of the float transforms
        rng = np.random.default_rng(5)
        exact = 0
        total = 0
        for _ in range(60):
            u = rng.random(150)
            for beta in (0.25, 0.5, 1.0):
                base = bubble_statistic(u, UNIF01, beta)
                for dist in (NORMAL, EXPO):
                    moved = bubble_statistic(dist.inv_cdf(u), dist, beta)
                    assert moved == pytest.approx(base, abs=1e-12)
                    exact += moved == base
                    total += 1
        assert exact / total > 0.5  # most trials are bit-identical

    def test_ks_comparison_report(self):
        rng = np.random.default_rng(6)
        data = rng.random(60)
        rep = ks_test(data, UNIF01, 0.1)
        assert rep.test_name == "ks"
        assert rep.statistic == ks_statistic(data, UNIF01)


class TestWwRunsTest:
    def test_alternating_sequence(self):
        data = [1.0, -1.0] * 10  # strictly alternating around 0
        rep = ww_runs_test(data, 0.05)
        assert rep.statistic == 20
        assert rep.p_value < 0.001
        assert rep.reject

    def test_sorted_sequence(self):
        rep = ww_runs_test(np.arange(20.0), 0.05)
        assert rep.statistic == 2
        assert rep.p_value < 0.001

    def test_two_point_degenerate(self):
        with pytest.raises(ValueError):
            ww_runs_test([1.0, 2.0], 0.1)

    def test_all_one_side(self):
        with pytest.raises(ValueError):
            ww_runs_test([1.0, 1.0, 1.0], 0.1)

    def test_moment_formulas(self):
        # compare the normal z against hand-computed mean and variance
        data = [3.0, -1.0, 2.0, -2.0, 5.0, -3.0, 4.0, -4.0, 1.5, -0.5] * 2
        rep = ww_runs_test(data, 0.1)
        signs = np.array(data) > np.median(data)
        n_pos = int(signs.sum())
        n_neg = len(data) - n_pos
        n = n_pos + n_neg
        runs = 1 + int(np.sum(signs[1:] != signs[:-1]))
        mean = 1 + 2 * n_pos * n_neg / n
        var = 2 * n_pos * n_neg * (2 * n_pos * n_neg - n) / (n * n * (n - 1))
        z = (runs - mean) / math.sqrt(var)
        assert rep.p_value == pytest.approx(2 * ndtr(-abs(z)), abs=1e-12)

    def test_null_calibration(self):
        rng = np.random.default_rng(7)
        rejections = sum(ww_runs_test(rng.normal(size=100), 0.1).reject for _ in range(2000))
        assert 0.07 < rejections / 2000 < 0.13

    def test_median_points_dropped_even_runs(self):
        # odd n: the median observation itself is discarded
        rep = ww_runs_test([1.0, 5.0, 2.0, 4.0, 3.0], 0.5)
        assert rep.n == 5


class TestReportSerialization:
    def test_json_round_trip(self):
        rep = Report(test_name="bubble", n=10, statistic=1.2, p_value=0.4,
                         alpha=0.1, reject=False, beta=0.25, seed=3, f0="uniform(0.0,1.0)")
        back = Report.from_dict(json.loads(rep.to_json()))
        assert back == rep

    def test_optional_fields_omitted(self):
        rep = Report(test_name="ww-runs", n=10, statistic=5.0, p_value=0.2,
                         alpha=0.1, reject=False)
        d = json.loads(rep.to_json())
        assert set(d) == {"test_name", "n", "statistic", "p_value", "alpha", "reject"}

    def test_reject_consistency_enforced(self):
        with pytest.raises(ValueError):
            Report(test_name="bubble", n=5, statistic=1.0, p_value=0.5,
                       alpha=0.1, reject=True)

    def test_pvalue_range_enforced(self):
        with pytest.raises(ValueError):
            Report(test_name="bubble", n=5, statistic=1.0, p_value=1.5,
                       alpha=0.1, reject=False)

    def test_from_dict_rejects_unknown_fields(self):
        with pytest.raises(ValueError):
            Report.from_dict({"test_name": "x", "n": 1, "statistic": 0.0,
                                  "p_value": 0.5, "alpha": 0.1, "reject": False,
                                  "extra": 1})
