"""Tests for the partial sorting core.

Oracles: a naive adjacent-swap pass implemented independently of the
vectorized operator, exhaustive binary-array enumeration for the
position formula, and direct sorting for the frontier positions.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sortgof.psort import (
    OnePositions,
    SortLevel,
    as_sample,
    binary_positions_after_k,
    frontier_position,
    frontier_profile,
    partial_bubble_sort,
    swap_pass,
)


def naive_pass(values):
    """Reference pass: literal composition of adjacent swaps S_1 ... S_{n-1}."""
    v = list(values)
    for i in range(len(v) - 1):
        if v[i] > v[i + 1]:
            v[i], v[i + 1] = v[i + 1], v[i]
    return np.array(v, dtype=float)


def naive_k_passes(values, k):
    v = np.asarray(values, dtype=float)
    for _ in range(k):
        v = naive_pass(v)
    return v


class TestSortLevel:
    def test_rejects_bad_beta(self):
        for bad in (0.0, -0.5, 1.0001, 2.0):
            with pytest.raises(ValueError):
                SortLevel(bad)

    def test_iterations_half_up(self):
        # beta*n landing exactly on m + 0.5 rounds up
        assert SortLevel(0.25).iterations(2) == 1   # 0.5 -> 1
        assert SortLevel(0.5).iterations(3) == 2    # 1.5 -> 2
        assert SortLevel(0.75).iterations(2) == 2   # 1.5 -> 2
        assert SortLevel(0.5).iterations(1) == 1    # 0.5 -> 1

    def test_iterations_range(self):
        for beta in (0.05, 0.3, 0.999, 1.0):
            lvl = SortLevel(beta)
            for n in range(1, 40):
                assert 0 <= lvl.iterations(n) <= n

    def test_full_sort_level(self):
        assert SortLevel(1.0).iterations(17) == 17

    def test_zero_iterations_possible(self):
        assert SortLevel(0.05).iterations(2) == 0


class TestAsSample:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            as_sample([])

    def test_rejects_nan_inf(self):
        with pytest.raises(ValueError):
            as_sample([1.0, np.nan])
        with pytest.raises(ValueError):
            as_sample([np.inf, 0.0])


class TestSwapPass:
    def test_hand_traced(self):
        assert swap_pass([3, 1, 2]).tolist() == [1, 2, 3]

    def test_already_sorted(self):
        assert swap_pass([1, 2, 3]).tolist() == [1, 2, 3]

    def test_binary_hand_traced(self):
        assert swap_pass([0, 1, 1, 0, 1]).tolist() == [0, 1, 0, 1, 1]

    def test_singleton(self):
        assert swap_pass([5.0]).tolist() == [5.0]

    def test_max_reaches_last_position(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            a = rng.normal(size=rng.integers(1, 50))
            assert swap_pass(a)[-1] == a.max()

    @given(st.lists(st.integers(min_value=-5, max_value=5), min_size=1, max_size=40))
    def test_matches_naive_pass(self, values):
        # integer values exercise ties heavily
        assert swap_pass(values).tolist() == naive_pass(values).tolist()

    @given(st.lists(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=1, max_size=40))
    def test_matches_naive_pass_floats(self, values):
        assert swap_pass(values).tolist() == naive_pass(values).tolist()


class TestPartialBubbleSort:
    def test_full_sort(self):
        assert partial_bubble_sort([3, 1, 2], SortLevel(1.0)).tolist() == [1, 2, 3]

    def test_one_pass(self):
        assert partial_bubble_sort([4, 3, 2, 1], SortLevel(0.25)).tolist() == [3, 2, 1, 4]

    def test_zero_iterations_identity(self):
        a = [2.0, 7.0]
        assert partial_bubble_sort(a, SortLevel(0.05)).tolist() == a

    @given(st.lists(st.integers(min_value=-8, max_value=8), min_size=1, max_size=30),
           st.floats(min_value=0.01, max_value=1.0))
    def test_permutation_invariance(self, values, beta):
        out = partial_bubble_sort(values, SortLevel(beta))
        assert sorted(out.tolist()) == sorted(float(v) for v in values)

    def test_sorted_when_k_close_to_n(self):
        rng = np.random.default_rng(1)
        for n in (1, 2, 3, 7, 20):
            a = rng.normal(size=n)
            beta = max(0.999 * (n - 1) / n, 0.5) if n > 1 else 1.0
            lvl = SortLevel(1.0 if n == 1 else beta)
            k = lvl.iterations(n)
            if k >= n - 1:
                out = partial_bubble_sort(a, lvl)
                assert np.all(np.diff(out) >= 0)

    def test_matches_naive_iteration(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            n = int(rng.integers(1, 30))
            a = rng.normal(size=n)
            beta = float(rng.uniform(0.05, 1.0))
            k = SortLevel(beta).iterations(n)
            got = partial_bubble_sort(a, SortLevel(beta))
            assert got.tolist() == naive_k_passes(a, k).tolist()

    def test_top_k_sorted_at_tail(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=60)
        lvl = SortLevel(0.3)
        k = lvl.iterations(60)
        out = partial_bubble_sort(a, lvl)
        top = np.sort(a)[-k:]
        assert out[-k:].tolist() == top.tolist()


def ones_positions(binary):
    return np.flatnonzero(np.asarray(binary) == 1) + 1


class TestBinaryPositions:
    def test_spec_cases(self):
        p = OnePositions(5, [2, 3, 5])
        assert binary_positions_after_k(p, 1).positions.tolist() == [2, 4, 5]
        assert binary_positions_after_k(p, 0).positions.tolist() == [2, 3, 5]
        assert binary_positions_after_k(p, 5).positions.tolist() == [3, 4, 5]

    def test_rejects_bad_k(self):
        p = OnePositions(4, [1, 3])
        with pytest.raises(ValueError):
            binary_positions_after_k(p, -1)
        with pytest.raises(ValueError):
            binary_positions_after_k(p, 5)

    def test_validation(self):
        with pytest.raises(ValueError):
            OnePositions(3, [0, 2])
        with pytest.raises(ValueError):
            OnePositions(3, [2, 2])
        with pytest.raises(ValueError):
            OnePositions(3, [1, 4])

    def test_exhaustive_small(self):
        # every binary array up to n=7, every k: formula equals direct sorting
        for n in range(1, 8):
            for bits in range(2 ** n):
                arr = np.array([(bits >> i) & 1 for i in range(n)], dtype=float)
                pos = OnePositions(n, ones_positions(arr))
                for k in range(n + 1):
                    direct = ones_positions(naive_k_passes(arr, k))
                    got = binary_positions_after_k(pos, k).positions
                    assert got.tolist() == direct.tolist(), (arr, k)

    def test_empty_positions(self):
        p = OnePositions(4, [])
        assert binary_positions_after_k(p, 3).positions.tolist() == []


class TestThresholdCommutation:
    @given(st.lists(st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=1, max_size=25),
           st.floats(min_value=-10, max_value=10),
           st.integers(min_value=0, max_value=25))
    @settings(max_examples=60)
    def test_binarize_commutes_with_sorting(self, values, x, k):
        a = np.asarray(values, dtype=float)
        k = min(k, a.size)
        sorted_then_cut = (naive_k_passes(a, k) > x).astype(int)
        cut_then_sorted = naive_k_passes((a > x).astype(float), k).astype(int)
        assert sorted_then_cut.tolist() == cut_then_sorted.tolist()


class TestFrontierPosition:
    def test_hand_case(self):
        assert frontier_position([4, 3, 2, 1], 3.5, SortLevel(0.25)) == 4

    def test_below_min(self):
        a = np.array([2.0, 5.0, 1.0])
        for beta in (0.1, 0.5, 1.0):
            assert frontier_position(a, 0.0, SortLevel(beta)) == 1

    def test_at_or_above_max(self):
        a = np.array([2.0, 5.0, 1.0])
        for beta in (0.1, 0.5, 1.0):
            assert frontier_position(a, 5.0, SortLevel(beta)) == 4
            assert frontier_position(a, 9.0, SortLevel(beta)) == 4

    def direct_frontier(self, a, x, lvl):
        arranged = partial_bubble_sort(a, lvl)
        running = np.maximum.accumulate(arranged)
        return int(np.count_nonzero(running <= x) + 1)

    def test_agrees_with_direct_sort(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            n = int(rng.integers(1, 120))
            a = rng.normal(size=n)
            beta = float(rng.uniform(0.02, 1.0))
            lvl = SortLevel(beta)
            for x in rng.normal(size=8):
                assert frontier_position(a, x, lvl) == self.direct_frontier(a, x, lvl)

    def test_agrees_with_direct_sort_ties(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            n = int(rng.integers(1, 60))
            a = rng.integers(-3, 4, size=n).astype(float)
            beta = float(rng.uniform(0.02, 1.0))
            lvl = SortLevel(beta)
            for x in np.arange(-3.5, 4.0, 0.5):
                assert frontier_position(a, x, lvl) == self.direct_frontier(a, x, lvl)

    def test_monotone_in_x(self):
        rng = np.random.default_rng(6)
        a = rng.normal(size=80)
        lvl = SortLevel(0.3)
        xs = np.sort(rng.normal(size=40))
        fp = [frontier_position(a, x, lvl) for x in xs]
        assert all(f1 <= f2 for f1, f2 in zip(fp, fp[1:]))


class TestFrontierProfile:
    def test_matches_per_value_frontier(self):
        rng = np.random.default_rng(7)
        for _ in range(15):
            n = int(rng.integers(1, 150))
            a = rng.choice([-2.0, -1.0, 0.5, 1.5, 2.5], size=n) if rng.random() < 0.5 \
                else rng.normal(size=n)
            beta = float(rng.uniform(0.02, 1.0))
            lvl = SortLevel(beta)
            values, frontier = frontier_profile(a, lvl)
            assert values.tolist() == np.unique(a).tolist()
            for v, f in zip(values, frontier):
                assert f == frontier_position(a, v, lvl)
