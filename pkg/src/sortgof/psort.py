"""Partial bubble sorting and the position arithmetic behind it.

One sorting pass walks the array left to right and swaps adjacent
out-of-order pairs.  Applying ``k`` passes pushes the top ``k`` values,
fully sorted, to the tail of the array while the head stays only
partially ordered.  The number of passes is tied to a sorting level
``beta`` in (0, 1] via ``k = round(beta * n)`` (half-up).

Besides the sorting operator itself, this module carries the exact
position formulas for 0/1 arrays and the closed-form frontier position
(index of the first value exceeding a threshold in the partially sorted
array) computed without sorting.  The two routes are independent and are
tested against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = [
    "SortLevel",
    "OnePositions",
    "as_sample",
    "swap_pass",
    "partial_bubble_sort",
    "binary_positions_after_k",
    "frontier_position",
    "frontier_profile",
]


def as_sample(values) -> np.ndarray:
    """Validate and convert input data to a float64 sample array.

    Requires length >= 1 and all-finite values.
    """
    a = np.asarray(values, dtype=float)
    if a.ndim != 1:
        a = a.ravel()
    if a.size < 1:
        raise ValueError("sample must contain at least one observation")
    if not np.isfinite(a).all():
        raise ValueError("sample must be finite (no NaN or inf)")
    return a


@dataclass(frozen=True)
class SortLevel:
    """Sorting level beta in (0, 1]; beta = 1 sorts completely."""

    beta: float

    def __post_init__(self):
        if not (0.0 < self.beta <= 1.0):
            raise ValueError(f"beta must be in (0, 1], got {self.beta}")

    def iterations(self, n: int) -> int:
        """Number of sorting passes for a sample of size n.

        Nearest integer to beta*n, ties rounding up, so beta*n = m + 0.5
        gives m + 1.  Always within 0..n.
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        k = int(math.floor(self.beta * n + 0.5))
        return min(k, n)


def swap_pass(a) -> np.ndarray:
    """One left-to-right pass of adjacent compare-and-swap.

    Equal neighbours never swap.  After the pass the running prefix
    maximum has been carried to the right: position i (0-based, i < n-1)
    holds min(max(a[:i+1]), a[i+1]) and the last position holds max(a).
    """
    a = as_sample(a)
    if a.size == 1:
        return a.copy()
    m = np.maximum.accumulate(a)
    out = np.empty_like(a)
    out[:-1] = np.minimum(m[:-1], a[1:])
    out[-1] = m[-1]
    return out


def partial_bubble_sort(a, level: SortLevel) -> np.ndarray:
    """Apply ``level.iterations(n)`` sorting passes to the sample.

    The result is a permutation of the input with the top k values in
    sorted order at the tail.  k = 0 returns a copy unchanged.
    """
    a = as_sample(a)
    k = level.iterations(a.size)
    out = a.copy()
    for _ in range(k):
        m = np.maximum.accumulate(out)
        out[:-1] = np.minimum(m[:-1], out[1:])
        out[-1] = m[-1]
    return out


@dataclass(frozen=True)
class OnePositions:
    """Positions (1-based, strictly increasing) of the 1's in a 0/1 array."""

    n: int
    positions: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.int64)
        object.__setattr__(self, "positions", pos)
        if self.n < 1:
            raise ValueError("array length n must be >= 1")
        if pos.size:
            if pos[0] < 1 or pos[-1] > self.n:
                raise ValueError("positions must lie in 1..n")
            if np.any(np.diff(pos) <= 0):
                raise ValueError("positions must be strictly increasing")


def binary_positions_after_k(p: OnePositions, k: int) -> OnePositions:
    """Positions of the 1's after k sorting passes of the 0/1 array.

    With m ones at positions I_1 < ... < I_m, the i-th one ends up at
    I_{i+k} - k while k <= m - i, and at n - (m - i) afterwards.
    """
    if k < 0 or k > p.n:
        raise ValueError(f"k must be in 0..n={p.n}, got {k}")
    pos = p.positions
    m = pos.size
    if m == 0:
        return OnePositions(p.n, pos.copy())
    i = np.arange(1, m + 1)
    moved = np.where(k <= m - i, pos[np.minimum(i + k, m) - 1] - k, p.n - (m - i))
    return OnePositions(p.n, moved.astype(np.int64))


def frontier_position(a, x: float, level: SortLevel) -> int:
    """1-based index of the first value exceeding x after partial sorting.

    Computed without sorting: with H values above x at raw positions
    I_1 < I_2 < ..., the answer is I_{1+k} - k when H > k and n - H + 1
    otherwise (n + 1 when nothing exceeds x).
    """
    a = as_sample(a)
    n = a.size
    k = level.iterations(n)
    exceed = np.flatnonzero(a > x)
    h = exceed.size
    if h <= k:
        return int(n - h + 1)
    return int(exceed[k] + 1 - k)


@njit(cache=True)
def _frontier_desc(pos_desc, group_sizes, k, n):
    """Frontier positions at each distinct value, largest value first.

    pos_desc: original 1-based positions ordered by value descending,
    ties grouped; group_sizes: run lengths of the distinct values in the
    same order.  For each distinct value the query uses only the strictly
    larger values, i.e. the groups already inserted.  A max-heap of the
    k+1 smallest inserted positions yields I_{1+k} in O(log k) per step.
    """
    m = group_sizes.size
    out = np.empty(m, np.int64)
    heap = np.empty(k + 1, np.int64)
    filled = 0
    r = 0
    idx = 0
    for g in range(m):
        if r <= k:
            out[g] = n - r + 1
        else:
            out[g] = heap[0] - k
        for _ in range(group_sizes[g]):
            v = pos_desc[idx]
            idx += 1
            if filled < k + 1:
                heap[filled] = v
                filled += 1
                j = filled - 1
                while j > 0 and heap[(j - 1) // 2] < heap[j]:
                    heap[(j - 1) // 2], heap[j] = heap[j], heap[(j - 1) // 2]
                    j = (j - 1) // 2
            elif v < heap[0]:
                heap[0] = v
                j = 0
                while True:
                    left = 2 * j + 1
                    right = 2 * j + 2
                    big = j
                    if left < filled and heap[left] > heap[big]:
                        big = left
                    if right < filled and heap[right] > heap[big]:
                        big = right
                    if big == j:
                        break
                    heap[j], heap[big] = heap[big], heap[j]
                    j = big
        r += group_sizes[g]
    return out


def frontier_profile(a, level: SortLevel) -> tuple[np.ndarray, np.ndarray]:
    """Frontier positions at every distinct data value, in one pass.

    Returns (values, positions): distinct sample values ascending and the
    1-based first-exceedance index of each value in the partially sorted
    array.  Equivalent to calling frontier_position per value but runs in
    O(n log n) total.
    """
    a = as_sample(a)
    n = a.size
    k = level.iterations(n)
    order = np.argsort(a, kind="stable")
    sorted_vals = a[order]
    # run lengths of distinct values, ascending
    starts = np.flatnonzero(np.concatenate(([True], sorted_vals[1:] != sorted_vals[:-1])))
    sizes_asc = np.diff(np.concatenate((starts, [n])))
    pos_desc = (order[::-1] + 1).astype(np.int64)
    f_desc = _frontier_desc(pos_desc, sizes_asc[::-1].astype(np.int64), k, n)
    return sorted_vals[starts], f_desc[::-1]
