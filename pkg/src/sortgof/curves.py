"""Step functions and the limiting curve of the partially sorted frontier.

The empirical side is the ecdf of the running maximum of a partially
sorted sample, a right-continuous step function starting at 0.  Its
deterministic limit under the null, for a continuous F0 and sorting
level beta, is

    B0(x) = beta * F0(x) / (1 - F0(x))   for F0(x) < 1 - beta,
    B0(x) = F0(x)                        otherwise,

equivalently min(beta / (1 - F0(x)), 1) - min(beta, 1 - F0(x)).  The
switch point is xstar = F0^{-1}(1 - beta).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .psort import SortLevel, as_sample, frontier_profile

__all__ = [
    "StepFunction",
    "BubbleCurve",
    "empirical_bubble_curve",
    "empirical_curve_from_raw",
    "sup_distance",
]


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous nondecreasing step function.

    ``jumps`` are strictly increasing locations, ``levels`` the values
    from each jump onward, ``base`` the value before the first jump.
    """

    jumps: np.ndarray
    levels: np.ndarray
    base: float = 0.0

    def __post_init__(self):
        jumps = np.asarray(self.jumps, dtype=float)
        levels = np.asarray(self.levels, dtype=float)
        object.__setattr__(self, "jumps", jumps)
        object.__setattr__(self, "levels", levels)
        if jumps.size != levels.size or jumps.size == 0:
            raise ValueError("jumps and levels must be equal-length, non-empty")
        if np.any(np.diff(jumps) <= 0):
            raise ValueError("jump locations must be strictly increasing")
        if np.any(np.diff(levels) <= 0) or levels[0] <= self.base:
            raise ValueError("levels must be strictly increasing from base")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.jumps, x, side="right")
        padded = np.concatenate(([self.base], self.levels))
        out = padded[idx]
        return float(out) if x.ndim == 0 else out

    def to_csv(self, path_or_file) -> None:
        """Write two columns (location, level), one row per jump."""
        text = "location,level\n" + "".join(
            f"{float(v)!r},{float(l)!r}\n" for v, l in zip(self.jumps, self.levels)
        )
        if hasattr(path_or_file, "write"):
            path_or_file.write(text)
        else:
            with open(path_or_file, "w") as f:
                f.write(text)

    @classmethod
    def from_csv(cls, path_or_file) -> "StepFunction":
        f = path_or_file if hasattr(path_or_file, "read") else open(path_or_file)
        try:
            rows = [line.strip().split(",") for line in f if line.strip()]
        finally:
            if f is not path_or_file:
                f.close()
        if rows and rows[0][0] == "location":
            rows = rows[1:]
        vals = np.array([[float(a), float(b)] for a, b in rows])
        return cls(jumps=vals[:, 0], levels=vals[:, 1])


def empirical_bubble_curve(sorted_sample) -> StepFunction:
    """Ecdf of the running maximum of an already partially sorted sample."""
    a = as_sample(sorted_sample)
    n = a.size
    running = np.maximum.accumulate(a)
    jumps = np.unique(running)
    counts = np.searchsorted(running, jumps, side="right")
    return StepFunction(jumps=jumps, levels=counts / n)


def empirical_curve_from_raw(a, level: SortLevel) -> StepFunction:
    """Empirical bubble sort curve straight from raw data, no sorting.

    Uses the closed-form first-exceedance positions; exactly equal to
    ``empirical_bubble_curve(partial_bubble_sort(a, level))`` but O(n log n).
    """
    values, frontier = frontier_profile(a, level)
    n = as_sample(a).size
    levels = (frontier - 1) / n
    keep = np.concatenate(([levels[0] > 0], np.diff(levels) > 0))
    return StepFunction(jumps=values[keep], levels=levels[keep])


@dataclass(frozen=True)
class BubbleCurve:
    """The limiting curve for a given null distribution and sorting level.

    ``f0`` must expose ``cdf`` and ``inv_cdf`` (see the distribution
    registry).  ``xstar`` is F0^{-1}(1 - beta), the regime switch; below
    it the curve is the scaled odds beta*F/(1-F), above it the cdf itself.
    """

    f0: object
    beta: float
    xstar: float = field(init=False)

    def __post_init__(self):
        if not (0.0 < self.beta <= 1.0):
            raise ValueError(f"beta must be in (0, 1], got {self.beta}")
        xstar = -np.inf if self.beta == 1.0 else float(self.f0.inv_cdf(1.0 - self.beta))
        object.__setattr__(self, "xstar", xstar)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        f = np.asarray(self.f0.cdf(x), dtype=float)
        odds_branch = f < 1.0 - self.beta
        denom = np.where(odds_branch, 1.0 - f, 1.0)
        out = np.where(odds_branch, self.beta * f / denom, f)
        return float(out) if x.ndim == 0 else out

    def min_form(self, x):
        """Equivalent min-based expression of the curve (cross-check path)."""
        x = np.asarray(x, dtype=float)
        f = np.asarray(self.f0.cdf(x), dtype=float)
        p = 1.0 - f
        with np.errstate(divide="ignore"):
            first = np.where(p > 0.0, np.minimum(self.beta / np.where(p > 0, p, 1.0), 1.0), 1.0)
        out = first - np.minimum(self.beta, p)
        return float(out) if x.ndim == 0 else out

    def recover_cdf(self, x):
        """Invert the odds branch: F0(x) = B(x) / (beta + B(x)) for x < xstar."""
        x = np.asarray(x, dtype=float)
        if np.any(x >= self.xstar):
            raise ValueError(f"recover_cdf requires x < xstar = {self.xstar}")
        b = self(x)
        out = b / (self.beta + b)
        return float(out) if x.ndim == 0 else out


def sup_distance(empirical: StepFunction, curve: BubbleCurve) -> float:
    """sup_x |empirical(x) - curve(x)|, computed exactly.

    The curve is continuous and nondecreasing, the empirical side is a
    step function, so the supremum is attained at a jump from one side or
    the other; it suffices to compare both one-sided empirical values
    against the curve at every jump.
    """
    b = curve(empirical.jumps)
    hi = empirical.levels
    lo = np.concatenate(([empirical.base], empirical.levels[:-1]))
    gaps = np.maximum(np.abs(hi - b), np.abs(lo - b))
    return float(np.max(gaps))
