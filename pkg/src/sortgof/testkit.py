"""Hypothesis tests and the continuous distribution registry.

Three tests are provided: the partial-sorting goodness-of-fit test (the
main subject of this package), the classical one-sample Kolmogorov-
Smirnov test, and the Wald-Wolfowitz runs test.  Reports carry the
statistic, the asymptotic p-value, and the decision at level alpha.

Distributions are registered by name with their cdf, inverse cdf, and an
inverse-transform sampler.  Inverse cdfs are refined so that
cdf(inv_cdf(u)) returns u exactly whenever u is attained by the float
cdf; this keeps probability transforms as faithful as double precision
allows (see the registry helpers below).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from scipy.special import ndtr, ndtri

from .curves import BubbleCurve, empirical_bubble_curve, empirical_curve_from_raw, sup_distance
from .psort import SortLevel, as_sample, partial_bubble_sort

__all__ = [
    "DistributionSpec",
    "TestReport",
    "registry_lookup",
    "parse_distribution",
    "ks_statistic",
    "bubble_sort_test",
    "bubble_statistic",
    "ks_test",
    "ww_runs_test",
]


# ---------------------------------------------------------------------------
# distribution registry
# ---------------------------------------------------------------------------

_U_LO = np.nextafter(0.0, 1.0)
_U_HI = np.nextafter(1.0, 0.0)


def _refine_inverse(cdf: Callable, x0: np.ndarray, u: np.ndarray, max_steps: int = 48) -> np.ndarray:
    """Nudge an analytic inverse so that cdf(x) == u exactly when possible.

    Walks x one ulp at a time toward the float preimage of u under the
    (nondecreasing) cdf.  When the cdf staircase skips u entirely the
    nearer neighbour is kept; the residual is then below one ulp of u.
    """
    x = np.array(x0, dtype=float, copy=True)
    c = np.asarray(cdf(x), dtype=float)
    lo = np.where(c < u, x, -np.inf)
    hi = np.where(c > u, x, np.inf)
    active = np.flatnonzero(c != u)
    for _ in range(max_steps):
        if not active.size:
            break
        xa, ua = x[active], u[active]
        ca = c[active]
        up = ca < ua
        xa = np.where(up, np.nextafter(xa, np.inf), np.nextafter(xa, -np.inf))
        ca = np.asarray(cdf(xa), dtype=float)
        x[active], c[active] = xa, ca
        lo[active] = np.where(ca < ua, np.maximum(lo[active], xa), lo[active])
        hi[active] = np.where(ca > ua, np.minimum(hi[active], xa), hi[active])
        overshoot = ((ca > ua) & up) | ((ca < ua) & ~up)
        active = active[(ca != ua) & ~overshoot]
    miss = np.flatnonzero(np.asarray(cdf(x), dtype=float) != u)
    if miss.size:
        xl, xh = lo[miss], hi[miss]
        finite_l = np.isfinite(xl)
        finite_h = np.isfinite(xh)
        cl = np.where(finite_l, np.asarray(cdf(np.where(finite_l, xl, 0.0)), float), np.inf)
        ch = np.where(finite_h, np.asarray(cdf(np.where(finite_h, xh, 0.0)), float), np.inf)
        pick_l = np.abs(cl - u[miss]) <= np.abs(ch - u[miss])
        x[miss] = np.where(pick_l, np.where(finite_l, xl, x[miss]), np.where(finite_h, xh, x[miss]))
    return x


@dataclass(frozen=True)
class DistributionSpec:
    """A named continuous distribution: cdf, inverse cdf, and a sampler.

    The sampler draws via the inverse-cdf construction from uniforms
    produced by the given generator, so sample paths are reproducible
    from the uniform stream alone.
    """

    name: str
    params: dict
    cdf: Callable
    inv_cdf: Callable

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        u = rng.random(size)
        while np.any(u == 0.0):
            zeros = u == 0.0
            u[zeros] = rng.random(int(np.count_nonzero(zeros)))
        return self.inv_cdf(u)

    def __str__(self) -> str:
        inner = ",".join(repr(v) for v in self.params.values())
        return f"{self.name}({inner})"


def _check_u(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0.0) | (u >= 1.0)):
        raise ValueError("inverse cdf requires u in (0, 1)")
    return u


def _make_uniform(a: float, b: float) -> DistributionSpec:
    if not (a < b):
        raise ValueError(f"uniform requires a < b, got a={a}, b={b}")
    span = b - a

    def cdf(x):
        x = np.asarray(x, dtype=float)
        out = np.clip((x - a) / span, 0.0, 1.0)
        return float(out) if x.ndim == 0 else out

    def inv_cdf(u):
        u = _check_u(u)
        x0 = a + u * span
        out = _refine_inverse(cdf, np.atleast_1d(x0), np.atleast_1d(u))
        return float(out[0]) if u.ndim == 0 else out

    return DistributionSpec("uniform", {"a": a, "b": b}, cdf, inv_cdf)


def _make_normal(mu: float, sigma: float) -> DistributionSpec:
    if sigma <= 0:
        raise ValueError(f"normal requires sigma > 0, got {sigma}")

    def cdf(x):
        x = np.asarray(x, dtype=float)
        out = ndtr((x - mu) / sigma)
        return float(out) if x.ndim == 0 else out

    def inv_cdf(u):
        u = _check_u(u)
        x0 = mu + sigma * ndtri(u)
        out = _refine_inverse(cdf, np.atleast_1d(x0), np.atleast_1d(u))
        return float(out[0]) if u.ndim == 0 else out

    return DistributionSpec("normal", {"mu": mu, "sigma": sigma}, cdf, inv_cdf)


def _make_exponential(rate: float) -> DistributionSpec:
    if rate <= 0:
        raise ValueError(f"exponential requires rate > 0, got {rate}")

    def cdf(x):
        x = np.asarray(x, dtype=float)
        out = np.where(x > 0.0, -np.expm1(-rate * np.maximum(x, 0.0)), 0.0)
        return float(out) if x.ndim == 0 else out

    def inv_cdf(u):
        u = _check_u(u)
        x0 = -np.log1p(-u) / rate
        out = _refine_inverse(cdf, np.atleast_1d(x0), np.atleast_1d(u))
        return float(out[0]) if u.ndim == 0 else out

    return DistributionSpec("exponential", {"rate": rate}, cdf, inv_cdf)


def _make_lognormal(mu: float, sigma: float) -> DistributionSpec:
    if sigma <= 0:
        raise ValueError(f"lognormal requires sigma > 0, got {sigma}")

    def cdf(x):
        x = np.asarray(x, dtype=float)
        out = np.where(x > 0.0, ndtr((np.log(np.maximum(x, 1e-300)) - mu) / sigma), 0.0)
        return float(out) if x.ndim == 0 else out

    def inv_cdf(u):
        u = _check_u(u)
        x0 = np.exp(mu + sigma * ndtri(u))
        out = _refine_inverse(cdf, np.atleast_1d(x0), np.atleast_1d(u))
        return float(out[0]) if u.ndim == 0 else out

    return DistributionSpec("lognormal", {"mu": mu, "sigma": sigma}, cdf, inv_cdf)


def _make_empirical_table(path: str) -> DistributionSpec:
    """Piecewise-linear cdf from a two-column CSV of (x, F(x)) knots."""
    rows = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError:
                if rows:
                    raise
                continue  # header line
    if len(rows) < 2:
        raise ValueError(f"empirical table {path} needs at least two knots")
    xs = np.array([r[0] for r in rows])
    ps = np.array([r[1] for r in rows])
    if np.any(np.diff(xs) <= 0) or np.any(np.diff(ps) <= 0):
        raise ValueError(f"empirical table {path} must be strictly increasing in both columns")
    if ps[0] != 0.0 or ps[-1] != 1.0:
        raise ValueError(f"empirical table {path} must span F=0 to F=1")

    def cdf(x):
        x = np.asarray(x, dtype=float)
        out = np.interp(x, xs, ps)
        return float(out) if x.ndim == 0 else out

    def inv_cdf(u):
        u = _check_u(u)
        out = np.interp(u, ps, xs)
        return float(out) if u.ndim == 0 else out

    return DistributionSpec("empirical-table", {"path": path}, cdf, inv_cdf)


_REGISTRY = {
    "uniform": (_make_uniform, ("a", "b")),
    "normal": (_make_normal, ("mu", "sigma")),
    "exponential": (_make_exponential, ("rate",)),
    "lognormal": (_make_lognormal, ("mu", "sigma")),
    "empirical-table": (_make_empirical_table, ("path",)),
}


def registry_lookup(name: str, params: dict) -> DistributionSpec:
    """Build a distribution spec from its registry name and parameters."""
    if name not in _REGISTRY:
        known = ", ".join(sorted(_REGISTRY))
        raise ValueError(f"unknown distribution {name!r}; known: {known}")
    factory, param_names = _REGISTRY[name]
    missing = [p for p in param_names if p not in params]
    extra = [p for p in params if p not in param_names]
    if missing or extra:
        raise ValueError(
            f"{name} takes parameters {param_names}; missing {missing}, unexpected {extra}"
        )
    return factory(*(params[p] for p in param_names))


def parse_distribution(text: str) -> DistributionSpec:
    """Parse CLI-style specs such as 'normal(0,1)' or 'empirical-table(f.csv)'."""
    text = text.strip()
    if "(" not in text or not text.endswith(")"):
        raise ValueError(f"cannot parse distribution {text!r}; expected name(arg,...)")
    name, _, inner = text[:-1].partition("(")
    name = name.strip()
    args = [s.strip() for s in inner.split(",")] if inner.strip() else []
    if name not in _REGISTRY:
        known = ", ".join(sorted(_REGISTRY))
        raise ValueError(f"unknown distribution {name!r}; known: {known}")
    _, param_names = _REGISTRY[name]
    if len(args) != len(param_names):
        raise ValueError(f"{name} takes {len(param_names)} parameters {param_names}")
    values = []
    for pname, arg in zip(param_names, args):
        values.append(arg if pname == "path" else float(arg))
    return registry_lookup(name, dict(zip(param_names, values)))


# ---------------------------------------------------------------------------
# test reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TestReport:
    """Outcome of one hypothesis test."""

    test_name: str
    n: int
    statistic: float
    p_value: float
    alpha: float
    reject: bool
    beta: Optional[float] = None
    seed: Optional[int] = None
    f0: Optional[str] = None

    def __post_init__(self):
        if not (0.0 <= self.p_value <= 1.0):
            raise ValueError(f"p_value must be in [0, 1], got {self.p_value}")
        if self.reject != (self.p_value < self.alpha):
            raise ValueError("reject flag must equal (p_value < alpha)")

    def to_dict(self) -> dict:
        out = {
            "test_name": self.test_name,
            "n": self.n,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "alpha": self.alpha,
            "reject": self.reject,
        }
        if self.beta is not None:
            out["beta"] = self.beta
        if self.seed is not None:
            out["seed"] = self.seed
        if self.f0 is not None:
            out["f0"] = self.f0
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "TestReport":
        required = {"test_name", "n", "statistic", "p_value", "alpha", "reject"}
        optional = {"beta", "seed", "f0"}
        keys = set(d)
        if not required <= keys or not keys <= required | optional:
            raise ValueError(f"malformed report fields: {sorted(keys)}")
        return cls(**d)


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------

def ks_statistic(data, f0: DistributionSpec) -> float:
    """Exact scaled KS statistic sqrt(n) * sup_x |ecdf(x) - F0(x)|.

    Evaluated over order statistics with ties collapsed; both one-sided
    gaps are taken at every distinct value.
    """
    a = as_sample(data)
    n = a.size
    svals = np.sort(a)
    jumps = np.unique(svals)
    counts = np.searchsorted(svals, jumps, side="right")
    hi = counts / n
    lo = np.concatenate(([0.0], hi[:-1]))
    f = np.asarray(f0.cdf(jumps), dtype=float)
    gaps = np.maximum(np.abs(hi - f), np.abs(lo - f))
    return float(math.sqrt(n) * np.max(gaps))


def bubble_statistic(data, f0: DistributionSpec, beta: float,
                     engine: str = "sorted") -> float:
    """Scaled sup-distance between the empirical and limiting curves.

    engine="sorted" runs the partial sort and reads the curve off the
    running maximum; engine="positions" uses the closed-form exceedance
    positions without sorting.  Both produce the identical value.
    """
    a = as_sample(data)
    level = SortLevel(beta)
    if engine == "sorted":
        emp = empirical_bubble_curve(partial_bubble_sort(a, level))
    elif engine == "positions":
        emp = empirical_curve_from_raw(a, level)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    curve = BubbleCurve(f0, beta)
    return float(math.sqrt(a.size) * sup_distance(emp, curve))


def bubble_sort_test(data, f0: DistributionSpec, beta: float, alpha: float,
                     seed: Optional[int] = None, engine: str = "sorted") -> TestReport:
    """Partial-sorting goodness-of-fit test of H0: data iid from f0.

    Sorts partially at level beta, compares the running-maximum ecdf to
    its limit curve, and evaluates the scaled sup-distance against the
    generalized Kolmogorov distribution.  beta = 1 reproduces the KS
    statistic exactly.
    """
    from .gkdist import GkDist

    a = as_sample(data)
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    level = SortLevel(beta)
    if level.iterations(a.size) == 0:
        warnings.warn(
            f"beta={beta} with n={a.size} yields zero sorting passes; "
            "the test degenerates to the running-maximum ecdf of unsorted data",
            stacklevel=2,
        )
    stat = bubble_statistic(a, f0, beta, engine=engine)
    p = GkDist(beta).pvalue(stat)
    return TestReport(
        test_name="bubble",
        n=int(a.size),
        statistic=stat,
        p_value=p,
        alpha=alpha,
        reject=bool(p < alpha),
        beta=beta,
        seed=seed,
        f0=str(f0),
    )


def ks_test(data, f0: DistributionSpec, alpha: float,
            seed: Optional[int] = None) -> TestReport:
    """Classical one-sample KS test with the asymptotic p-value."""
    from .gkdist import kolmogorov_cdf

    a = as_sample(data)
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    stat = ks_statistic(a, f0)
    p = float(1.0 - kolmogorov_cdf(stat))
    return TestReport(
        test_name="ks",
        n=int(a.size),
        statistic=stat,
        p_value=p,
        alpha=alpha,
        reject=bool(p < alpha),
        seed=seed,
        f0=str(f0),
    )


def ww_runs_test(data, alpha: float, seed: Optional[int] = None) -> TestReport:
    """Wald-Wolfowitz runs test of independence around the sample median.

    Observations are dichotomized against the sample median (midpoint of
    the central order statistics for even n); points equal to the median
    are dropped.  The two-sided p-value uses the normal approximation
    with mean 1 + 2 n+ n- / n and variance
    2 n+ n- (2 n+ n- - n) / (n^2 (n - 1)).  Recommended for n >= 20;
    for smaller n the approximation is rough.
    """
    a = as_sample(data)
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if a.size < 2:
        raise ValueError("runs test requires n >= 2")
    med = float(np.median(a))
    signs = a[a != med] > med
    n_pos = int(np.count_nonzero(signs))
    n_neg = int(signs.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise ValueError("runs test is undefined with all data on one side of the median")
    n = n_pos + n_neg
    runs = int(1 + np.count_nonzero(signs[1:] != signs[:-1]))
    two_pn = 2.0 * n_pos * n_neg
    mean = 1.0 + two_pn / n
    var = two_pn * (two_pn - n) / (n * n * (n - 1.0))
    if var <= 0.0:
        raise ValueError("degenerate runs variance; need more data on both sides of the median")
    z = (runs - mean) / math.sqrt(var)
    p = float(2.0 * ndtr(-abs(z)))
    return TestReport(
        test_name="ww-runs",
        n=int(a.size),
        statistic=float(runs),
        p_value=p,
        alpha=alpha,
        reject=bool(p < alpha),
        seed=seed,
    )
