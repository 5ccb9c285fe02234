"""Numerics of the generalized Kolmogorov distribution.

The distribution of the scaled sup-distance statistic at sorting level
beta is built from two generalized Brownian bridges sharing a Gaussian
terminal value Z:

    P(D <= x) = 2 * int_0^{sqrt(beta/(1-beta)) x}
                    Psi(x; (1-beta)/beta, sqrt((1-beta)/beta) z)
                  * Psi(x; beta,          sqrt(beta (1-beta)) z)
                  * phi(z) dz,

where Psi(x; T, a) = P(sup_{[0,T]} |W| <= x) for a bridge W pinned from
0 to a over [0, T]:

    Psi(x; T, a) = sum_{k in Z} (-1)^k exp(-2 k x (k x - a) / T),  x > |a|,
    Psi(x; T, a) = 0,                                              x <= |a|.

At beta = 1 the distribution degenerates to the classical Kolmogorov law

    P(D <= x) = 1 - 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).

The cdf is evaluated by fixed-order Gauss-Legendre quadrature on the
finite support of the integrand; quantiles by bisection.  Quantile
tables can be cached on disk, keyed by the numeric configuration.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.polynomial.legendre import leggauss

__all__ = [
    "psi",
    "kolmogorov_cdf",
    "GkDist",
    "tabulate",
    "cache_dir",
]

DEFAULT_SERIES_TOL = 1e-12
DEFAULT_QUAD_NODES = 256
DEFAULT_BETA_ONE_THRESHOLD = 1.0 - 1e-9

# the Gaussian weight beyond this z contributes < 1e-18, far below the
# quadrature tolerance, so the support interval is clipped here
_Z_CLIP = 9.0

_MAX_SERIES_TERMS = 100_000

_CACHE_ENV_VAR = "SORTGOF_CACHE_DIR"


def psi(x, T: float, a, series_tol: float = DEFAULT_SERIES_TOL):
    """P(sup_{[0,T]} |W| <= x) for a bridge W from (0,0) to (T,a).

    Alternating series over k in Z, summed in symmetric +-k pairs until
    both pair members fall below ``series_tol``; 0 when x <= |a|.
    Symmetric in the sign of a by construction.  Vectorized over x and a.
    """
    if T <= 0:
        raise ValueError(f"time horizon T must be positive, got {T}")
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    if np.any(x < 0):
        raise ValueError("psi requires x >= 0")
    x_b, a_b = np.broadcast_arrays(x, a)
    out = np.ones(x_b.shape)
    flat_x = x_b.ravel()
    flat_a = a_b.ravel()
    flat_out = out.ravel()
    live = np.flatnonzero(flat_x > np.abs(flat_a))
    dead = flat_x <= np.abs(flat_a)
    k = 1
    while live.size:
        xk = k * flat_x[live]
        av = flat_a[live]
        t_plus = np.exp(-2.0 * xk * (xk - av) / T)
        t_minus = np.exp(-2.0 * xk * (xk + av) / T)
        flat_out[live] += (-1.0) ** k * (t_plus + t_minus)
        live = live[(t_plus > series_tol) | (t_minus > series_tol)]
        k += 1
        if k > _MAX_SERIES_TERMS:
            raise RuntimeError("bridge crossing series failed to converge")
    np.clip(flat_out, 0.0, 1.0, out=flat_out)
    flat_out[dead] = 0.0
    result = flat_out.reshape(x_b.shape)
    return float(result) if (x.ndim == 0 and a.ndim == 0) else result


def kolmogorov_cdf(x, series_tol: float = DEFAULT_SERIES_TOL):
    """Classical Kolmogorov cdf 1 - 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2)."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("kolmogorov_cdf requires x >= 0")
    flat_x = np.atleast_1d(x).ravel()
    out = np.ones(flat_x.shape)
    live = np.flatnonzero(flat_x > 0)
    k = 1
    while live.size:
        term = 2.0 * np.exp(-2.0 * k * k * flat_x[live] ** 2)
        out[live] += term if k % 2 == 0 else -term
        live = live[term > series_tol]
        k += 1
        if k > _MAX_SERIES_TERMS:
            raise RuntimeError("Kolmogorov series failed to converge")
    out[flat_x == 0.0] = 0.0
    np.clip(out, 0.0, 1.0, out=out)
    return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)


@dataclass(frozen=True)
class GkDist:
    """Generalized Kolmogorov distribution at sorting level beta.

    For beta above ``beta_one_threshold`` evaluation routes to the
    classical Kolmogorov series, avoiding the blow-up of the support
    bound as beta -> 1.
    """

    beta: float
    series_tol: float = DEFAULT_SERIES_TOL
    quad_nodes: int = DEFAULT_QUAD_NODES
    beta_one_threshold: float = DEFAULT_BETA_ONE_THRESHOLD

    def __post_init__(self):
        if not (0.0 < self.beta <= 1.0):
            raise ValueError(f"beta must be in (0, 1], got {self.beta}")
        if self.quad_nodes < 8:
            raise ValueError("quad_nodes must be at least 8")

    @property
    def _kolmogorov_route(self) -> bool:
        return self.beta > self.beta_one_threshold

    def cdf(self, x):
        """P(D <= x); vectorized over x."""
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise ValueError("cdf requires x >= 0")
        if self._kolmogorov_route:
            return kolmogorov_cdf(x, self.series_tol)
        beta = self.beta
        flat = np.atleast_1d(x).ravel()
        out = np.zeros(flat.shape)
        pos = np.flatnonzero(flat > 0)
        nodes, weights = leggauss(self.quad_nodes)
        t1 = (1.0 - beta) / beta
        s1 = math.sqrt(t1)
        s2 = math.sqrt(beta * (1.0 - beta))
        # chunk to bound the (n_x, nodes) temporaries
        chunk = max(1, 4_194_304 // self.quad_nodes)
        for start in range(0, pos.size, chunk):
            idx = pos[start : start + chunk]
            xv = flat[idx][:, None]
            upper = np.minimum(math.sqrt(beta / (1.0 - beta)) * xv, _Z_CLIP)
            z = 0.5 * upper * (nodes + 1.0)
            w = 0.5 * upper * weights
            integrand = (
                psi(xv, t1, s1 * z, self.series_tol)
                * psi(xv, beta, s2 * z, self.series_tol)
                * np.exp(-0.5 * z * z)
                / math.sqrt(2.0 * math.pi)
            )
            out[idx] = 2.0 * np.sum(w * integrand, axis=1)
        # below ~1e-12 the integral is dominated by series roundoff; the
        # true value there is far smaller still, so flush to zero
        out[out < 1e-12] = 0.0
        np.clip(out, 0.0, 1.0, out=out)
        return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)

    def pvalue(self, stat: float) -> float:
        """Upper-tail probability P(D > stat)."""
        if stat < 0:
            raise ValueError("statistic must be >= 0")
        return float(1.0 - self.cdf(stat))

    def quantile(self, p: float, tol: float = 1e-8) -> float:
        """x with |cdf(x) - p| <= tol, by bracketing and bisection on [0, 10].

        The default bracket is widened (up to [0, 40]) in the rare cases
        where the requested p lies beyond cdf(10); this can occur for
        small beta, where the long-horizon bridge stretches the tail.
        """
        if not (0.0 < p < 1.0):
            raise ValueError(f"p must be in (0, 1), got {p}")
        lo, hi = 0.0, 10.0
        while self.cdf(hi) < p:
            hi *= 2.0
            if hi > 40.0:
                raise RuntimeError(f"quantile bracket failed for p={p}")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            c = self.cdf(mid)
            if abs(c - p) <= tol or (hi - lo) < 1e-13:
                return mid
            if c < p:
                lo = mid
            else:
                hi = mid
        raise RuntimeError("quantile bisection failed to converge")


def cache_dir() -> Path:
    """Directory for quantile table caches.

    Taken from the SORTGOF_CACHE_DIR environment variable, defaulting to
    ~/.cache/sortgof.
    """
    env = os.environ.get(_CACHE_ENV_VAR)
    return Path(env) if env else Path.home() / ".cache" / "sortgof"


def _cache_path(beta: float, series_tol: float, quad_nodes: int) -> Path:
    return cache_dir() / f"gk_quantiles_beta{beta!r}_tol{series_tol!r}_nodes{quad_nodes}.csv"


def _config_header(series_tol: float, quad_nodes: int) -> str:
    return f"# series_tol={series_tol!r}, quad_nodes={quad_nodes}"


def _load_cache(path: Path, series_tol: float, quad_nodes: int) -> dict[float, float]:
    if not path.exists():
        return {}
    lines = path.read_text().splitlines()
    if not lines or lines[0] != _config_header(series_tol, quad_nodes):
        return {}
    rows = {}
    for line in lines[1:]:
        if not line or line.startswith("beta,"):
            continue
        _, p, q = line.split(",")
        rows[float(p)] = float(q)
    return rows


def _store_cache(path: Path, beta: float, rows: dict[float, float],
                 series_tol: float, quad_nodes: int) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = _config_header(series_tol, quad_nodes) + "\nbeta,p,quantile\n"
    text += "".join(f"{float(beta)!r},{float(p)!r},{float(rows[p])!r}\n" for p in sorted(rows))
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def tabulate(betas, probs, series_tol: float = DEFAULT_SERIES_TOL,
             quad_nodes: int = DEFAULT_QUAD_NODES, use_cache: bool = True):
    """Quantile table over a beta grid, as a list of (beta, p, quantile).

    Deterministic for a fixed numeric configuration.  Results are cached
    on disk per beta (atomic rewrite; concurrent readers see a complete
    file).  I/O problems surface with the offending path attached.
    """
    betas = [float(b) for b in betas]
    probs = [float(p) for p in probs]
    for b in betas:
        if not (0.0 < b <= 1.0):
            raise ValueError(f"beta must be in (0, 1], got {b}")
    for p in probs:
        if not (0.0 < p < 1.0):
            raise ValueError(f"p must be in (0, 1), got {p}")
    rows = []
    for b in betas:
        dist = GkDist(b, series_tol=series_tol, quad_nodes=quad_nodes)
        cached: dict[float, float] = {}
        path = _cache_path(b, series_tol, quad_nodes)
        if use_cache:
            try:
                cached = _load_cache(path, series_tol, quad_nodes)
            except OSError as exc:
                raise OSError(f"cannot read quantile cache {path}: {exc}") from exc
        missing = [p for p in probs if p not in cached]
        for p in missing:
            cached[p] = dist.quantile(p)
        if use_cache and missing:
            try:
                _store_cache(path, b, cached, series_tol, quad_nodes)
            except OSError as exc:
                raise OSError(f"cannot write quantile cache {path}: {exc}") from exc
        rows.extend((b, p, cached[p]) for p in probs)
    return rows


def table_to_csv(rows, path_or_file, series_tol: float = DEFAULT_SERIES_TOL,
                 quad_nodes: int = DEFAULT_QUAD_NODES) -> None:
    """Serialize tabulate() rows with the config recorded in a comment."""
    text = _config_header(series_tol, quad_nodes) + "\nbeta,p,quantile\n"
    text += "".join(f"{float(b)!r},{float(p)!r},{float(q)!r}\n" for b, p, q in rows)
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w") as f:
            f.write(text)
