"""Monte Carlo laboratory.

Simulation experiments around the partial-sorting test: null-distribution
convergence of the statistic, covariance checks of the limiting Gaussian
fluctuation process, a direct bridge-simulation oracle for the limit
distribution, and the two power studies (hidden-column sorting detection
and service-time-dependent queue scheduling).

Reproducibility: every repetition r derives its own generator as
``default_rng([base_seed, ...stream ids..., r])``, so results are
identical for a fixed seed no matter how repetitions are chunked or how
many worker processes run them.
"""

from __future__ import annotations

import math
from bisect import insort
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import ndtri

from .gkdist import GkDist
from .psort import SortLevel, _frontier_desc
from .testkit import DistributionSpec, registry_lookup, ww_runs_test

__all__ = [
    "SimConfig",
    "QueueConfig",
    "NullDistribution",
    "CovarianceCheck",
    "BridgeOracle",
    "PowerResult",
    "limit_covariance",
    "null_statistic_distribution",
    "covariance_check",
    "bridge_oracle",
    "simulate_bridges",
    "simulate_queue",
    "example1_hidden_sort",
    "example2_queue",
    "power_to_csv",
]


@dataclass(frozen=True)
class SimConfig:
    """Shared experiment parameters."""

    n: int
    beta_grid: tuple
    reps: int
    alpha: float = 0.1
    base_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "beta_grid", tuple(float(b) for b in self.beta_grid))
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if not (0.0 < self.alpha < 1.0):
            raise ValueError("alpha must be in (0, 1)")
        for b in self.beta_grid:
            if not (0.0 < b <= 1.0):
                raise ValueError(f"beta must be in (0, 1], got {b}")


@dataclass(frozen=True)
class QueueConfig:
    """Single-server queue experiment parameters.

    Arrival times are iid exp(A) with A normal, mean ``arrival_log_mean``
    (defaults to log(n_jobs)) and standard deviation ``sigma``.  Service
    durations are iid from ``service_dist`` (defaults to uniform(0,1)).
    """

    n_jobs: int
    sigma: float
    service_dist: Optional[DistributionSpec] = None
    arrival_log_mean: Optional[float] = None

    def __post_init__(self):
        if self.n_jobs < 1:
            raise ValueError("n_jobs must be >= 1")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.service_dist is None:
            object.__setattr__(self, "service_dist",
                               registry_lookup("uniform", {"a": 0.0, "b": 1.0}))
        if self.arrival_log_mean is None:
            object.__setattr__(self, "arrival_log_mean", math.log(self.n_jobs))


# ---------------------------------------------------------------------------
# fast statistic evaluation shared by the experiments
# ---------------------------------------------------------------------------

def _prepare(data: np.ndarray):
    """Sort once; return pieces reused across sorting levels."""
    n = data.size
    order = np.argsort(data, kind="stable")
    sorted_vals = data[order]
    starts = np.flatnonzero(np.concatenate(([True], sorted_vals[1:] != sorted_vals[:-1])))
    sizes_asc = np.diff(np.concatenate((starts, [n])))
    pos_desc = (order[::-1] + 1).astype(np.int64)
    sizes_desc = sizes_asc[::-1].astype(np.int64)
    distinct = sorted_vals[starts]
    counts_asc = np.cumsum(sizes_asc)
    return n, distinct, counts_asc, pos_desc, sizes_desc


def _bubble_stats_prepared(prep, f_distinct: np.ndarray, betas: Sequence[float]) -> np.ndarray:
    """Scaled sup-distance statistic for several betas from one sort.

    Gap enumeration runs over every distinct data value; values where the
    empirical curve does not jump contribute only dominated gaps, so the
    maximum matches the jump-only evaluation exactly.
    """
    n, distinct, _, pos_desc, sizes_desc = prep
    sqrt_n = math.sqrt(n)
    out = np.empty(len(betas))
    for i, beta in enumerate(betas):
        k = SortLevel(beta).iterations(n)
        f_desc = _frontier_desc(pos_desc, sizes_desc, k, n)
        levels = (f_desc[::-1] - 1) / n
        odds = f_distinct < 1.0 - beta
        denom = np.where(odds, 1.0 - f_distinct, 1.0)
        b0 = np.where(odds, beta * f_distinct / denom, f_distinct)
        lo = np.concatenate(([0.0], levels[:-1]))
        gaps = np.maximum(np.abs(levels - b0), np.abs(lo - b0))
        out[i] = sqrt_n * np.max(gaps)
    return out


def _ks_stat_prepared(prep, f_distinct: np.ndarray) -> float:
    n, _, counts_asc, _, _ = prep
    hi = counts_asc / n
    lo = np.concatenate(([0.0], hi[:-1]))
    gaps = np.maximum(np.abs(hi - f_distinct), np.abs(lo - f_distinct))
    return math.sqrt(n) * float(np.max(gaps))


def _ww_rejects(data: np.ndarray, alpha: float) -> bool:
    return bool(ww_runs_test(data, alpha).reject)


def _bubble_thresholds(betas: Sequence[float], alpha: float) -> np.ndarray:
    """Critical values: reject when the statistic exceeds them."""
    return np.array([GkDist(b).quantile(1.0 - alpha) for b in betas])


# ---------------------------------------------------------------------------
# worker plumbing
# ---------------------------------------------------------------------------

_CHUNK = 512


def _run_chunked(fn, args: tuple, reps: int, workers: int):
    """Run fn(args, lo, hi) over rep ranges; return chunk results in rep order."""
    ranges = [(lo, min(lo + _CHUNK, reps)) for lo in range(0, reps, _CHUNK)]
    if workers <= 1 or len(ranges) == 1:
        return [fn(args, lo, hi) for lo, hi in ranges]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, args, lo, hi) for lo, hi in ranges]
        return [f.result() for f in futures]


# ---------------------------------------------------------------------------
# null distribution of the statistic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NullDistribution:
    """Simulated null distribution of the statistic at one sorting level."""

    beta: float
    n: int
    reps: int
    alpha: float
    stats: np.ndarray            # sorted statistic values
    sup_distance: float          # ecdf vs the limiting cdf
    reject_rate: float           # share of runs with p-value < alpha

    def ecdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.searchsorted(self.stats, x, side="right") / self.stats.size
        return float(out) if x.ndim == 0 else out


def _null_chunk(args, lo, hi):
    f0_name, f0_params, n, betas, base_seed = args
    f0 = registry_lookup(f0_name, f0_params)
    out = np.empty((hi - lo, len(betas)))
    for r in range(lo, hi):
        for j, beta in enumerate(betas):
            rng = np.random.default_rng([base_seed, j, r])
            data = f0.sample(rng, n)
            prep = _prepare(data)
            fd = np.asarray(f0.cdf(prep[1]), dtype=float)
            out[r - lo, j] = _bubble_stats_prepared(prep, fd, [beta])[0]
    return lo, out


def _ecdf_sup_distance(sorted_stats: np.ndarray, limit_cdf) -> float:
    """sup_x |ecdf(x) - G(x)| for a continuous G, exact over the sample."""
    n = sorted_stats.size
    g = np.asarray(limit_cdf(sorted_stats), dtype=float)
    hi = np.arange(1, n + 1) / n
    lo = np.arange(0, n) / n
    return float(np.max(np.maximum(np.abs(hi - g), np.abs(lo - g))))


def null_statistic_distribution(cfg: SimConfig, f0: DistributionSpec) -> list[NullDistribution]:
    """Simulate the statistic under H0 for each beta on the grid.

    Returns, per beta, the sorted statistic sample together with the
    sup-distance of its ecdf from the limiting cdf and the rejection
    rate of the asymptotic test at cfg.alpha.
    """
    args = (f0.name, f0.params, cfg.n, cfg.beta_grid, cfg.base_seed)
    chunks = _run_chunked(_null_chunk, args, cfg.reps, cfg.workers)
    stats = np.concatenate([c for _, c in sorted(chunks, key=lambda t: t[0])], axis=0)
    results = []
    thresholds = _bubble_thresholds(cfg.beta_grid, cfg.alpha)
    for j, beta in enumerate(cfg.beta_grid):
        s = np.sort(stats[:, j])
        dist = GkDist(beta)
        results.append(NullDistribution(
            beta=beta,
            n=cfg.n,
            reps=cfg.reps,
            alpha=cfg.alpha,
            stats=s,
            sup_distance=_ecdf_sup_distance(s, dist.cdf),
            reject_rate=float(np.mean(s > thresholds[j])),
        ))
    return results


# ---------------------------------------------------------------------------
# covariance of the fluctuation process
# ---------------------------------------------------------------------------

def limit_covariance(f0: DistributionSpec, beta: float, x: float, y: float) -> float:
    """Covariance c(x, y) of the limiting Gaussian fluctuation process.

    Three regimes split at the switch point xstar = F0^{-1}(1 - beta):
    scaled-odds fluctuations below it, bridge fluctuations above it, and
    a mixed branch when the points straddle it.
    """
    if y < x:
        x, y = y, x
    fx = float(f0.cdf(x))
    fy = float(f0.cdf(y))
    edge = 1.0 - beta
    if fy < edge:
        return beta * fx / (1.0 - fx) ** 2
    if fx < edge:
        return beta * fx * (1.0 - fy) / (1.0 - fx) ** 2
    return fx * (1.0 - fy)


@dataclass(frozen=True)
class CovarianceCheck:
    points: tuple
    empirical: np.ndarray     # m x m Monte Carlo covariance matrix
    theoretical: np.ndarray   # m x m limit covariance matrix

    def pairs(self):
        m = len(self.points)
        return [((self.points[i], self.points[j]),
                 (self.empirical[i, j], self.theoretical[i, j]))
                for i in range(m) for j in range(i, m)]


def _limit_curve_value(f0, beta: float, x: float) -> float:
    f = float(f0.cdf(x))
    if f < 1.0 - beta:
        return beta * f / (1.0 - f)
    return f


def _cov_chunk(args, lo, hi):
    f0_name, f0_params, n, beta, points, base_seed = args
    f0 = registry_lookup(f0_name, f0_params)
    k = SortLevel(beta).iterations(n)
    m = len(points)
    b0 = np.array([_limit_curve_value(f0, beta, x) for x in points])
    batch = hi - lo
    data = np.empty((batch, n))
    for r in range(lo, hi):
        rng = np.random.default_rng([base_seed, r])
        data[r - lo] = f0.sample(rng, n)
    ys = np.empty((batch, m))
    sqrt_n = math.sqrt(n)
    for j, x in enumerate(points):
        exceed = data > x
        h = exceed.sum(axis=1)
        csum = np.cumsum(exceed, axis=1)
        has = h > k
        first = np.argmax(csum >= k + 1, axis=1)  # 0-based index of (k+1)-th exceedance
        f = np.where(has, first + 1 - k, n - h + 1)
        ys[:, j] = sqrt_n * ((f - 1) / n - b0[j])
    return lo, ys.T @ ys, ys.sum(axis=0), batch


def covariance_check(n: int, beta: float, f0: DistributionSpec,
                     points: Sequence[float], reps: int, seed: int,
                     workers: int = 1) -> CovarianceCheck:
    """Monte Carlo covariance of the scaled curve deviations vs the limit.

    Estimates cov of sqrt(n)(empirical - limit) evaluated at the given
    points and pairs it with the limiting covariance.  Points must avoid
    the switch point exactly.
    """
    points = tuple(float(x) for x in points)
    args = (f0.name, f0.params, n, beta, points, seed)
    chunks = _run_chunked(_cov_chunk, args, reps, workers)
    m = len(points)
    outer = np.zeros((m, m))
    sums = np.zeros(m)
    total = 0
    for _, o, s, b in chunks:
        outer += o
        sums += s
        total += b
    mean = sums / total
    emp = outer / total - np.outer(mean, mean)
    theo = np.array([[limit_covariance(f0, beta, points[i], points[j])
                      for j in range(m)] for i in range(m)])
    return CovarianceCheck(points=points, empirical=emp, theoretical=theo)


# ---------------------------------------------------------------------------
# bridge-simulation oracle for the limit distribution
# ---------------------------------------------------------------------------

def simulate_bridges(T: float, a: np.ndarray, steps: int,
                     rng: np.random.Generator, keep_times: Sequence[float] = (),
                     interval_extrema: bool = True):
    """Simulate |sup| of bridges from (0,0) to (T, a_i) on a uniform grid.

    One path per entry of ``a``, using exact Gaussian transition sampling
    conditioned on the terminal value: from state w at time t,

        W(t+dt) ~ Normal(w + (a - w) dt / (T - t),  dt (T - t - dt) / (T - t)).

    With ``interval_extrema`` the within-step excursions are sampled from
    the exact endpoint-conditioned extremum law of the Brownian segment,

        M ~ (w0 + w1 + sqrt((w1 - w0)^2 - 2 dt log U)) / 2,

    and its mirrored minimum, which removes the downward discretization
    bias of the gridded supremum (the max and min of one step are drawn
    independently; their joint excursion has negligible probability at
    these step sizes).

    Returns (sup_abs, kept) where kept holds the path values at each of
    ``keep_times`` (snapped to the grid).
    """
    a = np.asarray(a, dtype=float)
    dt = T / steps
    w = np.zeros(a.shape)
    sup = np.zeros(a.shape)
    keep_idx = {int(round(t / dt)): i for i, t in enumerate(keep_times)}
    kept = [np.zeros(a.shape) for _ in keep_times]
    for s in range(steps):
        remain = T - s * dt
        mean = w + (a - w) * (dt / remain)
        var = dt * (remain - dt) / remain
        if var > 0:
            w_new = mean + math.sqrt(var) * rng.standard_normal(a.shape)
        else:
            w_new = mean
        if interval_extrema:
            delta_sq = (w_new - w) ** 2
            # log1p(-u) keeps the argument strictly inside (0, 1]
            up = 0.5 * (w + w_new + np.sqrt(delta_sq - 2.0 * dt * np.log1p(-rng.random(a.shape))))
            dn = 0.5 * (w + w_new - np.sqrt(delta_sq - 2.0 * dt * np.log1p(-rng.random(a.shape))))
            np.maximum(sup, up, out=sup)
            np.maximum(sup, -dn, out=sup)
        w = w_new
        np.maximum(sup, np.abs(w), out=sup)
        if s + 1 in keep_idx:
            kept[keep_idx[s + 1]] = w.copy()
    return sup, kept


@dataclass(frozen=True)
class BridgeOracle:
    beta: float
    draws: int
    grid_steps: int
    stats: np.ndarray        # sorted sup values
    sup_distance: float      # ecdf vs the quadrature cdf

    def ecdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.searchsorted(self.stats, x, side="right") / self.stats.size
        return float(out) if x.ndim == 0 else out


_BRIDGE_BATCH = 16384


def bridge_oracle(beta: float, draws: int, grid_steps: int, seed: int) -> BridgeOracle:
    """Empirical distribution of the limit statistic by direct simulation.

    Per draw: a shared standard normal Z pins two independent bridges,
    one over [0, (1-beta)/beta] with terminal sqrt((1-beta)/beta) Z and
    one over [0, beta] with terminal sqrt(beta(1-beta)) Z; the statistic
    is the larger of the two absolute suprema.  Grid discretization
    biases the suprema slightly downward.
    """
    if not (0.0 < beta < 1.0):
        raise ValueError(f"bridge oracle requires beta in (0, 1), got {beta}")
    if grid_steps < 64:
        raise ValueError("grid_steps must be at least 64")
    t1 = (1.0 - beta) / beta
    s1 = math.sqrt(t1)
    s2 = math.sqrt(beta * (1.0 - beta))
    out = np.empty(draws)
    for start in range(0, draws, _BRIDGE_BATCH):
        stop = min(start + _BRIDGE_BATCH, draws)
        rng = np.random.default_rng([seed, start])
        z = rng.standard_normal(stop - start)
        sup1, _ = simulate_bridges(t1, s1 * z, grid_steps, rng)
        sup2, _ = simulate_bridges(beta, s2 * z, grid_steps, rng)
        out[start:stop] = np.maximum(sup1, sup2)
    stats = np.sort(out)
    dist = GkDist(beta)
    return BridgeOracle(
        beta=beta,
        draws=draws,
        grid_steps=grid_steps,
        stats=stats,
        sup_distance=_ecdf_sup_distance(stats, dist.cdf),
    )


# ---------------------------------------------------------------------------
# power studies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerResult:
    """Rejection rates of the tests in one experiment configuration."""

    experiment: str
    param_name: str
    param: float
    n: int
    reps: int
    alpha: float
    beta_grid: tuple
    beta_rates: tuple
    ks_rate: float
    ww_rate: float

    def rows(self):
        """Long-format rows (experiment, beta, param, reps, reject_rate, stderr).

        The beta = 1 row is the KS test; the runs test appears with an
        empty beta field.
        """
        def se(rate):
            return math.sqrt(rate * (1.0 - rate) / self.reps)

        rows = [(self.experiment, b, self.param, self.reps, r, se(r))
                for b, r in zip(self.beta_grid, self.beta_rates)]
        if 1.0 not in self.beta_grid:
            rows.append((self.experiment, 1.0, self.param, self.reps,
                         self.ks_rate, se(self.ks_rate)))
        rows.append((self.experiment, None, self.param, self.reps,
                     self.ww_rate, se(self.ww_rate)))
        return rows


def power_to_csv(results: Sequence[PowerResult], path_or_file) -> None:
    """Write power results in long format, one row per (config, test)."""
    lines = ["experiment,beta,param,reps,reject_rate,stderr\n"]
    for res in results:
        for exp, beta, param, reps, rate, se in res.rows():
            beta_txt = "" if beta is None else repr(float(beta))
            lines.append(f"{exp},{beta_txt},{float(param)!r},{reps},{float(rate)!r},{float(se)!r}\n")
    text = "".join(lines)
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w") as f:
            f.write(text)


def _gauss_pairs(rng: np.random.Generator, n: int, rho: float):
    """Correlated standard normal pairs via the inverse-cdf construction."""
    u1 = rng.random(n)
    u2 = rng.random(n)
    for u in (u1, u2):
        while np.any(u == 0.0):
            zeros = u == 0.0
            u[zeros] = rng.random(int(np.count_nonzero(zeros)))
    hidden = ndtri(u1)
    noise = ndtri(u2)
    observed = rho * hidden + math.sqrt(1.0 - rho * rho) * noise
    return hidden, observed


def _ex1_chunk(args, lo, hi):
    n, rho, betas, alpha, thresholds, ks_threshold, base_seed = args
    f0 = registry_lookup("normal", {"mu": 0.0, "sigma": 1.0})
    nb = len(betas)
    rejects = np.zeros((hi - lo, nb + 2), dtype=bool)
    for r in range(lo, hi):
        rng = np.random.default_rng([base_seed, r])
        hidden, observed = _gauss_pairs(rng, n, rho)
        data = observed[np.argsort(np.abs(hidden), kind="stable")]
        prep = _prepare(data)
        fd = np.asarray(f0.cdf(prep[1]), dtype=float)
        stats = _bubble_stats_prepared(prep, fd, betas)
        rejects[r - lo, :nb] = stats > thresholds
        rejects[r - lo, nb] = _ks_stat_prepared(prep, fd) > ks_threshold
        rejects[r - lo, nb + 1] = _ww_rejects(data, alpha)
    return lo, rejects


def example1_hidden_sort(cfg: SimConfig, rho: float) -> PowerResult:
    """Detection of magnitude-based sorting through a correlated column.

    Per repetition: draw n standard normal pairs with correlation rho,
    order the rows by the magnitude of the hidden coordinate, keep the
    observed coordinate, and test it against normal(0,1) with the
    partial-sorting test at every beta on the grid plus KS and the runs
    test.  rho = 0 is the null.
    """
    if not (abs(rho) < 1.0):
        raise ValueError(f"|rho| must be < 1, got {rho}")
    thresholds = _bubble_thresholds(cfg.beta_grid, cfg.alpha)
    ks_threshold = GkDist(1.0).quantile(1.0 - cfg.alpha)
    args = (cfg.n, rho, cfg.beta_grid, cfg.alpha, thresholds, ks_threshold, cfg.base_seed)
    chunks = _run_chunked(_ex1_chunk, args, cfg.reps, cfg.workers)
    rejects = np.concatenate([c for _, c in sorted(chunks, key=lambda t: t[0])], axis=0)
    rates = rejects.mean(axis=0)
    nb = len(cfg.beta_grid)
    return PowerResult(
        experiment="hidden-sort",
        param_name="rho",
        param=rho,
        n=cfg.n,
        reps=cfg.reps,
        alpha=cfg.alpha,
        beta_grid=cfg.beta_grid,
        beta_rates=tuple(float(r) for r in rates[:nb]),
        ks_rate=float(rates[nb]),
        ww_rate=float(rates[nb + 1]),
    )


# ---------------------------------------------------------------------------
# queue simulation
# ---------------------------------------------------------------------------

@dataclass
class QueueTrace:
    """Departure-ordered service durations plus a replayable event log."""

    departures: np.ndarray
    served_jobs: list = field(default_factory=list)    # job index, service order
    start_times: list = field(default_factory=list)
    end_times: list = field(default_factory=list)


def simulate_queue(arrival_times, services, rng) -> QueueTrace:
    """Single-server queue where the server picks the shortest or longest job.

    Jobs enter a waiting pool at their arrival times.  Whenever the
    server frees up (or is idle when jobs arrive), it selects uniformly
    at random either the minimum-service or the maximum-service waiting
    job and serves it to completion.  The coin is flipped only when at
    least two jobs wait.  Arrivals at identical instants all join before
    the selection; service ties resolve toward the earliest arrival.
    """
    arrival_times = np.asarray(arrival_times, dtype=float)
    services = np.asarray(services, dtype=float)
    n = arrival_times.size
    if services.size != n:
        raise ValueError("arrival_times and services must have equal length")
    order = np.argsort(arrival_times, kind="stable")

    waiting: list = []            # sorted (service, arrival_rank, job_id)
    trace = QueueTrace(departures=np.empty(n))
    i = 0                         # next arrival pointer (into order)
    t = 0.0
    in_service = None
    completion = math.inf
    done = 0
    while done < n:
        next_arrival = arrival_times[order[i]] if i < n else math.inf
        if in_service is None:
            if not waiting:
                t = next_arrival
                while i < n and arrival_times[order[i]] == t:
                    job = order[i]
                    insort(waiting, (services[job], i, job))
                    i += 1
            if len(waiting) > 1 and rng.random() >= 0.5:
                # take the longest job; scan back over service ties to the
                # earliest arrival among them
                j = len(waiting) - 1
                while j > 0 and waiting[j - 1][0] == waiting[j][0]:
                    j -= 1
                _, _, job = waiting.pop(j)
            else:
                _, _, job = waiting.pop(0)
            in_service = job
            completion = t + services[job]
            trace.served_jobs.append(int(job))
            trace.start_times.append(t)
        elif next_arrival <= completion:
            t = next_arrival
            job = order[i]
            insort(waiting, (services[job], i, job))
            i += 1
        else:
            t = completion
            trace.departures[done] = services[in_service]
            trace.end_times.append(t)
            done += 1
            in_service = None
            completion = math.inf
    return trace


def _ex2_chunk(args, lo, hi):
    (n_jobs, sigma, log_mean, service_name, service_params,
     betas, alpha, thresholds, ks_threshold, base_seed) = args
    service_dist = registry_lookup(service_name, service_params)
    nb = len(betas)
    rejects = np.zeros((hi - lo, nb + 2), dtype=bool)
    for r in range(lo, hi):
        rng = np.random.default_rng([base_seed, r])
        arrivals = np.exp(log_mean + sigma * rng.standard_normal(n_jobs))
        services = service_dist.sample(rng, n_jobs)
        data = simulate_queue(arrivals, services, rng).departures
        prep = _prepare(data)
        fd = np.asarray(service_dist.cdf(prep[1]), dtype=float)
        stats = _bubble_stats_prepared(prep, fd, betas)
        rejects[r - lo, :nb] = stats > thresholds
        rejects[r - lo, nb] = _ks_stat_prepared(prep, fd) > ks_threshold
        rejects[r - lo, nb + 1] = _ww_rejects(data, alpha)
    return lo, rejects


def example2_queue(cfg: SimConfig, qcfg: QueueConfig) -> PowerResult:
    """Detection of min-or-max service scheduling from departure data.

    Per repetition: draw arrival and service times, run the queue with
    the random shortest-or-longest policy, and test the departure-ordered
    service durations against the service distribution with the
    partial-sorting test at each beta plus KS and the runs test.
    """
    thresholds = _bubble_thresholds(cfg.beta_grid, cfg.alpha)
    ks_threshold = GkDist(1.0).quantile(1.0 - cfg.alpha)
    args = (qcfg.n_jobs, qcfg.sigma, qcfg.arrival_log_mean,
            qcfg.service_dist.name, qcfg.service_dist.params,
            cfg.beta_grid, cfg.alpha, thresholds, ks_threshold, cfg.base_seed)
    chunks = _run_chunked(_ex2_chunk, args, cfg.reps, cfg.workers)
    rejects = np.concatenate([c for _, c in sorted(chunks, key=lambda t: t[0])], axis=0)
    rates = rejects.mean(axis=0)
    nb = len(cfg.beta_grid)
    return PowerResult(
        experiment="queue",
        param_name="sigma",
        param=qcfg.sigma,
        n=qcfg.n_jobs,
        reps=cfg.reps,
        alpha=cfg.alpha,
        beta_grid=cfg.beta_grid,
        beta_rates=tuple(float(r) for r in rates[:nb]),
        ks_rate=float(rates[nb]),
        ww_rate=float(rates[nb + 1]),
    )
