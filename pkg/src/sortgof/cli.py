"""Command-line interface.

Subcommands:

  test      run the partial-sorting test (optionally KS and runs tests)
            on a one-column CSV and print JSON reports
  dist      query the generalized Kolmogorov distribution
  table     tabulate quantiles over sorting levels into a CSV
  simulate  simulate the null distribution of the statistic
  power     run the power experiments (hidden-sort, queue)
  sortviz   dump partially sorted samples and the limit-curve overlay

Exit codes: 0 success, 2 malformed input data, 3 invalid parameters.
Output files are written via a temporary file and an atomic rename, so
interrupted runs never leave partial files behind.  All randomized
subcommands take --seed and reproduce byte-identical outputs for a fixed
seed.  --plot renders a PNG figure alongside each delimited output.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

import numpy as np

from . import gkdist, simlab
from .curves import BubbleCurve
from .psort import SortLevel, partial_bubble_sort
from .testkit import bubble_sort_test, ks_test, parse_distribution, ww_runs_test

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PARAMS = 3


class InputError(Exception):
    """Malformed input data (exit code 2)."""


def _read_column(path: str) -> np.ndarray:
    """One numeric column from a CSV file or stdin ('-'); header optional."""
    if path == "-":
        lines = sys.stdin.read().splitlines()
    else:
        try:
            with open(path) as f:
                lines = f.read().splitlines()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
    values = []
    for lineno, line in enumerate(lines, start=1):
        cell = line.split(",")[0].strip()
        if not cell:
            continue
        try:
            values.append(float(cell))
        except ValueError:
            if lineno == 1 and not values:
                continue  # header row
            raise InputError(f"{path}: row {lineno}: not a number: {cell!r}") from None
    if not values:
        raise InputError(f"{path}: no numeric data found")
    arr = np.array(values)
    if not np.isfinite(arr).all():
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise InputError(f"{path}: row {bad + 1}: non-finite value")
    return arr


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _float_list(text: str) -> list[float]:
    return [float(s) for s in text.split(",") if s.strip()]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_test(args) -> int:
    data = _read_column(args.input)
    f0 = parse_distribution(args.f0)
    reports = [bubble_sort_test(data, f0, args.beta, args.alpha,
                                seed=args.seed, engine=args.engine)]
    if args.ks:
        reports.append(ks_test(data, f0, args.alpha, seed=args.seed))
    if args.ww:
        reports.append(ww_runs_test(data, args.alpha, seed=args.seed))
    for rep in reports:
        print(rep.to_json())
    return EXIT_OK


def cmd_dist(args) -> int:
    dist = gkdist.GkDist(args.beta)
    chosen = [v for v in (args.cdf, args.quantile, args.pvalue) if v is not None]
    if len(chosen) != 1:
        raise ValueError("give exactly one of --cdf, --quantile, --pvalue")
    if args.cdf is not None:
        value = dist.cdf(args.cdf)
    elif args.quantile is not None:
        value = dist.quantile(args.quantile)
    else:
        value = dist.pvalue(args.pvalue)
    print(f"{value:.10g}")
    return EXIT_OK


def cmd_table(args) -> int:
    betas = _float_list(args.betas)
    probs = _float_list(args.probs)
    rows = gkdist.tabulate(betas, probs, use_cache=not args.no_cache)
    import io

    buf = io.StringIO()
    gkdist.table_to_csv(rows, buf)
    _atomic_write(args.out, buf.getvalue())
    if args.plot:
        from .plots import render_quantile_table

        render_quantile_table(rows, os.path.splitext(args.out)[0] + ".png")
    return EXIT_OK


def cmd_simulate(args) -> int:
    f0 = parse_distribution(args.f0)
    cfg = simlab.SimConfig(n=args.n, beta_grid=_float_list(args.betas),
                           reps=args.reps, alpha=args.alpha,
                           base_seed=args.seed, workers=args.workers)
    results = simlab.null_statistic_distribution(cfg, f0)
    lines = ["beta,x,ecdf,limit_cdf,sup_distance\n"]
    for res in results:
        dist = gkdist.GkDist(res.beta)
        limit = dist.cdf(res.stats)
        ecdf = np.arange(1, res.stats.size + 1) / res.stats.size
        for x, e, g in zip(res.stats, ecdf, limit):
            lines.append(f"{res.beta!r},{float(x)!r},{float(e)!r},{float(g)!r},{res.sup_distance!r}\n")
    _atomic_write(args.out, "".join(lines))
    if args.plot:
        from .plots import render_null_distribution

        render_null_distribution(results, os.path.splitext(args.out)[0] + ".png")
    return EXIT_OK


def cmd_power(args) -> int:
    cfg = simlab.SimConfig(n=args.n, beta_grid=_float_list(args.betas),
                           reps=args.reps, alpha=args.alpha,
                           base_seed=args.seed, workers=args.workers)
    results = []
    if args.experiment == "hidden-sort":
        for rho in _float_list(args.rho):
            results.append(simlab.example1_hidden_sort(cfg, rho))
    else:
        for sigma in _float_list(args.sigma):
            qcfg = simlab.QueueConfig(n_jobs=args.n, sigma=sigma)
            results.append(simlab.example2_queue(cfg, qcfg))
    import io

    buf = io.StringIO()
    simlab.power_to_csv(results, buf)
    _atomic_write(args.out, buf.getvalue())
    if args.plot:
        from .plots import render_power

        render_power(results, os.path.splitext(args.out)[0] + ".png")
    return EXIT_OK


def cmd_sortviz(args) -> int:
    data = _read_column(args.input)
    f0 = parse_distribution(args.f0)
    n = data.size
    samples = {}
    overlays = {}
    for beta in _float_list(args.betas):
        level = SortLevel(beta)
        arranged = partial_bubble_sort(data, level)
        samples[beta] = arranged
        curve = BubbleCurve(f0, beta)
        grid = np.linspace(float(data.min()), float(data.max()), args.curve_points)
        overlays[beta] = (n * curve(grid), grid)
        text = "index,value\n" + "".join(
            f"{i},{float(v)!r}\n" for i, v in enumerate(arranged, start=1))
        _atomic_write(f"{args.out}_beta{beta:g}.csv", text)
        ctext = "index,value\n" + "".join(
            f"{float(ix)!r},{float(v)!r}\n" for ix, v in zip(overlays[beta][0], grid))
        _atomic_write(f"{args.out}_curve_beta{beta:g}.csv", ctext)
    if args.plot:
        from .plots import render_sortviz

        render_sortviz(samples, overlays, f"{args.out}.png")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sortgof",
        description="Goodness-of-fit testing via partial bubble sorting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="test a data file against a null distribution")
    p.add_argument("--input", required=True, help="CSV with one numeric column, or - for stdin")
    p.add_argument("--f0", required=True, help="null distribution, e.g. 'uniform(0,1)'")
    p.add_argument("--beta", type=float, required=True, help="sorting level in (0, 1]")
    p.add_argument("--alpha", type=float, default=0.1, help="significance level")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--ks", action="store_true", help="append a KS test report")
    p.add_argument("--ww", action="store_true", help="append a runs test report")
    p.add_argument("--engine", choices=("sorted", "positions"), default="sorted")
    p.set_defaults(fn=cmd_test)

    p = sub.add_parser("dist", help="query the generalized Kolmogorov distribution")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--cdf", type=float, default=None, metavar="X")
    p.add_argument("--quantile", type=float, default=None, metavar="P")
    p.add_argument("--pvalue", type=float, default=None, metavar="D")
    p.set_defaults(fn=cmd_dist)

    p = sub.add_parser("table", help="tabulate quantiles over sorting levels")
    p.add_argument("--betas", required=True, help="comma-separated sorting levels")
    p.add_argument("--probs", required=True, help="comma-separated probabilities")
    p.add_argument("--out", required=True)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(fn=cmd_table)

    p = sub.add_parser("simulate", help="simulate the null distribution of the statistic")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--betas", required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--f0", default="uniform(0,1)")
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--plot", action="store_true")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("power", help="run a power experiment")
    p.add_argument("--experiment", choices=("hidden-sort", "queue"), required=True)
    p.add_argument("--n", type=int, required=True, help="sample size / number of jobs")
    p.add_argument("--betas", required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--rho", default="0.9", help="hidden-sort correlations, comma-separated")
    p.add_argument("--sigma", default="0.1", help="queue arrival spreads, comma-separated")
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--plot", action="store_true")
    p.set_defaults(fn=cmd_power)

    p = sub.add_parser("sortviz", help="dump partially sorted samples with the limit curve")
    p.add_argument("--input", required=True)
    p.add_argument("--f0", required=True)
    p.add_argument("--betas", required=True)
    p.add_argument("--out", required=True, help="output path prefix")
    p.add_argument("--curve-points", type=int, default=512)
    p.add_argument("--plot", action="store_true")
    p.set_defaults(fn=cmd_sortviz)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
