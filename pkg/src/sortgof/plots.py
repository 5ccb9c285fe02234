"""Figure rendering for CLI outputs.

Each renderer takes the already-computed data (the same objects the CSV
writers consume) and saves a PNG next to the delimited output.  Uses the
Agg backend so no display is needed.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "render_sortviz",
    "render_null_distribution",
    "render_power",
    "render_quantile_table",
]


def render_sortviz(samples_by_beta: dict, overlays_by_beta: dict, path: str) -> None:
    """Scatter of (index, value) per sorting level with the limit frontier."""
    betas = sorted(samples_by_beta)
    ncols = min(2, len(betas))
    nrows = (len(betas) + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(6 * ncols, 4 * nrows), squeeze=False)
    for ax, beta in zip(axes.ravel(), betas):
        vals = samples_by_beta[beta]
        ax.plot(np.arange(1, len(vals) + 1), vals, ".", ms=2, alpha=0.6)
        idx, ov = overlays_by_beta[beta]
        ax.plot(idx, ov, "r-", lw=1.5)
        ax.set_title(f"beta = {beta:g}")
        ax.set_xlabel("index")
        ax.set_ylabel("value")
    for ax in axes.ravel()[len(betas):]:
        ax.set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_null_distribution(results, path: str) -> None:
    """Simulated statistic ecdfs against the limiting cdf, one panel per beta."""
    fig, axes = plt.subplots(1, len(results), figsize=(5 * len(results), 4), squeeze=False)
    from .gkdist import GkDist

    for ax, res in zip(axes.ravel(), results):
        grid = np.linspace(0.0, max(2.5, float(res.stats[-1])), 300)
        ax.plot(res.stats, np.arange(1, res.stats.size + 1) / res.stats.size,
                drawstyle="steps-post", label=f"simulated (n={res.n})")
        ax.plot(grid, GkDist(res.beta).cdf(grid), "k-", lw=1, label="limit")
        ax.set_title(f"beta = {res.beta:g}, sup distance = {res.sup_distance:.4f}")
        ax.set_xlabel("statistic")
        ax.set_ylabel("cdf")
        ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_power(results, path: str) -> None:
    """Rejection rate versus sorting level, one line per parameter value."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for res in sorted(results, key=lambda r: r.param):
        ax.plot(res.beta_grid, res.beta_rates, "o-", ms=4,
                label=f"{res.param_name} = {res.param:g}")
        ax.axhline(res.ww_rate, ls=":", lw=0.8, color=ax.lines[-1].get_color())
    if results:
        ax.axhline(results[0].alpha, color="k", lw=1)
        ax.set_title(f"{results[0].experiment}: rejection rate "
                     f"(dotted: runs test, black: alpha)")
    ax.set_xlabel("sorting level beta")
    ax.set_ylabel("rejection rate")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_quantile_table(rows, path: str) -> None:
    """Quantile curves as a function of the sorting level, one line per p."""
    by_p: dict = {}
    for beta, p, q in rows:
        by_p.setdefault(p, []).append((beta, q))
    fig, ax = plt.subplots(figsize=(6, 4))
    for p in sorted(by_p):
        pts = sorted(by_p[p])
        ax.plot([b for b, _ in pts], [q for _, q in pts], "o-", ms=4, label=f"p = {p:g}")
    ax.set_xlabel("sorting level beta")
    ax.set_ylabel("quantile")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
