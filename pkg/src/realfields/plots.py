"""Figures for the report path (written to files, never shown)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_quartic_trend(table, path: str) -> str:
    discs = np.array([r.disc for r in table.rows], dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    for key, slope, mark in (("t_a", table.slope_a, "o"), ("t_b", table.slope_b, "s")):
        ys = np.array([getattr(r, key) for r in table.rows], dtype=float)
        ax.loglog(discs, ys, mark, label=f"{key} (slope {slope:.3f})")
        c = np.polyfit(np.log(discs), np.log(ys), 1)
        xs = np.linspace(np.log(discs.min()), np.log(discs.max()), 50)
        ax.loglog(np.exp(xs), np.exp(np.polyval(c, xs)), "-", lw=0.8)
    ax.set_xlabel("discriminant")
    ax.set_ylabel("trace")
    ax.set_title(f"quartic fields containing sqrt {table.D}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_rank_trend(rows, path: str) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.scatter([r.scale for r in rows], [r.rank for r in rows], s=12)
    ax.set_xlabel("disc^(1/2) log disc")
    ax.set_ylabel("rank of diagonal universal form")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_classification(report, path: str) -> str:
    s = report.summary
    keys = ["excluded_B", "excluded_C", "excluded_D", "passed"]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    vals = [s[k] for k in keys]
    ax.bar(keys, vals)
    ax.set_yscale("symlog")
    for i, v in enumerate(vals):
        ax.text(i, v, str(v), ha="center", va="bottom")
    ax.set_title(f"degree {report.degree}: {s['fields']} candidate fields")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
