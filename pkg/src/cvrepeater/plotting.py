"""Optional matplotlib rendering of command outputs.

Each function writes one PNG next to the delimited output and returns the
path. matplotlib is imported lazily so the plain CSV/JSON paths never pay
for it.
"""
from __future__ import annotations

import math
from collections import defaultdict


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _series_label(key: dict) -> str:
    return ", ".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}"
                     for k, v in key.items())


def _finite_xy(pairs):
    xs, ys = [], []
    for x, y in pairs:
        if y is not None and isinstance(y, (int, float)) and math.isfinite(y) and y > 0:
            xs.append(x)
            ys.append(y)
    return xs, ys


def rate_curve_figure(records, path: str) -> str:
    """Rate vs distance, one line per (n, g, mu), with capacity curves."""
    plt = _pyplot()
    series = defaultdict(list)
    bench = defaultdict(list)
    for r in records:
        if r.error is not None:
            continue
        series[(r.n, r.g, r.mu)].append((r.L_km, r.rate_clamped))
        bench[r.n].append((r.L_km, r.plob, r.repeater_cap))
    fig, ax = plt.subplots(figsize=(7.2, 4.8))
    for (n, g, mu), pts in sorted(series.items()):
        xs, ys = _finite_xy(sorted(pts))
        if xs:
            ax.semilogy(xs, ys, marker="o", ms=3,
                        label=_series_label({"n": n, "g": g, "mu": mu}))
    for n, pts in sorted(bench.items()):
        pts = sorted(set(pts))
        xs = [p[0] for p in pts]
        ax.semilogy(xs, [p[1] for p in pts], "k-", lw=1, label="plob")
        ax.semilogy(xs, [p[2] for p in pts], "k--", lw=1,
                    label=f"repeater cap n={n}")
    ax.set_xlabel("distance (km)")
    ax.set_ylabel("rate (bits per use)")
    ax.legend(fontsize=7)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def memory_curve_figure(records, path: str) -> str:
    """Rate vs coherence time, one line per (L, n, g, mu)."""
    plt = _pyplot()
    series = defaultdict(list)
    for r in records:
        if r.error is not None or not r.valid:
            continue
        series[(r.L_km, r.n, r.g, r.mu)].append((r.tau_c_s, r.rate_weighted))
    fig, ax = plt.subplots(figsize=(7.2, 4.8))
    for key, pts in sorted(series.items()):
        pts = sorted(pts)
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        L, n, g, mu = key
        ax.semilogx(xs, ys, marker="o", ms=3,
                    label=_series_label({"L": L, "n": n, "g": g, "mu": mu}))
    ax.set_xlabel("coherence time (s)")
    ax.set_ylabel("rate (bits per use)")
    ax.legend(fontsize=7)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def capacity_figure(rows, path: str) -> str:
    """Capacity benchmarks vs distance for each requested depth."""
    plt = _pyplot()
    series = defaultdict(list)
    for row in rows:
        if row.get("error"):
            continue
        series[row["n"]].append((row["L_km"], row["plob"], row["repeater_cap"]))
    fig, ax = plt.subplots(figsize=(7.2, 4.8))
    for n, pts in sorted(series.items()):
        pts = sorted(pts)
        xs = [p[0] for p in pts]
        ax.semilogy(xs, [p[1] for p in pts], "k-", lw=1)
        ax.semilogy(xs, [p[2] for p in pts], marker="o", ms=3,
                    label=f"repeater cap n={n}")
    ax.set_xlabel("distance (km)")
    ax.set_ylabel("capacity (bits per use)")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def optimize_figure(results: list[dict], path: str) -> str:
    """Evaluated (g, mu) points shaded by rate, optimum marked."""
    plt = _pyplot()
    n_panels = len(results)
    fig, axes = plt.subplots(
        1, n_panels, figsize=(4.8 * n_panels, 4.2), squeeze=False
    )
    for ax, res in zip(axes[0], results):
        evals = res["evaluations"]
        xs = [e["g"] for e in evals if e["rate"] is not None]
        ys = [e["mu"] for e in evals if e["rate"] is not None]
        cs = [e["rate"] for e in evals if e["rate"] is not None]
        bad_x = [e["g"] for e in evals if e["rate"] is None]
        bad_y = [e["mu"] for e in evals if e["rate"] is None]
        if xs:
            sc = ax.scatter(xs, ys, c=cs, s=8, cmap="viridis")
            fig.colorbar(sc, ax=ax, label="rate (bits per use)")
        if bad_x:
            ax.scatter(bad_x, bad_y, marker="x", c="0.6", s=8, label="invalid")
        if res["found"]:
            ax.plot([res["g_opt"]], [res["mu_opt"]], "r*", ms=14, label="optimum")
        ax.set_xscale("log")
        ax.set_xlabel("gain g")
        ax.set_ylabel("mu")
        ax.set_title(f"L={res['L_km']:g} km, n={res['n']}")
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def montecarlo_figure(storage_s, path: str) -> str:
    """Histogram of simulated per-link storage durations."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.hist(storage_s.ravel(), bins=50, color="tab:blue", alpha=0.8)
    ax.set_xlabel("storage duration (s)")
    ax.set_ylabel("count")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
