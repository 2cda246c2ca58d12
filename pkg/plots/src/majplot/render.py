"""Render the two CSV layouts into figure images."""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .schema import read_fig1_csv, read_fig2_csv

__all__ = ["PlotSpec", "render"]

# fixed per-degree palette so reruns color consistently; cosmetic only
_ELL_COLORS = {4: "#BD2327", 6: "#C3A10C", 8: "#769d5d", 10: "#355379"}


@dataclass(frozen=True)
class PlotSpec:
    kind: str  # "fig1" | "fig2"
    input_path: str
    output_path: str
    xlabel: str | None = None
    ylabel: str | None = None


def _render_fig1(spec: PlotSpec) -> None:
    data = read_fig1_csv(spec.input_path)
    fig, ax = plt.subplots(figsize=(5, 4))
    for col in data.times:
        ax.semilogy(data.degrees, data.distances[col], marker="o",
                    label=f"t = {col[1:]}")
    ax.set_xlabel(spec.xlabel or r"truncation degree $\ell$")
    ax.set_ylabel(spec.ylabel or "Frobenius distance to Trotter reference")
    ax.set_xticks(data.degrees)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.output_path, dpi=150)
    plt.close(fig)


def _render_fig2(spec: PlotSpec) -> None:
    data = read_fig2_csv(spec.input_path)
    u_values = sorted({data.u_of[c] for c in data.columns})
    n = len(u_values)
    ncols = min(n, 3)
    nrows = (n + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(3.2 * ncols, 2.8 * nrows),
                             sharex=True, sharey=True, squeeze=False)
    for i, u in enumerate(u_values):
        ax = axes[i // ncols][i % ncols]
        cols = sorted((c for c in data.columns if data.u_of[c] == u),
                      key=lambda c: data.ell_of[c])
        for c in cols:
            ell = data.ell_of[c]
            ax.plot(data.times, data.series[c], label=rf"$\ell={ell}$",
                    color=_ELL_COLORS.get(ell))
        ax.set_title(f"U = {u:g}")
        ax.grid(True, alpha=0.3)
    for j in range(n, nrows * ncols):
        axes[j // ncols][j % ncols].set_axis_off()
    axes[0][0].legend(fontsize=8)
    fig.supxlabel(spec.xlabel or "time")
    fig.supylabel(spec.ylabel or "central-site hole density")
    fig.tight_layout()
    fig.savefig(spec.output_path, dpi=150)
    plt.close(fig)


def render(spec: PlotSpec) -> None:
    """Read the CSV, validate its schema, and write one image file."""
    if spec.kind == "fig1":
        _render_fig1(spec)
    elif spec.kind == "fig2":
        _render_fig2(spec)
    else:
        raise ValueError(f"unknown figure kind {spec.kind!r}")
