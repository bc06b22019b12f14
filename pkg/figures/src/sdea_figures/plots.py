"""Line and box plots over harness CSVs.

No aggregation happens here beyond what the harness already published;
box plots are drawn from raw successful-run lengths with the usual
1.5 IQR whisker convention, and unsuccessful runs (budget-censored
counts) are excluded from the boxes with a note in the caption.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .io import curve_label, read_records, read_summaries


def plot_fig1(summary_csv, out_image) -> None:
    """Mean fitness calls per algorithm versus n, log-scale y."""
    rows = read_summaries(summary_csv)
    curves: dict[str, list[tuple[int, float]]] = {}
    for row in rows:
        if row["mean_evals"] is None:
            continue  # no successful runs in this cell
        curves.setdefault(curve_label(row["algorithm"], row["params"]), []).append(
            (row["n"], row["mean_evals"])
        )
    if not curves:
        raise ValueError(f"{summary_csv}: no cells with successful runs to plot")
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for label in sorted(curves):
        points = sorted(curves[label])
        ax.plot([p[0] for p in points], [p[1] for p in points],
                marker="o", markersize=4, label=label)
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("mean fitness calls (successful runs)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_image)
    plt.close(fig)


def plot_fig2(records_csv, out_image) -> None:
    """Grouped box plots of fitness calls per (algorithm, n)."""
    rows = read_records(records_csv)
    groups: dict[tuple[int, str], list[int]] = {}
    excluded = 0
    for row in rows:
        if not row["success"]:
            excluded += 1
            continue
        key = (row["n"], curve_label(row["algorithm"], row["params"]))
        groups.setdefault(key, []).append(row["evaluations"])
    if not groups:
        raise ValueError(f"{records_csv}: no successful runs to plot")
    ns = sorted({n for n, _ in groups})
    labels = sorted({lab for _, lab in groups})
    width = 0.8 / len(labels)
    fig, ax = plt.subplots(figsize=(1.2 + 1.3 * len(ns), 5.0))
    colors = plt.cm.tab10.colors
    for li, lab in enumerate(labels):
        positions, data = [], []
        for ni, n in enumerate(ns):
            if (n, lab) in groups:
                positions.append(ni + (li - (len(labels) - 1) / 2) * width)
                data.append(groups[(n, lab)])
        if not data:
            continue
        bp = ax.boxplot(data, positions=positions, widths=width * 0.9,
                        whis=1.5, flierprops={"markersize": 2},
                        patch_artist=True)
        for box in bp["boxes"]:
            box.set_facecolor(colors[li % len(colors)])
            box.set_alpha(0.6)
        ax.plot([], [], color=colors[li % len(colors)], label=lab)
    ax.set_yscale("log")
    ax.set_xticks(range(len(ns)))
    ax.set_xticklabels([str(n) for n in ns])
    ax.set_xlabel("n")
    ax.set_ylabel("fitness calls (successful runs)")
    ax.grid(True, which="both", axis="y", alpha=0.3)
    ax.legend(fontsize=8)
    if excluded:
        fig.text(0.01, 0.01, f"{excluded} unsuccessful runs excluded", fontsize=7)
    fig.tight_layout()
    fig.savefig(out_image)
    plt.close(fig)
