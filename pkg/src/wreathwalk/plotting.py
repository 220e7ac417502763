"""Static SVG line plots written next to the CSV output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams.update({
    "svg.hashsalt": "wreathwalk",
    "svg.fonttype": "none",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
})


def line_plot(path, x, series: dict, title: str, ylabel: str, xlabel: str = "n",
              logx: bool = True, errors: dict | None = None) -> None:
    """One line per entry of ``series``; optional symmetric error bars."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, ys in series.items():
        err = (errors or {}).get(label)
        if err is None:
            ax.plot(x, ys, marker="o", ms=3, label=label)
        else:
            ax.errorbar(x, ys, yerr=err, marker="o", ms=3, capsize=2, label=label)
    if logx:
        ax.set_xscale("log", base=2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if len(series) > 1:
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def band_plot(path, reports, title: str) -> None:
    """Horizontal bars from ``band_min`` to ``band_max`` per rate, each scaled by its minimum."""
    fig, ax = plt.subplots(figsize=(6.4, 0.45 * len(reports) + 1.2))
    names = [r.rate for r in reports][::-1]
    ratios = [r.band_ratio for r in reports][::-1]
    ax.barh(names, [q - 1.0 for q in ratios], left=1.0, color="tab:blue", alpha=0.7)
    ax.set_xscale("log")
    ax.set_xlabel("band max / band min")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
