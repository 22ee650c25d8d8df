"""SVG figures of computed decay against reference rate curves."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# fixed salt and no date keep the SVG output byte-reproducible
matplotlib.rcParams["svg.hashsalt"] = "pgreedy"
_SVG_META = {"Date": None, "Creator": None}


def decay_plot(path, n, values, curves, logx: bool, ylabel: str, title: str) -> None:
    """Write one figure: data as a solid blue line, each ``(label, color, y)`` curve dotted."""
    fig, ax = plt.subplots(figsize=(5, 4))
    n = np.asarray(n, dtype=float)
    ax.plot(n, values, "-", color="tab:blue", lw=1.5, label="computed")
    for label, color, y in curves:
        ax.plot(n, y, ":", color=color, lw=2, label=label)
    ax.set_yscale("log")
    if logx:
        ax.set_xscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)
