"""PNG rendering of fidelity curves."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# strip version and date so identical data gives identical files
_PNG_METADATA = {"Software": None}


def plot_curves(curves, path, title: str = "", xlabel: str = "t", asymptotes=None) -> None:
    """Plot ``(label, t, fidelity)`` curves and save a PNG.

    ``asymptotes`` optionally maps a label to its long-time limit, drawn dashed.
    """
    fig, ax = plt.subplots(figsize=(6, 4), dpi=100)
    try:
        for label, t, f in curves:
            (line,) = ax.plot(t, f, label=label, lw=1.5)
            if asymptotes and asymptotes.get(label) is not None:
                ax.axhline(asymptotes[label], color=line.get_color(), ls="--", lw=0.8)
        ax.set_xlabel(xlabel)
        ax.set_ylabel("fidelity")
        ax.set_title(title, fontsize=10)
        ax.legend(fontsize=8, frameon=False)
        fig.tight_layout()
        fig.savefig(path, format="png", metadata=_PNG_METADATA)
    finally:
        plt.close(fig)
