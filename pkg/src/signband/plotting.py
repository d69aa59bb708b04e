"""Figure rendering for band results. Always uses the Agg backend."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["save_band_figure", "save_width_figure"]


def _clip_finite(vals, lo, hi):
    return np.clip(vals, lo, hi)


def save_band_figure(path, x, y, lower, upper, title=None):
    """Scatter of the data with the band overlaid; infinite parts clipped
    to the plot frame."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.plot(x, y, ".", color="0.55", markersize=4, label="data")
    span = y.max() - y.min() if y.size > 1 else 1.0
    lo_lim = y.min() - 0.5 * span
    hi_lim = y.max() + 0.5 * span
    ax.plot(x, _clip_finite(upper, lo_lim, hi_lim), "-", color="tab:blue",
            lw=1.5, label="upper")
    if lower is not None:
        lower = np.asarray(lower, dtype=np.float64)
        ax.plot(x, _clip_finite(lower, lo_lim, hi_lim), "-", color="tab:red",
                lw=1.5, label="lower")
    ax.set_ylim(lo_lim, hi_lim)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_width_figure(path, x, width, title=None):
    """Band width profile over the design points; infinite widths are gaps."""
    x = np.asarray(x, dtype=np.float64)
    width = np.asarray(width, dtype=np.float64)
    shown = np.where(np.isfinite(width), width, np.nan)
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(x, shown, "-", color="tab:green", lw=1.5)
    ax.set_xlabel("x")
    ax.set_ylabel("band width")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
