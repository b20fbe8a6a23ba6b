"""Grouped degradation bar charts and gust time-response overlays."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import matplotlib

matplotlib.use("Agg")  # file output only
import matplotlib.pyplot as plt
import numpy as np

from .inputs import ReportData, SchemaError, TrajectoryData

#: figure kind -> (ReportData field, y-axis label, title)
BAR_KINDS = {
    "cutoff-bars": ("omega_c", "cutoff frequency (rad/s)", "Minimum actuator cutoff frequencies"),
    "dcgain-bars": ("xf_gain", "peak gain of x -> x_F", "Minimum actuator DC gain"),
    "noise-bars": ("noise_scale", "noise scaling 1 / sqrt(kappa)", "Maximum actuator noise scaling"),
}

FIGURE_KINDS = tuple(BAR_KINDS) + ("time-response",)


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple[str, ...]
    output: str
    log_scale: Optional[bool] = None  # None = auto (log when spread > 2 decades)

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r} (one of {FIGURE_KINDS})")


def _wants_log(values: np.ndarray, log_scale: Optional[bool]) -> bool:
    if log_scale is not None:
        return log_scale
    positive = values[values > 0]
    if positive.size == 0:
        return False
    return positive.max() / positive.min() > 100.0  # spread beyond two decades


def plot_degradation_bars(
    reports: list[ReportData],
    kind: str,
    log_scale: Optional[bool] = None,
):
    """Grouped per-actuator bars, one bar per report (e.g. H2 vs Hinf).

    Returns the matplotlib figure; the caller saves it.  All reports must
    share the same actuator labels.
    """
    if kind not in BAR_KINDS:
        raise SchemaError(f"{kind!r} is not a bar-chart kind")
    if not reports:
        raise SchemaError("at least one report is required")
    labels = reports[0].actuators
    for rep in reports[1:]:
        if rep.actuators != labels:
            raise SchemaError(
                f"actuator labels differ: {labels} vs {rep.actuators} ({rep.path})"
            )
    attr, ylabel, title = BAR_KINDS[kind]
    series = [getattr(rep, attr) for rep in reports]

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    x = np.arange(len(labels), dtype=float)
    width = 0.8 / len(reports)
    for j, (rep, values) in enumerate(zip(reports, series)):
        offset = (j - (len(reports) - 1) / 2.0) * width
        ax.bar(x + offset, values, width, label=rep.norm_kind.replace("hinf", "H-infinity").replace("h2", "H2"))
    if _wants_log(np.concatenate(series), log_scale):
        ax.set_yscale("log")
    ax.set_xticks(x)
    ax.set_xticklabels(labels)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    return fig


def plot_time_response(trajectories: dict[str, TrajectoryData]):
    """Overlay the z channels of several trajectories on a shared time base.

    Returns (figure, rms_summary) where rms_summary maps each trace label
    to the pooled RMS of its plotted z data (shown in the summary box).
    All trajectories must share identical time columns.
    """
    if not trajectories:
        raise SchemaError("at least one trajectory is required")
    items = list(trajectories.items())
    base_label, base = items[0]
    for label, traj in items[1:]:
        if traj.times.shape != base.times.shape or not np.array_equal(traj.times, base.times):
            raise SchemaError(
                f"time columns differ between {base_label} ({base.path}) and {label} ({traj.path})"
            )
    nz = base.z.shape[1]
    fig, axes = plt.subplots(nz, 1, figsize=(7.0, 2.6 * nz), sharex=True, squeeze=False)
    rms_summary = {}
    for label, traj in items:
        rms_summary[label] = float(np.sqrt(np.mean(traj.z**2)))
        for ch in range(nz):
            axes[ch, 0].plot(traj.times, traj.z[:, ch], label=label, linewidth=0.9)
    for ch in range(nz):
        axes[ch, 0].set_ylabel(base.z_labels[ch])
        axes[ch, 0].legend(loc="upper right", fontsize=8)
    axes[-1, 0].set_xlabel("time (s)")
    axes[0, 0].set_title("Time response to gust")
    summary = "\n".join(f"{label} z RMS = {v:.4g}" for label, v in rms_summary.items())
    axes[0, 0].text(
        0.02, 0.95, summary, transform=axes[0, 0].transAxes, fontsize=8,
        verticalalignment="top", bbox=dict(boxstyle="round", facecolor="white", alpha=0.8),
    )
    fig.tight_layout()
    return fig, rms_summary


def save_figure(fig, output: str, checksums: dict[str, str]) -> None:
    """Write the figure; PNG output embeds the input checksums as metadata."""
    metadata = None
    if str(output).lower().endswith(".png"):
        metadata = {f"degsyn-input:{name}": digest for name, digest in checksums.items()}
    fig.savefig(output, dpi=150, metadata=metadata)
    plt.close(fig)
