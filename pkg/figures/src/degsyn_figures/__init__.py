"""Figure regeneration from degsyn report JSON and trajectory CSV files.

These scripts only read the data files; they never recompute any control
quantities.  Input checksums are echoed into the figure metadata so a
rendered figure can be traced back to the exact files it came from.
"""

__version__ = "0.1.0"

from .inputs import ReportData, TrajectoryData, sha256_of
from .plots import BAR_KINDS, FigureSpec, plot_degradation_bars, plot_time_response

__all__ = [
    "__version__",
    "BAR_KINDS",
    "FigureSpec",
    "ReportData",
    "TrajectoryData",
    "plot_degradation_bars",
    "plot_time_response",
    "sha256_of",
]
