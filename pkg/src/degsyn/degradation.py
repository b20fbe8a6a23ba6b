"""Actuator fault model and per-actuator degradation metrics.

A partially failed actuator is modeled as a unit-DC-gain first-order lag
between commanded and delivered control plus additive noise:

    d/dt x_F = -diag(wc) x_F + diag(wc) u,      u_hat = x_F + w_a,

with w_a = diag(1/sqrt(kappa_a)) wbar_a for a normalized noise wbar_a.
Larger degradation therefore means smaller wc (less bandwidth), smaller
tr(V'V) with V = diag(wc) K (less DC authority), and smaller kappa_a
(more noise).  The report assembles the three per-actuator columns used
to quantify maximum admissible degradation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidDegradationError, InvalidInputError
from .lti import StateSpace

Array = np.ndarray


@dataclass(frozen=True, eq=False)
class DegradationParams:
    """Per-actuator cutoffs wc, noise scalings kappa_a, DC-gain budget."""

    omega_c: Array
    kappa_a: Array
    gamma_xf: float

    def __post_init__(self):
        wc = np.atleast_1d(np.asarray(self.omega_c, dtype=float))
        ka = np.atleast_1d(np.asarray(self.kappa_a, dtype=float))
        if wc.ndim != 1 or ka.ndim != 1 or wc.shape != ka.shape:
            raise InvalidDegradationError("omega_c and kappa_a must be vectors of equal length")
        if np.any(wc <= 0) or not np.all(np.isfinite(wc)):
            raise InvalidDegradationError("omega_c must be finite and entrywise positive")
        if np.any(ka <= 0) or not np.all(np.isfinite(ka)):
            raise InvalidDegradationError("kappa_a must be finite and entrywise positive")
        if self.gamma_xf < 0:
            raise InvalidDegradationError("gamma_xf must be nonnegative")
        object.__setattr__(self, "omega_c", wc)
        object.__setattr__(self, "kappa_a", ka)
        object.__setattr__(self, "gamma_xf", float(self.gamma_xf))

    @property
    def nu(self) -> int:
        return self.omega_c.shape[0]

    @property
    def noise_scaling(self) -> Array:
        """Wa diagonal, 1/sqrt(kappa_a) per actuator."""
        return 1.0 / np.sqrt(self.kappa_a)


@dataclass(frozen=True)
class FaultSignalBounds:
    """Descriptive fault-signal bounds: noise 2-norm bound gamma_a and
    conceptual actuator DC gain gamma_u.

    These document the fault model; the optimization itself works with
    (omega_c, kappa_a, gamma_xf), and gamma_a maps to 1/sqrt(kappa_a)
    under the normalized-signal convention.
    """

    gamma_a: float
    gamma_u: float

    def __post_init__(self):
        if self.gamma_a < 0 or self.gamma_u < 0:
            raise InvalidInputError("fault signal bounds must be nonnegative")


@dataclass(frozen=True)
class DegradationReportRow:
    actuator: str
    omega_c: float
    xf_gain: float  # peak gain of the map from plant state to x_F_i
    noise_scale: float  # 1/sqrt(kappa_a_i)


@dataclass(frozen=True)
class DegradationReport:
    rows: tuple[DegradationReportRow, ...]
    gamma_xf: float
    objective: float

    def to_dict(self) -> dict:
        return {
            "rows": [
                {
                    "actuator": r.actuator,
                    "omega_c": r.omega_c,
                    "xf_gain": r.xf_gain,
                    "noise_scale": r.noise_scale,
                }
                for r in self.rows
            ],
            "gamma_xf": self.gamma_xf,
            "objective": self.objective,
        }

    @staticmethod
    def from_dict(d: dict) -> "DegradationReport":
        rows = tuple(
            DegradationReportRow(
                actuator=r["actuator"],
                omega_c=r["omega_c"],
                xf_gain=r["xf_gain"],
                noise_scale=r["noise_scale"],
            )
            for r in d["rows"]
        )
        return DegradationReport(rows=rows, gamma_xf=d["gamma_xf"], objective=d["objective"])


def filter_dynamics(deg: DegradationParams) -> StateSpace:
    """State space of the actuator filter bank: nu decoupled unit-DC lags.

    A_F = -diag(wc), B_F = diag(wc), C_F = I, no disturbance input.
    """
    wc = deg.omega_c
    nu = wc.shape[0]
    return StateSpace(
        A=-np.diag(wc),
        Bu=np.diag(wc),
        Bd=np.zeros((nu, 0)),
        Cz=np.eye(nu),
        Dd=np.zeros((nu, 0)),
    )


def actuator_channel_gain(
    deg: DegradationParams,
    V: Array,
    i: int,
    grid_points: int = 10000,
) -> float:
    """Peak gain of the map x -> x_F_i, i.e. sup_w ||e_i' (jwI + diag(wc))^-1 V||_2.

    For this first-order structure the supremum sits at w = 0 and equals
    the 2-norm of row i of K = diag(wc)^-1 V.  The analytic value is
    returned after confirming it against a log-spaced frequency grid
    (the grid may undershoot but never exceed the peak).
    """
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != deg.nu:
        raise InvalidInputError(f"V must have {deg.nu} rows, got shape {V.shape}")
    if not 0 <= i < deg.nu:
        raise InvalidInputError(f"actuator index {i} out of range [0, {deg.nu})")
    wc_i = deg.omega_c[i]
    row = V[i]
    analytic = float(np.linalg.norm(row / wc_i, 2))
    # grid check: |e_i' (jwI + diag(wc))^-1 V| = ||row||_2 / |jw + wc_i|.
    # The window is anchored at the channel's own cutoff so the DC peak is
    # resolved even when the cutoffs span many decades.
    w = np.logspace(np.log10(wc_i) - 4, np.log10(max(np.max(deg.omega_c), 1.0)) + 4, grid_points)
    grid = float(np.max(np.linalg.norm(row, 2) / np.abs(1j * w + wc_i)))
    if grid > analytic + 1e-6:
        raise InvalidInputError(
            f"channel-gain grid value {grid} exceeds analytic peak {analytic}"
        )
    return analytic


def degradation_report(
    deg: DegradationParams,
    V: Array,
    objective: float,
    actuator_labels: Optional[Sequence[str]] = None,
) -> DegradationReport:
    """Assemble the per-actuator degradation table plus aggregates."""
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != deg.nu:
        raise InvalidInputError(f"V must have {deg.nu} rows, got shape {V.shape}")
    if actuator_labels is None:
        actuator_labels = [f"u{i + 1}" for i in range(deg.nu)]
    if len(actuator_labels) != deg.nu:
        raise InvalidInputError("one actuator label per channel required")
    noise = deg.noise_scaling
    rows = tuple(
        DegradationReportRow(
            actuator=str(actuator_labels[i]),
            omega_c=float(deg.omega_c[i]),
            xf_gain=actuator_channel_gain(deg, V, i),
            noise_scale=float(noise[i]),
        )
        for i in range(deg.nu)
    )
    return DegradationReport(rows=rows, gamma_xf=deg.gamma_xf, objective=float(objective))
