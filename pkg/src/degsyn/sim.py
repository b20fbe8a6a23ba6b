"""Time-domain simulation of the gust response.

The gust disturbance is d(t) = 15 wn(t) + sin(0.075 t) with wn unit
Gaussian white noise sampled at the simulation rate.  Integration uses
exact zero-order-hold discretization (matrix exponential of the
augmented [A B; 0 0] block), so results carry no integrator-order error.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla

from .errors import DivergenceError, InvalidInputError

Array = np.ndarray


@dataclass(frozen=True)
class DisturbanceSpec:
    """Gust model parameters; defaults follow the study case."""

    white_noise_gain: float = 15.0
    sinusoid_amplitude: float = 1.0
    sinusoid_freq: float = 0.075  # rad/s
    seed: int = 0
    sample_rate: float = 100.0  # Hz

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise InvalidInputError("sample_rate must be positive")
        if self.sample_rate <= 2.0 * self.sinusoid_freq / (2.0 * np.pi):
            raise InvalidInputError("sample_rate too low to resolve the sinusoid")

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Uniformly sampled closed-loop response."""

    times: Array  # (N,)
    states: Array  # (N, nx + nu)
    outputs: Array  # (N, nz)
    d: Array  # (N, nd) applied disturbance
    wa: Array  # (N, nu) applied actuator noise

    def __post_init__(self):
        n = self.times.shape[0]
        for name in ("states", "outputs", "d", "wa"):
            if getattr(self, name).shape[0] != n:
                raise InvalidInputError(f"{name} length does not match times")
        dts = np.diff(self.times)
        if n > 1 and (np.any(dts <= 0) or not np.allclose(dts, dts[0], rtol=1e-9, atol=1e-12)):
            raise InvalidInputError("times must be strictly increasing with uniform step")


def generate_disturbance(spec: DisturbanceSpec, duration: float) -> tuple[Array, Array]:
    """Sample d[k] = gain*wn[k] + amp*sin(freq*t_k); deterministic per seed.

    Returns (times, d) with N = round(duration * sample_rate) + 1 samples.
    """
    if duration <= 0:
        raise InvalidInputError("duration must be positive")
    n = int(round(duration * spec.sample_rate)) + 1
    times = np.arange(n) * spec.dt
    rng = np.random.default_rng(spec.seed)
    wn = rng.standard_normal(n)
    d = spec.white_noise_gain * wn + spec.sinusoid_amplitude * np.sin(spec.sinusoid_freq * times)
    return times, d


def zoh_discretize(A: Array, B: Array, dt: float) -> tuple[Array, Array]:
    """Exact ZOH discretization via the augmented matrix exponential."""
    if dt <= 0:
        raise InvalidInputError("dt must be positive")
    n, m = A.shape[0], B.shape[1]
    M = np.zeros((n + m, n + m))
    M[:n, :n] = A * dt
    M[:n, n:] = B * dt
    E = sla.expm(M)
    return E[:n, :n], E[:n, n:]


def simulate(
    Acl: Array,
    Bcl: Array,
    Ccl: Array,
    d: Array,
    wa: Array,
    x0: Optional[Array] = None,
    dt: float = 0.01,
) -> Trajectory:
    """Propagate x[k+1] = Ad x[k] + Bd [d[k]; wa[k]] under exact ZOH.

    d is (N, nd) and wa is (N, nu) in the closed loop's input ordering;
    the trajectory holds N states with states[0] = x0 and the input at the
    final sample unused.  Raises DivergenceError identifying the first
    step at which the state leaves the finite range.
    """
    Acl = np.asarray(Acl, dtype=float)
    Bcl = np.asarray(Bcl, dtype=float)
    Ccl = np.asarray(Ccl, dtype=float)
    d = np.atleast_2d(np.asarray(d, dtype=float))
    wa = np.atleast_2d(np.asarray(wa, dtype=float))
    if d.shape[0] == 1 and d.shape[1] > 1:
        d = d.T
    if wa.shape[0] == 1 and wa.shape[1] > 1:
        wa = wa.T
    if d.shape[0] != wa.shape[0]:
        raise InvalidInputError("d and wa must have the same number of samples")
    n = Acl.shape[0]
    if d.shape[1] + wa.shape[1] != Bcl.shape[1]:
        raise InvalidInputError(
            f"inputs supply {d.shape[1]}+{wa.shape[1]} channels, Bcl expects {Bcl.shape[1]}"
        )
    x0 = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float)
    if x0.shape != (n,):
        raise InvalidInputError(f"x0 must have shape ({n},)")

    Ad, Bd = zoh_discretize(Acl, Bcl, dt)
    N = d.shape[0]
    u = np.hstack([d, wa])
    states = np.empty((N, n))
    x = x0.copy()
    with np.errstate(over="ignore", invalid="ignore"):  # divergence is detected, not fatal
        for k in range(N):
            if not np.all(np.isfinite(x)):
                raise DivergenceError(step=k, time=k * dt)
            states[k] = x
            x = Ad @ x + Bd @ u[k]
    outputs = states @ Ccl.T
    times = np.arange(N) * dt
    return Trajectory(times=times, states=states, outputs=outputs, d=d, wa=wa)


@dataclass(frozen=True)
class ResponseMetrics:
    rms: tuple[float, ...]  # per z channel, transient skipped
    peak: tuple[float, ...]  # per z channel, whole horizon
    rms_total: float  # pooled over channels and time
    t_skip: float
    settled: bool  # final-window RMS not above the post-skip RMS

    def to_dict(self) -> dict:
        return {
            "rms": list(self.rms),
            "peak": list(self.peak),
            "rms_total": self.rms_total,
            "t_skip": self.t_skip,
            "settled": self.settled,
        }


def response_metrics(traj: Trajectory, skip_fraction: float = 0.1) -> ResponseMetrics:
    """Per-channel RMS (after discarding the initial transient) and peaks."""
    if traj.outputs.shape[0] == 0:
        raise InvalidInputError("empty trajectory")
    if not 0.0 <= skip_fraction < 1.0:
        raise InvalidInputError("skip_fraction must be in [0, 1)")
    n = traj.outputs.shape[0]
    start = int(n * skip_fraction)
    z = traj.outputs[start:]
    rms = tuple(float(v) for v in np.sqrt(np.mean(z**2, axis=0)))
    peak = tuple(float(v) for v in np.max(np.abs(traj.outputs), axis=0))
    rms_total = float(np.sqrt(np.mean(z**2)))
    tail = traj.outputs[int(n * 0.9):]
    settled = bool(np.sqrt(np.mean(tail**2)) <= 2.0 * rms_total + 1e-300)
    return ResponseMetrics(
        rms=rms,
        peak=peak,
        rms_total=rms_total,
        t_skip=float(traj.times[start]),
        settled=settled,
    )


def trajectory_to_csv(traj: Trajectory, path, nx: int) -> None:
    """Write the trajectory with an explicit header.

    Columns: time, x_1..x_nx, xF_1..xF_nu, z_1..z_nz, d_1..d_nd,
    wa_1..wa_nu.  Values use repr formatting, which round-trips IEEE-754
    doubles exactly.
    """
    nu = traj.states.shape[1] - nx
    header = (
        ["time"]
        + [f"x_{i + 1}" for i in range(nx)]
        + [f"xF_{i + 1}" for i in range(nu)]
        + [f"z_{i + 1}" for i in range(traj.outputs.shape[1])]
        + [f"d_{i + 1}" for i in range(traj.d.shape[1])]
        + [f"wa_{i + 1}" for i in range(traj.wa.shape[1])]
    )
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for k in range(traj.times.shape[0]):
            row = np.concatenate(
                [[traj.times[k]], traj.states[k], traj.outputs[k], traj.d[k], traj.wa[k]]
            )
            writer.writerow([repr(float(v)) for v in row])
