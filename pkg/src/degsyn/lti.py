"""LTI plant model, faulty-actuator closed-loop assembly, and system norms.

The closed loop augments the plant state x with the actuator filter state
x_F.  In terms of the normalized exogenous signals (dbar, wbar_a) it reads

    d/dt [x; x_F] = [[A, Bu], [diag(wc) K, -diag(wc)]] [x; x_F]
                    + [[Bd Wd, Bu Wa], [0, 0]] [dbar; wbar_a],
    z = [Cz, 0] [x; x_F],

with Wa = diag(1/sqrt(kappa_a)).  The H2 and H-infinity norms of this
system are computed here by two independent routes each (Lyapunov gramian
vs. frequency integral, Hamiltonian bisection vs. frequency grid) so that
synthesis certificates can be verified without trusting the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional, Sequence, Union

import numpy as np
import scipy.linalg as sla

from .errors import (
    InvalidDegradationError,
    InvalidInputError,
    SingularResolventError,
    UnstableSystemError,
)

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, typing only
    from .degradation import DegradationParams

Array = np.ndarray

#: Margin on max Re(eig) below which a matrix counts as Hurwitz.
STABILITY_MARGIN = 1e-9


def _as_matrix(name: str, value, rows: Optional[int] = None, cols: Optional[int] = None) -> Array:
    try:
        mat = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{name} is not a numeric matrix: {exc}") from exc
    if mat.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D, got shape {mat.shape}")
    if rows is not None and mat.shape[0] != rows:
        raise InvalidInputError(f"{name} has {mat.shape[0]} rows, expected {rows}")
    if cols is not None and mat.shape[1] != cols:
        raise InvalidInputError(f"{name} has {mat.shape[1]} columns, expected {cols}")
    return mat


@dataclass(frozen=True, eq=False)
class StateSpace:
    """Open-loop plant  dx/dt = A x + Bu u + Bd d,  z = Cz x + Dd d.

    The synthesis path additionally requires Dd = 0 (the closed-loop
    model has no feedthrough and the H2 norm must be finite).
    """

    A: Array
    Bu: Array
    Bd: Array
    Cz: Array
    Dd: Array

    def __post_init__(self):
        A = _as_matrix("A", self.A)
        if A.shape[0] != A.shape[1]:
            raise InvalidInputError(f"A must be square, got {A.shape}")
        nx = A.shape[0]
        Bu = _as_matrix("Bu", self.Bu, rows=nx)
        Bd = _as_matrix("Bd", self.Bd, rows=nx)
        Cz = _as_matrix("Cz", self.Cz, cols=nx)
        Dd = _as_matrix("Dd", self.Dd, rows=Cz.shape[0], cols=Bd.shape[1])
        if Bu.shape[1] < 1:
            raise InvalidInputError("need at least one control input")
        if Cz.shape[0] < 1:
            raise InvalidInputError("need at least one controlled output")
        for name, mat in (("A", A), ("Bu", Bu), ("Bd", Bd), ("Cz", Cz), ("Dd", Dd)):
            if not np.all(np.isfinite(mat)):
                raise InvalidInputError(f"{name} contains non-finite entries")
            object.__setattr__(self, name, mat)

    @property
    def nx(self) -> int:
        return self.A.shape[0]

    @property
    def nu(self) -> int:
        return self.Bu.shape[1]

    @property
    def nd(self) -> int:
        return self.Bd.shape[1]

    @property
    def nz(self) -> int:
        return self.Cz.shape[0]


@dataclass(frozen=True, eq=False)
class AugmentedClosedLoop:
    """Closed loop of plant + actuator filters, normalized exogenous inputs.

    Keeps references to the ingredients that produced it so a verification
    pass can re-derive everything from scratch.
    """

    Acl: Array
    Bcl: Array
    Ccl: Array
    sys: StateSpace
    K: Array
    deg: "DegradationParams"
    Wd: Array


@dataclass(frozen=True)
class NormReport:
    """Result of a system-norm computation."""

    kind: str  # "h2" | "hinf"
    value: float
    method: str  # "lyapunov-gramian" | "hamiltonian-bisection" | "frequency-grid"
    grid: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in ("h2", "hinf"):
            raise InvalidInputError(f"unknown norm kind {self.kind!r}")
        if self.value < 0:
            raise InvalidInputError("norm value must be nonnegative")


def is_hurwitz(sys_or_matrix: Union[StateSpace, Array], margin: float = STABILITY_MARGIN) -> bool:
    """True iff every eigenvalue of A has real part < -margin."""
    A = sys_or_matrix.A if isinstance(sys_or_matrix, StateSpace) else np.asarray(sys_or_matrix, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"A must be square, got shape {A.shape}")
    return bool(np.max(np.linalg.eigvals(A).real) < -margin)


def _normalize_wd(Wd, nd: int) -> Array:
    """Accept a scalar, diagonal vector, or diagonal matrix; return (nd, nd)."""
    W = np.asarray(Wd, dtype=float)
    if W.ndim == 0:
        W = np.eye(nd) * float(W)
    elif W.ndim == 1:
        if W.shape[0] != nd:
            raise InvalidInputError(f"Wd has {W.shape[0]} entries, expected {nd}")
        W = np.diag(W)
    elif W.ndim == 2:
        if W.shape != (nd, nd):
            raise InvalidInputError(f"Wd must be {nd}x{nd}, got {W.shape}")
        if np.any(W != np.diag(np.diag(W))):
            raise InvalidInputError("Wd must be diagonal")
    else:
        raise InvalidInputError("Wd must be a scalar, vector, or diagonal matrix")
    if np.any(np.diag(W) <= 0):
        raise InvalidInputError("Wd must be entrywise positive on the diagonal")
    return W


def assemble_closed_loop(
    sys: StateSpace,
    K: Array,
    deg: "DegradationParams",
    Wd,
) -> AugmentedClosedLoop:
    """Build the normalized closed loop for gain K and degradation deg.

    Acl = [[A, Bu], [diag(wc) K, -diag(wc)]],
    Bcl = [[Bd Wd, Bu Wa], [0, 0]]   with Wa = diag(1/sqrt(kappa_a)),
    Ccl = [Cz, 0].
    """
    K = _as_matrix("K", K, rows=sys.nu, cols=sys.nx)
    wc = np.asarray(deg.omega_c, dtype=float)
    ka = np.asarray(deg.kappa_a, dtype=float)
    if wc.shape != (sys.nu,) or ka.shape != (sys.nu,):
        raise InvalidDegradationError(
            f"degradation parameters sized for {wc.shape[0]} actuators, plant has {sys.nu}"
        )
    if np.any(wc <= 0):
        raise InvalidDegradationError("omega_c must be entrywise positive")
    if np.any(ka <= 0):
        raise InvalidDegradationError("kappa_a must be entrywise positive")
    if np.any(sys.Dd != 0):
        raise InvalidInputError("closed-loop model has no feedthrough; Dd must be zero")
    WdM = _normalize_wd(Wd, sys.nd)
    Wa = np.diag(1.0 / np.sqrt(ka))
    Acl = np.block([[sys.A, sys.Bu], [np.diag(wc) @ K, -np.diag(wc)]])
    Bcl = np.block([[sys.Bd @ WdM, sys.Bu @ Wa], [np.zeros((sys.nu, sys.nd + sys.nu))]])
    Ccl = np.hstack([sys.Cz, np.zeros((sys.nz, sys.nu))])
    return AugmentedClosedLoop(Acl=Acl, Bcl=Bcl, Ccl=Ccl, sys=sys, K=K, deg=deg, Wd=WdM)


def _check_abc(A, B, C) -> tuple[Array, Array, Array]:
    A = _as_matrix("Acl", A)
    if A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"Acl must be square, got {A.shape}")
    B = _as_matrix("Bcl", B, rows=A.shape[0])
    C = _as_matrix("Ccl", C, cols=A.shape[0])
    return A, B, C


def h2_norm(Acl, Bcl, Ccl) -> NormReport:
    """H2 norm via the controllability gramian.

    Solves Acl Wc + Wc Acl' + Bcl Bcl' = 0 (dense Bartels-Stewart) and
    returns sqrt(tr(Ccl Wc Ccl')).  Requires Acl Hurwitz.
    """
    A, B, C = _check_abc(Acl, Bcl, Ccl)
    if not is_hurwitz(A):
        raise UnstableSystemError("H2 norm is infinite for a non-Hurwitz system")
    Wc = sla.solve_continuous_lyapunov(A, -B @ B.T)
    value = float(np.sqrt(max(np.trace(C @ Wc @ C.T), 0.0)))
    return NormReport(kind="h2", value=value, method="lyapunov-gramian")


def _sigma_max(A, B, C, w: float) -> float:
    n = A.shape[0]
    return float(np.linalg.norm(C @ np.linalg.solve(1j * w * np.eye(n) - A, B), 2))


def _sigma_max_batch(A, B, C, omegas: Array) -> Array:
    """sigma_max(G(jw)) for a whole frequency grid at once."""
    n = A.shape[0]
    resolvent = 1j * omegas[:, None, None] * np.eye(n) - A
    X = np.linalg.solve(resolvent, np.broadcast_to(B, (omegas.shape[0],) + B.shape))
    G = C @ X
    return np.linalg.svd(G, compute_uv=False)[:, 0]


def _has_imaginary_eig(A, B, C, gamma: float) -> bool:
    """Imaginary-axis eigenvalue test for the H-infinity Hamiltonian."""
    H = np.block([[A, (B @ B.T) / gamma], [-(C.T @ C) / gamma, -A.T]])
    ev = np.linalg.eigvals(H)
    return bool(np.any(np.abs(ev.real) <= 1e-10 * np.maximum(1.0, np.abs(ev))))


def hinf_norm(Acl, Bcl, Ccl, tol: float = 1e-6) -> NormReport:
    """H-infinity norm by Hamiltonian-matrix bisection.

    gamma exceeds the norm iff the Hamiltonian
    [[A, B B'/gamma], [-C'C/gamma, -A']] has no imaginary-axis eigenvalue;
    bisect until the bracket is within relative tol.  The bracket is seeded
    with sigma_max(G(0)) and a 64-point coarse grid, which are always lower
    bounds.
    """
    if tol <= 0:
        raise InvalidInputError("tol must be positive")
    A, B, C = _check_abc(Acl, Bcl, Ccl)
    if not is_hurwitz(A):
        raise UnstableSystemError("H-infinity norm is infinite for a non-Hurwitz system")
    if np.linalg.norm(B) == 0.0 or np.linalg.norm(C) == 0.0:
        return NormReport(kind="hinf", value=0.0, method="hamiltonian-bisection")
    coarse = np.logspace(-4, 4, 64) * max(np.abs(np.linalg.eigvals(A)).max(), 1.0)
    lo = max(_sigma_max(A, B, C, 0.0), float(_sigma_max_batch(A, B, C, coarse).max()))
    hi = 2.0 * lo + 1e-12
    doublings = 0
    while _has_imaginary_eig(A, B, C, hi):
        hi *= 2.0
        doublings += 1
        if doublings > 64:
            raise UnstableSystemError("H-infinity bisection bracket failed to close")
    while (hi - lo) > tol * hi:
        mid = 0.5 * (lo + hi)
        if _has_imaginary_eig(A, B, C, mid):
            lo = mid
        else:
            hi = mid
    return NormReport(kind="hinf", value=0.5 * (lo + hi), method="hamiltonian-bisection")


def hinf_norm_grid(Acl, Bcl, Ccl, omegas: Optional[Sequence[float]] = None) -> NormReport:
    """H-infinity norm estimated as the max singular value over a grid.

    Independent cross-check for hinf_norm; undershoots the true norm.
    Default grid: 10^4 log-spaced points over [1e-4, 1e4] scaled by the
    spectral radius of Acl, plus w = 0.
    """
    A, B, C = _check_abc(Acl, Bcl, Ccl)
    if not is_hurwitz(A):
        raise UnstableSystemError("H-infinity norm is infinite for a non-Hurwitz system")
    if omegas is None:
        scale = max(np.abs(np.linalg.eigvals(A)).max(), 1.0)
        omegas = np.concatenate([[0.0], np.logspace(-4, 4, 10000) * scale])
    omegas = np.asarray(omegas, dtype=float)
    value = float(_sigma_max_batch(A, B, C, omegas).max())
    return NormReport(kind="hinf", value=value, method="frequency-grid", grid=(float(omegas.min()), float(omegas.max()), len(omegas)))


def h2_norm_frequency_integral(Acl, Bcl, Ccl, npts: int = 4000) -> NormReport:
    """H2 norm from (1/pi) * integral_0^inf tr(G^H G) dw on a log grid.

    Independent cross-check for h2_norm.  Head is closed with the DC value,
    tail with the 1/w^2 roll-off of a strictly proper system.
    """
    A, B, C = _check_abc(Acl, Bcl, Ccl)
    if not is_hurwitz(A):
        raise UnstableSystemError("H2 norm is infinite for a non-Hurwitz system")
    n = A.shape[0]
    scale = max(np.abs(np.linalg.eigvals(A)).max(), 1.0)
    w = np.logspace(np.log10(scale) - 5, np.log10(scale) + 5, npts)
    resolvent = 1j * w[:, None, None] * np.eye(n) - A
    X = np.linalg.solve(resolvent, np.broadcast_to(B, (npts,) + B.shape))
    G = C @ X
    f = np.sum(np.abs(G) ** 2, axis=(1, 2))  # tr(G^H G) = squared Frobenius norm
    integral = float(np.trapezoid(f, w))
    G0 = C @ np.linalg.solve(-A, B)
    integral += float(np.trace(G0.T @ G0)) * w[0]  # flat head [0, w_min]
    integral += f[-1] * w[-1]  # tail: integral of f(w_max) (w_max/w)^2
    value = float(np.sqrt(max(integral, 0.0) / np.pi))
    return NormReport(kind="h2", value=value, method="frequency-grid", grid=(float(w[0]), float(w[-1]), npts))


def frequency_response(Acl, Bcl, Ccl, omegas: Sequence[float]) -> list[Array]:
    """Evaluate G(jw) = Ccl (jwI - Acl)^{-1} Bcl at each frequency."""
    A, B, C = _check_abc(Acl, Bcl, Ccl)
    omegas = np.asarray(omegas, dtype=float)
    if omegas.ndim != 1:
        raise InvalidInputError("omegas must be a 1-D sequence")
    if not np.all(np.isfinite(omegas)) or np.any(omegas < 0):
        raise InvalidInputError("omegas must be finite and nonnegative")
    n = A.shape[0]
    out = []
    for w in omegas:
        try:
            X = np.linalg.solve(1j * w * np.eye(n) - A, B)
        except np.linalg.LinAlgError as exc:
            raise SingularResolventError(
                f"jwI - Acl is singular at w = {w:.6g} rad/s"
            ) from exc
        out.append(C @ X)
    return out
