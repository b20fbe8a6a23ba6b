"""Bundled F-16 longitudinal model.

Linearized longitudinal dynamics trimmed at 10000 ft, 900 ft/s steady
level flight.  States are pitch angle, total velocity, angle of attack,
and pitch rate; controls are thrust, elevator, and leading-edge flap.
The disturbance enters the velocity channel with scaling Wd = 0.01, and
the controlled outputs (flight-path angle and velocity perturbations)
are weighted by Wz = diag(11.46, 0.1) so the target closed-loop norm is
order one.
"""

import numpy as np

from .lti import StateSpace

F16_A = np.array(
    [
        [0.0, 0.0, 0.0, 1.0],
        [-32.1699, -0.0358, -131.646, -3.1099],
        [0.0, -0.0002, -1.5333, 0.9281],
        [0.0, 0.0003, -4.6719, -1.9076],
    ]
)

F16_BU = np.array(
    [
        [0.0, 0.0, 0.0],
        [0.0016, 0.0525, 0.1574],
        [-0.0, -0.0031, 0.0008],
        [0.0, -0.4503, -0.0614],
    ]
)

F16_BD = np.array([[0.0], [1.0], [0.0], [0.0]])

#: Raw output map in physical units: flight-path angle theta - alpha, and V_t.
F16_CZ_RAW = np.array([[1.0, 0.0, -1.0, 0.0], [0.0, 1.0, 0.0, 0.0]])

F16_WZ = np.array([11.46, 0.1])
F16_WD = np.array([0.01])

F16_DD = np.zeros((2, 1))

F16_LABELS = {
    "states": ["theta", "Vt", "alpha", "q"],
    "inputs": ["T", "delta_e", "delta_lef"],
    "outputs": ["flight_path_angle", "Vt"],
    "disturbances": ["alpha_gust"],
}

#: Trim point of the nonlinear model the linearization came from.
F16_TRIM = {
    "altitude_ft": 10000.0,
    "theta_deg": 5.95,
    "Vt_ft_s": 900.0,
    "alpha_deg": 5.95,
    "q_deg_s": 7.85,
    "T_lb": 10461.84,
    "delta_e_deg": -3.82,
    "delta_lef_deg": 12.42,
}


def f16_state_space(apply_wz: bool = True) -> StateSpace:
    """The bundled plant; Wz is folded into Cz unless apply_wz=False."""
    Cz = np.diag(F16_WZ) @ F16_CZ_RAW if apply_wz else F16_CZ_RAW.copy()
    return StateSpace(A=F16_A, Bu=F16_BU, Bd=F16_BD, Cz=Cz, Dd=F16_DD)


def f16_model_dict() -> dict:
    """Model-file payload for the bundled example.

    Cz ships with Wz already folded in (so the stored matrix is the one
    the norm bound applies to); the weights used are recorded under
    trim metadata for reference.
    """
    trim = dict(F16_TRIM)
    trim["wz_applied"] = F16_WZ.tolist()
    return {
        "schema": "degsyn-model/1",
        "name": "f16-longitudinal",
        "A": F16_A.tolist(),
        "Bu": F16_BU.tolist(),
        "Bd": F16_BD.tolist(),
        "Cz": (np.diag(F16_WZ) @ F16_CZ_RAW).tolist(),
        "Dd": F16_DD.tolist(),
        "wd": F16_WD.tolist(),
        "labels": F16_LABELS,
        "trim": trim,
    }
