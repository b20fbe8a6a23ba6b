"""JSON schemas for plant models and run reports.

Both schemas are versioned and round-trip exactly: floats are emitted as
JSON numbers via repr, which preserves IEEE-754 doubles bit-for-bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from . import __version__ as _tool_version
from .degradation import DegradationParams, DegradationReport
from .errors import InvalidInputError
from .lti import NormReport, StateSpace
from .synthesis import SynthesisResult, SynthesisSpec

MODEL_SCHEMA = "degsyn-model/1"
REPORT_SCHEMA = "degsyn-report/1"


def _matrix_from_json(name: str, raw) -> np.ndarray:
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise InvalidInputError(f"{name} must be a nested (row-major) array")
    lengths = {len(r) for r in raw}
    if len(lengths) > 1:
        raise InvalidInputError(f"{name} has ragged rows: lengths {sorted(lengths)}")
    return np.asarray(raw, dtype=float)


@dataclass(frozen=True, eq=False)
class ModelFile:
    """Parsed model file: physical-unit matrices plus scalings and labels."""

    A: np.ndarray
    Bu: np.ndarray
    Bd: np.ndarray
    Cz: np.ndarray
    Dd: np.ndarray
    wd: np.ndarray  # diagonal entries of the disturbance scaling
    wz: Optional[np.ndarray] = None  # optional output weights, applied on load
    name: str = ""
    labels: dict = field(default_factory=dict)
    trim: dict = field(default_factory=dict)

    def state_space(self, apply_wz: bool = True) -> StateSpace:
        """Build the plant; `wz`, when present, is folded into Cz."""
        Cz = self.Cz
        if apply_wz and self.wz is not None:
            Cz = np.diag(self.wz) @ Cz
        return StateSpace(A=self.A, Bu=self.Bu, Bd=self.Bd, Cz=Cz, Dd=self.Dd)

    def actuator_labels(self) -> list[str]:
        labels = self.labels.get("inputs")
        if labels and len(labels) == self.Bu.shape[1]:
            return [str(x) for x in labels]
        return [f"u{i + 1}" for i in range(self.Bu.shape[1])]

    def to_dict(self) -> dict:
        out = {
            "schema": MODEL_SCHEMA,
            "name": self.name,
            "A": self.A.tolist(),
            "Bu": self.Bu.tolist(),
            "Bd": self.Bd.tolist(),
            "Cz": self.Cz.tolist(),
            "Dd": self.Dd.tolist(),
            "wd": np.asarray(self.wd, dtype=float).tolist(),
        }
        if self.wz is not None:
            out["wz"] = np.asarray(self.wz, dtype=float).tolist()
        if self.labels:
            out["labels"] = self.labels
        if self.trim:
            out["trim"] = self.trim
        return out


def model_from_dict(payload: dict) -> ModelFile:
    if not isinstance(payload, dict):
        raise InvalidInputError("model file must contain a JSON object")
    schema = payload.get("schema")
    if schema != MODEL_SCHEMA:
        raise InvalidInputError(f"unsupported model schema {schema!r} (expected {MODEL_SCHEMA})")
    matrices = {}
    for key in ("A", "Bu", "Bd", "Cz", "Dd"):
        if key not in payload:
            raise InvalidInputError(f"model file missing matrix {key!r}")
        matrices[key] = _matrix_from_json(key, payload[key])
    wd = np.atleast_1d(np.asarray(payload.get("wd", [1.0] * matrices["Bd"].shape[1]), dtype=float))
    wz = payload.get("wz")
    if wz is not None:
        wz = np.atleast_1d(np.asarray(wz, dtype=float))
        if wz.shape[0] != matrices["Cz"].shape[0]:
            raise InvalidInputError("wz must have one entry per controlled output")
    model = ModelFile(
        **matrices,
        wd=wd,
        wz=wz,
        name=str(payload.get("name", "")),
        labels=payload.get("labels", {}),
        trim=payload.get("trim", {}),
    )
    model.state_space()  # force dimension validation now
    return model


def load_model(path) -> ModelFile:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"model file {path} is not valid JSON: {exc}") from exc
    return model_from_dict(payload)


def save_model(model_dict: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(model_dict, fh, indent=2)
        fh.write("\n")


# --------------------------------------------------------------------------
# run reports
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RunReport:
    """Everything a verification pass needs to re-check a synthesis run."""

    spec: SynthesisSpec
    status: str
    objective: Optional[float]
    K: Optional[np.ndarray]
    V: Optional[np.ndarray]
    Y: Optional[np.ndarray]
    Q_blocks: dict[str, np.ndarray]
    deg: Optional[DegradationParams]
    degradation_report: Optional[DegradationReport]
    verification: Optional[NormReport]
    validation: Optional[dict]
    timing_s: float
    diagnostics: dict = field(default_factory=dict)
    tool_version: str = _tool_version

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "schema": REPORT_SCHEMA,
            "tool_version": self.tool_version,
            "spec": {
                "norm_kind": self.spec.norm_kind,
                "gamma": self.spec.gamma,
                "lambda_a": self.spec.lambda_a,
                "lambda_wc": self.spec.lambda_wc,
                "lambda_xf": self.spec.lambda_xf,
                "wd": np.atleast_1d(np.asarray(self.spec.Wd, dtype=float)).tolist(),
                "eps_lmi": self.spec.eps_lmi,
                "solver_tol": self.spec.solver_tol,
                "h2_bound_convention": self.spec.h2_bound_convention,
                "solver": self.spec.solver,
            },
            "status": self.status,
            "objective": self.objective,
            "timing_s": self.timing_s,
            "diagnostics": _jsonable(self.diagnostics),
        }
        if self.K is not None:
            out["K"] = self.K.tolist()
            out["V"] = self.V.tolist()
            out["Y"] = self.Y.tolist()
            out["Q_blocks"] = {k: v.tolist() for k, v in self.Q_blocks.items()}
            out["degradation"] = {
                "omega_c": self.deg.omega_c.tolist(),
                "kappa_a": self.deg.kappa_a.tolist(),
                "gamma_xf": self.deg.gamma_xf,
            }
        if self.degradation_report is not None:
            out["degradation_report"] = self.degradation_report.to_dict()
        if self.verification is not None:
            out["verification"] = {
                "kind": self.verification.kind,
                "value": self.verification.value,
                "method": self.verification.method,
            }
        if self.validation is not None:
            out["validation"] = self.validation
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def report_from_result(
    spec: SynthesisSpec,
    result: SynthesisResult,
    degradation_report: Optional[DegradationReport],
    validation: Optional[dict],
    timing_s: float,
) -> RunReport:
    return RunReport(
        spec=spec,
        status=result.status,
        objective=result.objective,
        K=result.K,
        V=result.V,
        Y=result.Y,
        Q_blocks=dict(result.Q_blocks),
        deg=result.deg,
        degradation_report=degradation_report,
        verification=result.verification,
        validation=validation,
        timing_s=timing_s,
        diagnostics=dict(result.diagnostics),
    )


def report_to_result(report: RunReport) -> SynthesisResult:
    """Reconstruct a SynthesisResult from a parsed report for re-validation."""
    return SynthesisResult(
        status=report.status,
        norm_kind=report.spec.norm_kind,
        gamma=report.spec.gamma,
        K=report.K,
        V=report.V,
        Y=report.Y,
        Q_blocks=report.Q_blocks,
        deg=report.deg,
        objective=report.objective,
        verification=report.verification,
        diagnostics=report.diagnostics,
    )


def report_from_dict(payload: dict) -> RunReport:
    if payload.get("schema") != REPORT_SCHEMA:
        raise InvalidInputError(
            f"unsupported report schema {payload.get('schema')!r} (expected {REPORT_SCHEMA})"
        )
    sp = payload["spec"]
    spec = SynthesisSpec(
        norm_kind=sp["norm_kind"],
        gamma=sp["gamma"],
        lambda_a=sp["lambda_a"],
        lambda_wc=sp["lambda_wc"],
        lambda_xf=sp["lambda_xf"],
        Wd=np.asarray(sp["wd"], dtype=float),
        eps_lmi=sp.get("eps_lmi"),
        solver_tol=sp.get("solver_tol", 1e-7),
        h2_bound_convention=sp.get("h2_bound_convention", "trace"),
        solver=sp.get("solver", "CLARABEL"),
    )
    deg = None
    K = V = Y = None
    q_blocks: dict[str, np.ndarray] = {}
    if "K" in payload:
        K = np.asarray(payload["K"], dtype=float)
        V = np.asarray(payload["V"], dtype=float)
        Y = np.asarray(payload["Y"], dtype=float)
        q_blocks = {k: np.asarray(v, dtype=float) for k, v in payload.get("Q_blocks", {}).items()}
        d = payload["degradation"]
        deg = DegradationParams(
            omega_c=np.asarray(d["omega_c"], dtype=float),
            kappa_a=np.asarray(d["kappa_a"], dtype=float),
            gamma_xf=d["gamma_xf"],
        )
    verification = None
    if "verification" in payload:
        v = payload["verification"]
        verification = NormReport(kind=v["kind"], value=v["value"], method=v["method"])
    deg_report = None
    if "degradation_report" in payload:
        deg_report = DegradationReport.from_dict(payload["degradation_report"])
    return RunReport(
        spec=spec,
        status=payload["status"],
        objective=payload.get("objective"),
        K=K,
        V=V,
        Y=Y,
        Q_blocks=q_blocks,
        deg=deg,
        degradation_report=deg_report,
        verification=verification,
        validation=payload.get("validation"),
        timing_s=payload.get("timing_s", 0.0),
        diagnostics=payload.get("diagnostics", {}),
        tool_version=payload.get("tool_version", _tool_version),
    )


def load_report(path) -> RunReport:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read report {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"report {path} is not valid JSON: {exc}") from exc
    return report_from_dict(payload)


def save_report(report: RunReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2)
        fh.write("\n")
