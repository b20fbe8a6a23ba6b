"""Readers for the degsyn report and trajectory file formats."""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass

import numpy as np

REPORT_SCHEMA = "degsyn-report/1"


class SchemaError(Exception):
    """Input file does not match the expected degsyn schema."""


def sha256_of(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass(frozen=True)
class ReportData:
    """The degradation table of one synthesis report, verbatim."""

    path: str
    norm_kind: str
    actuators: list[str]
    omega_c: np.ndarray
    xf_gain: np.ndarray
    noise_scale: np.ndarray
    checksum: str


def load_report(path) -> ReportData:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read report {path}: {exc}") from exc
    if payload.get("schema") != REPORT_SCHEMA:
        raise SchemaError(f"{path}: schema {payload.get('schema')!r}, expected {REPORT_SCHEMA}")
    try:
        rows = payload["degradation_report"]["rows"]
        return ReportData(
            path=str(path),
            norm_kind=payload["spec"]["norm_kind"],
            actuators=[r["actuator"] for r in rows],
            omega_c=np.array([r["omega_c"] for r in rows]),
            xf_gain=np.array([r["xf_gain"] for r in rows]),
            noise_scale=np.array([r["noise_scale"] for r in rows]),
            checksum=sha256_of(path),
        )
    except KeyError as exc:
        raise SchemaError(f"{path}: missing report field {exc}") from exc


@dataclass(frozen=True)
class TrajectoryData:
    path: str
    times: np.ndarray
    z: np.ndarray  # (N, nz)
    z_labels: list[str]
    checksum: str


def load_trajectory(path) -> TrajectoryData:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            data = np.array([[float(v) for v in row] for row in reader])
    except (OSError, StopIteration, ValueError) as exc:
        raise SchemaError(f"cannot read trajectory {path}: {exc}") from exc
    if not header or header[0] != "time":
        raise SchemaError(f"{path}: first column must be 'time', got {header[:1]}")
    z_cols = [i for i, name in enumerate(header) if name.startswith("z_")]
    if not z_cols:
        raise SchemaError(f"{path}: no z_* columns found")
    return TrajectoryData(
        path=str(path),
        times=data[:, 0],
        z=data[:, z_cols],
        z_labels=[header[i] for i in z_cols],
        checksum=sha256_of(path),
    )
