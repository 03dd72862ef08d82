"""Device calibration files: loading, validation, and readout error handling.

A device spec is a JSON document:

    {
      "device_name": "...",
      "calibration_date": "YYYY-MM-DD",
      "qubits": [
        {"id": 0, "t1_us": ..., "t2_us": ..., "pulse_duration_ns": ...,
         "p_meas1_prep0": ..., "p_meas0_prep1": ..., "gate_error": ...},
        ...
      ]
    }

T1/T2 are in microseconds, the pulse duration in nanoseconds; gate_error is
the vendor-reported error rate, stored verbatim and unused by the noise model.
Snapshots for three public devices (rome, bogota, aspen8) ship with the
package and load via ``bundled_device``.

Readout error is a 2x2 confusion matrix

    M = [[1 - p_meas1_prep0, p_meas0_prep1],
         [p_meas1_prep0, 1 - p_meas0_prep1]]

applied to the ideal outcome distribution; mitigation inverts M and clips the
result back into [0, 1].
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .noise import NoiseParams

BUNDLED_DEVICES = ("rome", "bogota", "aspen8")


class DeviceSpecError(ValueError):
    """Raised when a device spec file is malformed; the message names the
    offending field."""


@dataclass(frozen=True)
class QubitSpec:
    id: int
    t1_us: float
    t2_us: float
    pulse_duration_ns: float
    p_meas1_prep0: float
    p_meas0_prep1: float
    gate_error: float


@dataclass(frozen=True)
class DeviceSpec:
    device_name: str
    calibration_date: str
    qubits: tuple[QubitSpec, ...]
    warnings: tuple[str, ...] = ()

    def qubit(self, qubit_id: int) -> QubitSpec:
        for q in self.qubits:
            if q.id == qubit_id:
                return q
        raise KeyError(
            f"device {self.device_name!r} has no qubit {qubit_id}; "
            f"available ids: {[q.id for q in self.qubits]}"
        )


def _require(obj: dict, field: str, kind, where: str):
    if field not in obj:
        raise DeviceSpecError(f"{where}: missing field {field!r}")
    value = obj[field]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DeviceSpecError(f"{where}.{field}: expected a number, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise DeviceSpecError(f"{where}.{field}: must be finite")
    elif not isinstance(value, kind):
        raise DeviceSpecError(
            f"{where}.{field}: expected {kind.__name__}, got {type(value).__name__}"
        )
    return value


def parse_device_spec(doc: dict, source: str = "device spec") -> DeviceSpec:
    """Validate a parsed JSON document; collects advisory warnings (e.g.
    T2 > 2*T1, which is unphysical for this noise model) without failing."""
    if not isinstance(doc, dict):
        raise DeviceSpecError(f"{source}: top level must be an object")
    name = _require(doc, "device_name", str, source)
    date = _require(doc, "calibration_date", str, source)
    if not re.fullmatch(r"\d{4}-\d{2}-\d{2}", date):
        raise DeviceSpecError(
            f"{source}.calibration_date: expected YYYY-MM-DD, got {date!r}"
        )
    raw_qubits = _require(doc, "qubits", list, source)
    if not raw_qubits:
        raise DeviceSpecError(f"{source}.qubits: must contain at least one qubit")
    qubits = []
    warnings = []
    seen: set[int] = set()
    for i, q in enumerate(raw_qubits):
        where = f"{source}.qubits[{i}]"
        if not isinstance(q, dict):
            raise DeviceSpecError(f"{where}: expected an object")
        qid = _require(q, "id", int, where)
        if qid in seen:
            raise DeviceSpecError(f"{where}.id: duplicate qubit id {qid}")
        seen.add(qid)
        t1 = _require(q, "t1_us", float, where)
        t2 = _require(q, "t2_us", float, where)
        pulse = _require(q, "pulse_duration_ns", float, where)
        p10 = _require(q, "p_meas1_prep0", float, where)
        p01 = _require(q, "p_meas0_prep1", float, where)
        gerr = _require(q, "gate_error", float, where)
        if t1 <= 0 or t2 <= 0:
            raise DeviceSpecError(f"{where}: T1 and T2 must be positive")
        if pulse < 0:
            raise DeviceSpecError(f"{where}.pulse_duration_ns: must be >= 0")
        for pname, p in (("p_meas1_prep0", p10), ("p_meas0_prep1", p01)):
            if not 0.0 <= p <= 1.0:
                raise DeviceSpecError(f"{where}.{pname}: must lie in [0, 1]")
        if t2 > 2.0 * t1:
            warnings.append(
                f"qubit {qid}: T2 = {t2} us exceeds 2*T1 = {2 * t1} us"
            )
        qubits.append(QubitSpec(qid, t1, t2, pulse, p10, p01, gerr))
    return DeviceSpec(name, date, tuple(qubits), tuple(warnings))


def load_device_spec(path) -> DeviceSpec:
    """Load and validate a device spec JSON file."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DeviceSpecError(
                f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
                f"{exc.msg}"
            ) from None
    return parse_device_spec(doc, source=str(path))


def bundled_device(name: str) -> DeviceSpec:
    """Load one of the packaged calibration snapshots (rome, bogota, aspen8)."""
    if name not in BUNDLED_DEVICES:
        raise DeviceSpecError(
            f"unknown bundled device {name!r}; choose from {BUNDLED_DEVICES}"
        )
    ref = resources.files("noisy_euler").joinpath(f"data/{name}.json")
    doc = json.loads(ref.read_text(encoding="utf-8"))
    return parse_device_spec(doc, source=f"bundled:{name}")


def noise_params_for(qubit: QubitSpec) -> NoiseParams:
    """Per-pulse damping probabilities for a qubit: microseconds/nanoseconds
    are converted to seconds before forming t_star / T ratios."""
    return NoiseParams.from_times(
        qubit.t1_us * 1e-6, qubit.t2_us * 1e-6, qubit.pulse_duration_ns * 1e-9
    )


def confusion_matrix(p_meas1_prep0: float, p_meas0_prep1: float) -> np.ndarray:
    """Readout confusion matrix acting on (p_measure_0, p_measure_1)."""
    for name, p in (
        ("p_meas1_prep0", p_meas1_prep0),
        ("p_meas0_prep1", p_meas0_prep1),
    ):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1]")
    return np.array(
        [
            [1.0 - p_meas1_prep0, p_meas0_prep1],
            [p_meas1_prep0, 1.0 - p_meas0_prep1],
        ]
    )


def apply_readout_error(
    p0: float, p_meas1_prep0: float, p_meas0_prep1: float
) -> float:
    """Probability of measuring 0 after the confusion matrix corrupts an
    ideal outcome distribution (p0, 1 - p0)."""
    if not 0.0 <= p0 <= 1.0:
        raise ValueError("p0 must lie in [0, 1]")
    m = confusion_matrix(p_meas1_prep0, p_meas0_prep1)
    return float(m[0, 0] * p0 + m[0, 1] * (1.0 - p0))


def mitigate_readout(
    p0_measured: float, p_meas1_prep0: float, p_meas0_prep1: float
) -> tuple[float, bool]:
    """Invert the confusion matrix on a measured distribution.

    Returns (p0_mitigated, clipped): the inverse can land outside [0, 1] for
    shot-sampled inputs, in which case the value is clipped and flagged.
    Raises a numerical error when the matrix is singular
    (p_meas1_prep0 + p_meas0_prep1 = 1).
    """
    if not 0.0 <= p0_measured <= 1.0:
        raise ValueError("p0_measured must lie in [0, 1]")
    m = confusion_matrix(p_meas1_prep0, p_meas0_prep1)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det) < 1e-12:
        raise np.linalg.LinAlgError(
            "readout confusion matrix is singular "
            f"(p_meas1_prep0 + p_meas0_prep1 = "
            f"{p_meas1_prep0 + p_meas0_prep1}); cannot mitigate"
        )
    vec = np.array([p0_measured, 1.0 - p0_measured])
    p0 = float(np.linalg.solve(m, vec)[0])
    clipped = not 0.0 <= p0 <= 1.0
    return min(max(p0, 0.0), 1.0), clipped
