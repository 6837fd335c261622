"""JSON model files: jumps and Hamiltonian schedule of a ``LindbladModel``.

Matrices are nested lists of ``[re, im]`` pairs. The Hamiltonian is a tagged object::

    {"type": "zero"}
    {"type": "constant", "matrix": M}
    {"type": "piecewise", "breakpoints": [0.0, 1.5], "segments": [M0, M1]}
    {"type": "phi_drive", "c": 2.0, "r": 3.0, "base": [A, B, C]}   # base optional for dim 4
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
from returns.result import Failure, Result, Success

from lindcert.operators import (
    ConstantDrive,
    HamiltonianSchedule,
    JumpSet,
    LindbladModel,
    OperatorError,
    OperatorMatrix,
    PhiDrive,
    PiecewiseConstantDrive,
    ZeroDrive,
)

SCHEDULE_TYPES = ("zero", "constant", "piecewise", "phi_drive")


@dataclass(frozen=True, slots=True)
class ModelFileError(ValueError):
    """Malformed model file; ``path`` locates the offending field (e.g. ``jumps[1][0][2]``)."""

    path: str
    reason: str

    def __str__(self) -> str:  # pragma: no cover - trivial
        return f"{self.path}: {self.reason}"


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, int | float):
        raise ModelFileError(path, "expected a number")
    return float(value)


def _field(data: Mapping[str, Any], key: str, path: str) -> Any:
    if key not in data:
        raise ModelFileError(f"{path}.{key}" if path else key, "missing field")
    return data[key]


def parse_matrix(value: Any, path: str, dim: int) -> OperatorMatrix:
    if not isinstance(value, list) or len(value) != dim:
        raise ModelFileError(path, f"expected {dim} rows")
    out = np.zeros((dim, dim), dtype=np.complex128)
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != dim:
            raise ModelFileError(f"{path}[{i}]", f"expected {dim} entries")
        for j, entry in enumerate(row):
            where = f"{path}[{i}][{j}]"
            if not isinstance(entry, list) or len(entry) != 2:
                raise ModelFileError(where, "expected an [re, im] pair")
            out[i, j] = complex(_number(entry[0], f"{where}[0]"), _number(entry[1], f"{where}[1]"))
    return out


def _schedule(data: Any, dim: int) -> HamiltonianSchedule:
    if not isinstance(data, dict):
        raise ModelFileError("hamiltonian", "expected an object")
    kind = _field(data, "type", "hamiltonian")
    if kind not in SCHEDULE_TYPES:
        raise ModelFileError("hamiltonian.type", f"expected one of {', '.join(SCHEDULE_TYPES)}")
    try:
        if kind == "zero":
            return ZeroDrive(dim)
        if kind == "constant":
            return ConstantDrive(parse_matrix(_field(data, "matrix", "hamiltonian"), "hamiltonian.matrix", dim))
        if kind == "piecewise":
            points = _field(data, "breakpoints", "hamiltonian")
            segments = _field(data, "segments", "hamiltonian")
            if not isinstance(points, list) or not isinstance(segments, list):
                raise ModelFileError("hamiltonian", "breakpoints and segments must be lists")
            return PiecewiseConstantDrive(
                tuple(_number(p, f"hamiltonian.breakpoints[{i}]") for i, p in enumerate(points)),
                tuple(
                    parse_matrix(m, f"hamiltonian.segments[{i}]", dim) for i, m in enumerate(segments)
                ),
            )
        c = _number(_field(data, "c", "hamiltonian"), "hamiltonian.c")
        r = _number(_field(data, "r", "hamiltonian"), "hamiltonian.r")
        if "base" not in data:
            if dim != 4:
                raise ModelFileError("hamiltonian.base", "required unless dim is 4")
            return PhiDrive.counterexample(c=c, r=r)
        base = data["base"]
        if not isinstance(base, list) or len(base) != 3:
            raise ModelFileError("hamiltonian.base", "expected three matrices")
        matrices = [parse_matrix(m, f"hamiltonian.base[{i}]", dim) for i, m in enumerate(base)]
        return PhiDrive(c=c, r=r, base=(matrices[0], matrices[1], matrices[2]))
    except OperatorError as exc:
        raise ModelFileError("hamiltonian", str(exc)) from exc


def _parse(data: Any) -> LindbladModel:
    if not isinstance(data, dict):
        raise ModelFileError("<root>", "expected a JSON object")
    dim_value = _field(data, "dim", "")
    if isinstance(dim_value, bool) or not isinstance(dim_value, int) or dim_value < 1:
        raise ModelFileError("dim", "expected a positive integer")
    jumps_value = _field(data, "jumps", "")
    if not isinstance(jumps_value, list):
        raise ModelFileError("jumps", "expected a list of matrices")
    jumps = [parse_matrix(m, f"jumps[{i}]", dim_value) for i, m in enumerate(jumps_value)]
    schedule = _schedule(data.get("hamiltonian", {"type": "zero"}), dim_value)
    try:
        return LindbladModel(dim_value, JumpSet(dim_value, tuple(jumps)), schedule)
    except OperatorError as exc:
        raise ModelFileError("<root>", str(exc)) from exc


def parse_model(data: Any) -> Result[LindbladModel, ModelFileError]:
    """Validate a decoded model document."""
    try:
        return Success(_parse(data))
    except ModelFileError as exc:
        return Failure(exc)


def read_model(path: Path) -> Result[LindbladModel, ModelFileError]:
    """Read and validate a model file."""
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        return Failure(ModelFileError(str(path), f"cannot read file: {exc.strerror or exc}"))
    except json.JSONDecodeError as exc:
        return Failure(ModelFileError(str(path), f"invalid JSON at line {exc.lineno}: {exc.msg}"))
    return parse_model(data)


def matrix_to_list(matrix: OperatorMatrix) -> list[list[list[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(matrix)]


def schedule_to_dict(schedule: HamiltonianSchedule) -> dict[str, Any]:
    if isinstance(schedule, ZeroDrive):
        return {"type": "zero"}
    if isinstance(schedule, ConstantDrive):
        return {"type": "constant", "matrix": matrix_to_list(schedule.hamiltonian)}
    if isinstance(schedule, PiecewiseConstantDrive):
        return {
            "type": "piecewise",
            "breakpoints": list(schedule.breakpoints),
            "segments": [matrix_to_list(m) for m in schedule.segments],
        }
    return {
        "type": "phi_drive",
        "c": schedule.c,
        "r": schedule.r,
        "base": [matrix_to_list(m) for m in schedule.base],
    }


def model_to_dict(model: LindbladModel) -> dict[str, Any]:
    return {
        "dim": model.dim,
        "jumps": [matrix_to_list(jump) for jump in model.jumps],
        "hamiltonian": schedule_to_dict(model.hamiltonian),
    }


def dumps_model(model: LindbladModel) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def write_model(model: LindbladModel, path: Path) -> Result[Path, ModelFileError]:
    """Serialize ``model`` to ``path``; floats use the shortest round-trip repr."""
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dumps_model(model), encoding="utf-8")
    except OSError as exc:
        return Failure(ModelFileError(str(path), f"cannot write file: {exc.strerror or exc}"))
    return Success(path)
