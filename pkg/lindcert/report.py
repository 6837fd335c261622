"""Deterministic JSON and CSV rendering of analysis results."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from returns.result import Failure, Result, Success


def jsonable(value: Any) -> Any:
    """Convert numpy values, complex numbers and tuples into plain JSON types.

    Complex numbers become ``[re, im]``; non-finite floats become ``None``.
    """
    if isinstance(value, Mapping):
        return {str(key): jsonable(item) for key, item in value.items()}
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, list | tuple):
        return [jsonable(item) for item in value]
    if isinstance(value, bool | np.bool_):
        return bool(value)
    if isinstance(value, int | np.integer):
        return int(value)
    if isinstance(value, complex | np.complexfloating):
        return [jsonable(float(value.real)), jsonable(float(value.imag))]
    if isinstance(value, float | np.floating):
        number = float(value)
        return number if math.isfinite(number) else None
    return value


def inputs_digest(payload: Any) -> str:
    """SHA-256 of the canonical JSON encoding of ``payload``."""
    canonical = json.dumps(jsonable(payload), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass
class Report:
    """Command echo, inputs digest, results and warnings of one CLI run."""

    command: list[str]
    inputs_digest: str
    results: dict[str, Any] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": list(self.command),
            "inputs_digest": self.inputs_digest,
            "results": jsonable(self.results),
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_csv(
        self,
        header: Sequence[str],
        rows: Sequence[Sequence[Any]],
        notes: Mapping[str, Any] | None = None,
    ) -> str:
        return format_csv(header, rows, self.command, self.inputs_digest, self.warnings, notes)


def _cell(value: Any) -> str:
    if isinstance(value, bool | np.bool_):
        return "true" if value else "false"
    if isinstance(value, int | np.integer):
        return str(int(value))
    if isinstance(value, float | np.floating):
        return format(float(value), ".17g")
    if value is None:
        return ""
    return str(value)


def format_csv(
    header: Sequence[str],
    rows: Sequence[Sequence[Any]],
    command: Sequence[str],
    digest: str,
    warnings: Sequence[str] = (),
    notes: Mapping[str, Any] | None = None,
) -> str:
    """CSV with ``# command:`` and ``# inputs_digest:`` header lines; floats with 17 digits.

    Header and data fields are quoted when they contain separators, so inline matrices in column
    names survive.
    """
    buffer = io.StringIO()
    buffer.write(f"# command: {' '.join(command)}\n# inputs_digest: {digest}\n")
    for key, value in (notes or {}).items():
        buffer.write(f"# {key}: {_cell(value)}\n")
    for warning in warnings:
        buffer.write(f"# warning: {warning}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([_cell(value) for value in row] for row in rows)
    return buffer.getvalue()


def write_text(text: str, target: Path) -> Result[Path, Exception]:
    """Write a rendered report to ``target``."""
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
    except Exception as exc:
        return Failure(exc)
    return Success(target)
