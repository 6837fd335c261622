"""Built-in models: the two two-qubit counterexamples, depolarizing noise and the 3-level ladder."""

from __future__ import annotations

import json
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from lindcert.ladder import LadderSpec, ladder_jump
from lindcert.model_file import ModelFileError, parse_matrix
from lindcert.operators import (
    IDENTITY_2,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    ConstantDrive,
    JumpSet,
    LindbladModel,
    OperatorError,
    OperatorMatrix,
    PhiDrive,
    basis_ket,
    ket,
    pauli_string,
    projector,
)

EXCITED = np.array([[0, 0], [0, 1]], dtype=np.complex128)


def ce1_jumps() -> JumpSet:
    """{(σᶻ + 2σ⁻) ⊗ I, |1⟩⟨1| ⊗ σ⁻, |1⟩⟨1| ⊗ σ⁺}: unique fixed point, yet not robust to drives."""
    return JumpSet.of(
        np.kron(SIGMA_Z + 2 * SIGMA_MINUS, IDENTITY_2),
        np.kron(EXCITED, SIGMA_MINUS),
        np.kron(EXCITED, SIGMA_PLUS),
    )


def ce1_fixed_point() -> OperatorMatrix:
    """(1/14)[[6, −2], [−2, 1]] ⊗ I."""
    return np.kron(np.array([[6, -2], [-2, 1]], dtype=np.complex128) / 14, IDENTITY_2)


def depolarizing_jumps(gamma: float = 1.0) -> JumpSet:
    root = math.sqrt(gamma)
    return JumpSet.of(root * SIGMA_X, root * SIGMA_Y, root * SIGMA_Z)


@dataclass(frozen=True, eq=False)
class Scenario:
    """A model plus the parameters of its default experiment."""

    name: str
    model: LindbladModel
    experiment: dict[str, Any] = field(default_factory=dict)
    variants: dict[str, LindbladModel] = field(default_factory=dict)


def _ce1(hamiltonian: bool = True) -> Scenario:
    jumps = ce1_jumps()
    driven = LindbladModel(4, jumps, ConstantDrive(np.kron(SIGMA_Y, IDENTITY_2)))
    bare = LindbladModel.dissipative(jumps)
    return Scenario(
        name="ce1",
        model=driven if hamiltonian else bare,
        experiment={"kind": "observable", "initials": ["+1", "+0"], "observable": "IZ", "t_end": 50.0},
        variants={"with_hamiltonian": driven, "without_hamiltonian": bare},
    )


def _ce2(r: float = 3.0, c: float = 2.0) -> Scenario:
    drive = PhiDrive.counterexample(c=c, r=r)
    return Scenario(
        name="ce2",
        model=LindbladModel(4, ce1_jumps(), drive),
        experiment={
            "kind": "envelope",
            "rho": "00",
            "sigma": "01",
            "initials": ["+1", "+0"],
            "observable": "IZ",
            "t_end": 2.0,
            "dt": 0.05,
        },
    )


def ce2_snapshot(phi: float) -> LindbladModel:
    """Frozen generator of the driven counterexample at phase φ."""
    hamiltonian = np.kron(SIGMA_Y + math.cos(phi) * SIGMA_X + math.sin(phi) * SIGMA_Y, IDENTITY_2)
    return LindbladModel(4, ce1_jumps(), ConstantDrive(hamiltonian))


def _depolarizing(gamma: float = 1.0) -> Scenario:
    return Scenario(
        name="depolarizing",
        model=LindbladModel.dissipative(depolarizing_jumps(gamma)),
        experiment={"kind": "certify", "rho": "0", "sigma": "1", "t_end": 3.0 / gamma},
    )


def _ladder3(alpha: float = 1.0, eta: float = 1.0) -> Scenario:
    spec = LadderSpec((1.0, alpha), eta)
    return Scenario(
        name="ladder3",
        model=LindbladModel.dissipative(ladder_jump(spec)),
        experiment={"kind": "certify", "alpha": alpha, "eta": eta},
    )


SCENARIOS: dict[str, Callable[..., Scenario]] = {
    "ce1": _ce1,
    "ce2": _ce2,
    "depolarizing": _depolarizing,
    "ladder3": _ladder3,
}


def scenario_build(name: str, **params: Any) -> Scenario:
    """Construct a named scenario; unknown parameters are rejected."""
    try:
        factory = SCENARIOS[name]
    except KeyError:
        raise OperatorError("unknown scenario", expected=sorted(SCENARIOS), actual=name) from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise OperatorError(f"invalid parameters for scenario {name}", actual=sorted(params)) from exc


def _inline_matrix(spec: str, dim: int) -> OperatorMatrix:
    try:
        data = json.loads(spec)
    except json.JSONDecodeError as exc:
        raise OperatorError(f"invalid inline matrix: {exc.msg}") from exc
    try:
        return parse_matrix(data, "matrix", dim)
    except ModelFileError as exc:
        raise OperatorError(f"invalid inline matrix: {exc}") from exc


def parse_state(spec: str, dim: int) -> OperatorMatrix:
    """Density matrix from a qubit label (``"+1"``, ``"00"``), a level index, ``mixed`` or JSON."""
    text = spec.strip()
    if text.startswith("["):
        return _inline_matrix(text, dim)
    if text == "mixed":
        return np.eye(dim, dtype=np.complex128) / dim
    if 2 ** len(text) == dim and all(char in "01+-" for char in text):
        return projector(ket(text))
    if text.isdigit() and int(text) < dim:
        return projector(basis_ket(int(text), dim))
    raise OperatorError(f"unknown state {spec!r} for dimension {dim}")


def parse_observable(spec: str, dim: int) -> OperatorMatrix:
    """Observable from a Pauli string (``"IZ"``), ``I`` or an inline JSON matrix."""
    text = spec.strip()
    if text.startswith("["):
        return _inline_matrix(text, dim)
    if text.upper() == "I":
        return np.eye(dim, dtype=np.complex128)
    if 2 ** len(text) == dim:
        return pauli_string(text)
    raise OperatorError(f"unknown observable {spec!r} for dimension {dim}")


__all__ = [
    "SCENARIOS",
    "Scenario",
    "ce1_fixed_point",
    "ce2_snapshot",
    "ce1_jumps",
    "depolarizing_jumps",
    "parse_observable",
    "parse_state",
    "scenario_build",
]
