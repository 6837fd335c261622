"""Operator algebra on dense complex matrices.

Everything in lindcert is carried by plain ``numpy`` ``complex128`` arrays: states, jump
operators, Hamiltonians and differences of states.  This module owns the structural predicates
(Hermiticity, tracelessness, positivity), the Schatten norms, the jump normalization that moves
jump traces into the Hamiltonian, and the closed family of Hamiltonian schedules that make a
``LindbladModel`` serializable.
"""

from __future__ import annotations

import bisect
import math
from collections.abc import Iterator
from dataclasses import dataclass
from functools import reduce
from typing import TypeAlias

import numpy as np
import numpy.typing as npt
import scipy.linalg as la

OperatorMatrix: TypeAlias = npt.NDArray[np.complex128]

MAX_DIM = 64
DEFAULT_TOL = 1e-10


@dataclass(frozen=True, slots=True)
class OperatorError(ValueError):
    """Structured error for malformed operators and mismatched dimensions."""

    detail: str
    expected: object | None = None
    actual: object | None = None

    def __str__(self) -> str:  # pragma: no cover - trivial
        message = self.detail
        if self.expected is not None or self.actual is not None:
            message = f"{message} (expected={self.expected}, actual={self.actual})"
        return message


def _frozen(matrix: npt.ArrayLike) -> OperatorMatrix:
    array = np.array(matrix, dtype=np.complex128, copy=True)
    array.setflags(write=False)
    return array


def check_dim(dim: int) -> int:
    """Validate a Hilbert-space dimension against the dense-method guard."""
    if dim < 1:
        raise OperatorError("dimension must be positive", expected=">= 1", actual=dim)
    if dim > MAX_DIM:
        raise OperatorError("dimension exceeds dense guard", expected=f"<= {MAX_DIM}", actual=dim)
    return dim


def as_operator(matrix: npt.ArrayLike, dim: int | None = None) -> OperatorMatrix:
    """Coerce ``matrix`` to a square complex array, optionally checking its dimension."""
    array = np.asarray(matrix, dtype=np.complex128)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise OperatorError("operator must be a square matrix", actual=array.shape)
    check_dim(array.shape[0])
    if dim is not None and array.shape[0] != dim:
        raise OperatorError("dimension mismatch", expected=dim, actual=array.shape[0])
    return array


def dagger(matrix: OperatorMatrix) -> OperatorMatrix:
    return matrix.conj().T


def _scale(matrix: OperatorMatrix) -> float:
    return max(1.0, float(np.linalg.norm(matrix)))


def is_hermitian(matrix: OperatorMatrix, tol: float = DEFAULT_TOL) -> bool:
    """Hermiticity within ``tol`` relative to the Frobenius norm."""
    return float(np.linalg.norm(matrix - dagger(matrix))) <= tol * _scale(matrix)


def is_traceless(matrix: OperatorMatrix, tol: float = DEFAULT_TOL) -> bool:
    return abs(np.trace(matrix)) <= tol * _scale(matrix)


def is_psd(matrix: OperatorMatrix, tol: float = DEFAULT_TOL) -> bool:
    """Positive semidefiniteness of a Hermitian matrix within ``tol``."""
    if not is_hermitian(matrix, tol):
        return False
    hermitian = 0.5 * (matrix + dagger(matrix))
    return float(la.eigvalsh(hermitian)[0]) >= -tol * _scale(matrix)


def is_normal(matrix: OperatorMatrix, tol: float = DEFAULT_TOL) -> bool:
    return float(np.linalg.norm(commutator(matrix, dagger(matrix)))) <= tol * _scale(matrix) ** 2


def hermitian_part(matrix: OperatorMatrix) -> OperatorMatrix:
    return 0.5 * (matrix + dagger(matrix))


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    return a @ b - b @ a


def anticommutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    return a @ b + b @ a


def hs_inner(a: OperatorMatrix, b: OperatorMatrix) -> complex:
    """Hilbert-Schmidt inner product tr(a† b)."""
    return complex(np.vdot(a, b))


def kron_all(*operators: npt.ArrayLike) -> OperatorMatrix:
    return reduce(np.kron, (np.asarray(op, dtype=np.complex128) for op in operators))


IDENTITY_2 = _frozen(np.eye(2))
SIGMA_X = _frozen([[0, 1], [1, 0]])
SIGMA_Y = _frozen([[0, -1j], [1j, 0]])
SIGMA_Z = _frozen([[1, 0], [0, -1]])
# |0><1| lowers |1> to |0>; its adjoint raises.
SIGMA_MINUS = _frozen([[0, 1], [0, 0]])
SIGMA_PLUS = _frozen([[0, 0], [1, 0]])

_PAULI = {"I": IDENTITY_2, "X": SIGMA_X, "Y": SIGMA_Y, "Z": SIGMA_Z}
_KETS = {
    "0": np.array([1, 0], dtype=np.complex128),
    "1": np.array([0, 1], dtype=np.complex128),
    "+": np.array([1, 1], dtype=np.complex128) / math.sqrt(2),
    "-": np.array([1, -1], dtype=np.complex128) / math.sqrt(2),
}


def basis_ket(index: int, dim: int) -> npt.NDArray[np.complex128]:
    vector = np.zeros(dim, dtype=np.complex128)
    vector[index] = 1.0
    return vector


def matrix_unit(i: int, j: int, dim: int) -> OperatorMatrix:
    """|i><j| in dimension ``dim``."""
    unit = np.zeros((dim, dim), dtype=np.complex128)
    unit[i, j] = 1.0
    return unit


def ket(label: str) -> npt.NDArray[np.complex128]:
    """Product qubit ket for a label over {0, 1, +, -}; ``"+1"`` is |+> ⊗ |1>."""
    if not label or any(char not in _KETS for char in label):
        raise OperatorError(f"unknown ket label {label!r}", expected="characters from 0 1 + -")
    return reduce(np.kron, (_KETS[char] for char in label))


def projector(vector: npt.ArrayLike) -> OperatorMatrix:
    vec = np.asarray(vector, dtype=np.complex128)
    return np.outer(vec, vec.conj())


def pauli_string(label: str) -> OperatorMatrix:
    """Tensor product of Pauli matrices, e.g. ``"IZ"`` for I ⊗ σᶻ."""
    if not label or any(char not in _PAULI for char in label.upper()):
        raise OperatorError(f"unknown Pauli string {label!r}", expected="characters from I X Y Z")
    return kron_all(*(_PAULI[char] for char in label.upper()))


def random_hermitian(dim: int, rng: np.random.Generator) -> OperatorMatrix:
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return hermitian_part(raw)


def random_traceless_hermitian(dim: int, rng: np.random.Generator) -> OperatorMatrix:
    matrix = random_hermitian(dim, rng)
    return matrix - np.trace(matrix) * np.eye(dim) / dim


def random_density_matrix(
    dim: int, rng: np.random.Generator, rank: int | None = None
) -> OperatorMatrix:
    """Random state from a Ginibre matrix of the given rank (full rank by default)."""
    columns = dim if rank is None else rank
    ginibre = rng.normal(size=(dim, columns)) + 1j * rng.normal(size=(dim, columns))
    state = ginibre @ dagger(ginibre)
    return state / np.trace(state)


def random_unitary(dim: int, rng: np.random.Generator) -> OperatorMatrix:
    """Haar-random unitary via QR with the diagonal phase fix."""
    ginibre = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = la.qr(ginibre)
    phases = np.diag(r) / np.abs(np.diag(r))
    return np.asarray(q * phases, dtype=np.complex128)


@dataclass(frozen=True, slots=True)
class OperatorNorms:
    """Schatten 1, 2 and ∞ norms of a matrix."""

    trace: float
    frobenius: float
    spectral: float


def operator_norms(matrix: OperatorMatrix) -> OperatorNorms:
    singular_values = la.svdvals(as_operator(matrix))
    return OperatorNorms(
        trace=float(np.sum(singular_values)),
        frobenius=float(np.sqrt(np.sum(singular_values**2))),
        spectral=float(singular_values[0]) if singular_values.size else 0.0,
    )


def trace_norm(matrix: OperatorMatrix) -> float:
    """Schatten 1-norm; Hermitian inputs use the eigenvalue route."""
    if is_hermitian(matrix, 1e-12):
        return float(np.sum(np.abs(la.eigvalsh(hermitian_part(matrix)))))
    return float(np.sum(la.svdvals(matrix)))


@dataclass(frozen=True, slots=True)
class DriveNorm:
    """Drive size: raw spectral norm and the norm after the optimal identity shift."""

    raw: float
    shifted: float


def drive_norm(matrix: OperatorMatrix, tol: float = DEFAULT_TOL) -> DriveNorm:
    raw = operator_norms(matrix).spectral
    if not is_hermitian(matrix, tol):
        return DriveNorm(raw=raw, shifted=raw)
    eigenvalues = la.eigvalsh(hermitian_part(matrix))
    return DriveNorm(raw=raw, shifted=float(eigenvalues[-1] - eigenvalues[0]) / 2.0)


@dataclass(frozen=True, eq=False)
class JumpSet:
    """Ordered jump operators {L_1, ..., L_m} sharing one dimension."""

    dim: int
    jumps: tuple[OperatorMatrix, ...] = ()

    def __post_init__(self) -> None:
        check_dim(self.dim)
        frozen = tuple(_frozen(as_operator(jump, self.dim)) for jump in self.jumps)
        object.__setattr__(self, "jumps", frozen)

    @classmethod
    def of(cls, *jumps: npt.ArrayLike, dim: int | None = None) -> JumpSet:
        if dim is None:
            if not jumps:
                raise OperatorError("empty jump set needs an explicit dimension")
            dim = as_operator(jumps[0]).shape[0]
        return cls(dim=dim, jumps=tuple(as_operator(jump) for jump in jumps))

    def __len__(self) -> int:
        return len(self.jumps)

    def __iter__(self) -> Iterator[OperatorMatrix]:
        return iter(self.jumps)

    def scaled(self, factor: float) -> JumpSet:
        return JumpSet(self.dim, tuple(factor * jump for jump in self.jumps))

    def extended(self, other: JumpSet) -> JumpSet:
        if other.dim != self.dim:
            raise OperatorError("dimension mismatch", expected=self.dim, actual=other.dim)
        return JumpSet(self.dim, self.jumps + other.jumps)

    def conjugated(self, unitary: OperatorMatrix) -> JumpSet:
        return JumpSet(self.dim, tuple(unitary @ jump @ dagger(unitary) for jump in self.jumps))

    def is_traceless(self, tol: float = DEFAULT_TOL) -> bool:
        return all(is_traceless(jump, tol) for jump in self.jumps)

    def is_hermitian(self, tol: float = DEFAULT_TOL) -> bool:
        return all(is_hermitian(jump, tol) for jump in self.jumps)

    def decay_operator(self) -> OperatorMatrix:
        """Σ_j L_j† L_j."""
        total = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for jump in self.jumps:
            total += dagger(jump) @ jump
        return total


def _check_time(t: float) -> None:
    if t < 0:
        raise OperatorError("time must be non-negative", expected=">= 0", actual=t)


@dataclass(frozen=True)
class ZeroDrive:
    """H(t) = 0."""

    dim: int

    is_constant = True

    def evaluate(self, t: float) -> OperatorMatrix:
        _check_time(t)
        return np.zeros((self.dim, self.dim), dtype=np.complex128)

    def derivative(self, t: float) -> OperatorMatrix:
        return self.evaluate(t)

    def drive_rate(self, t: float) -> float:  # noqa: ARG002
        return 0.0

    def breakpoints_between(self, s: float, t: float) -> list[float]:  # noqa: ARG002
        return []


@dataclass(frozen=True, eq=False)
class ConstantDrive:
    """Time-independent Hamiltonian."""

    hamiltonian: OperatorMatrix

    is_constant = True

    def __post_init__(self) -> None:
        matrix = as_operator(self.hamiltonian)
        if not is_hermitian(matrix):
            raise OperatorError("Hamiltonian must be Hermitian")
        object.__setattr__(self, "hamiltonian", _frozen(matrix))

    @property
    def dim(self) -> int:
        return int(self.hamiltonian.shape[0])

    def evaluate(self, t: float) -> OperatorMatrix:
        _check_time(t)
        return np.array(self.hamiltonian)

    def derivative(self, t: float) -> OperatorMatrix:
        _check_time(t)
        return np.zeros_like(self.hamiltonian)

    def drive_rate(self, t: float) -> float:  # noqa: ARG002
        return 0.0

    def breakpoints_between(self, s: float, t: float) -> list[float]:  # noqa: ARG002
        return []


@dataclass(frozen=True, eq=False)
class PiecewiseConstantDrive:
    """H(t) = segments[i] on [breakpoints[i], breakpoints[i+1]); breakpoints start at 0."""

    breakpoints: tuple[float, ...]
    segments: tuple[OperatorMatrix, ...]

    is_constant = False

    def __post_init__(self) -> None:
        points = tuple(float(point) for point in self.breakpoints)
        if not points or len(points) != len(self.segments):
            raise OperatorError(
                "one breakpoint per segment is required",
                expected=len(self.segments),
                actual=len(points),
            )
        if points[0] != 0.0 or any(b <= a for a, b in zip(points, points[1:], strict=False)):
            raise OperatorError("breakpoints must start at 0 and strictly ascend", actual=points)
        dim = as_operator(self.segments[0]).shape[0]
        segments = []
        for segment in self.segments:
            matrix = as_operator(segment, dim)
            if not is_hermitian(matrix):
                raise OperatorError("Hamiltonian segment must be Hermitian")
            segments.append(_frozen(matrix))
        object.__setattr__(self, "breakpoints", points)
        object.__setattr__(self, "segments", tuple(segments))

    @property
    def dim(self) -> int:
        return int(self.segments[0].shape[0])

    def segment_index(self, t: float) -> int:
        _check_time(t)
        return bisect.bisect_right(self.breakpoints, t) - 1

    def evaluate(self, t: float) -> OperatorMatrix:
        return np.array(self.segments[self.segment_index(t)])

    def derivative(self, t: float) -> OperatorMatrix:
        _check_time(t)
        return np.zeros((self.dim, self.dim), dtype=np.complex128)

    def drive_rate(self, t: float) -> float:  # noqa: ARG002
        return 0.0

    def breakpoints_between(self, s: float, t: float) -> list[float]:
        return [point for point in self.breakpoints if s < point < t]


@dataclass(frozen=True, eq=False)
class PhiDrive:
    """H(t) = A + cos φ(t) B + sin φ(t) C with φ(t) = 2π(1+ct)^r."""

    c: float
    r: float
    base: tuple[OperatorMatrix, OperatorMatrix, OperatorMatrix]

    is_constant = False

    def __post_init__(self) -> None:
        if not self.c > 0:
            raise OperatorError("phase acceleration c must be positive", actual=self.c)
        if not self.r > 2:
            raise OperatorError("phase exponent r must exceed 2", actual=self.r)
        if len(self.base) != 3:
            raise OperatorError("drive needs three base operators", expected=3, actual=len(self.base))
        dim = as_operator(self.base[0]).shape[0]
        frozen = []
        for term in self.base:
            matrix = as_operator(term, dim)
            if not is_hermitian(matrix):
                raise OperatorError("drive base operators must be Hermitian")
            frozen.append(_frozen(matrix))
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "base", tuple(frozen))

    @classmethod
    def counterexample(cls, c: float = 2.0, r: float = 3.0) -> PhiDrive:
        """(σʸ + cos φ σˣ + sin φ σʸ) ⊗ I on two qubits."""
        return cls(
            c=c,
            r=r,
            base=(
                np.kron(SIGMA_Y, IDENTITY_2),
                np.kron(SIGMA_X, IDENTITY_2),
                np.kron(SIGMA_Y, IDENTITY_2),
            ),
        )

    @property
    def dim(self) -> int:
        return int(self.base[0].shape[0])

    def phi(self, t: float) -> float:
        _check_time(t)
        return 2.0 * math.pi * (1.0 + self.c * t) ** self.r

    def drive_rate(self, t: float) -> float:
        """φ'(t)."""
        _check_time(t)
        return 2.0 * math.pi * self.r * self.c * (1.0 + self.c * t) ** (self.r - 1.0)

    def evaluate(self, t: float) -> OperatorMatrix:
        phase = self.phi(t)
        constant, cos_term, sin_term = self.base
        return np.asarray(
            constant + math.cos(phase) * cos_term + math.sin(phase) * sin_term,
            dtype=np.complex128,
        )

    def derivative(self, t: float) -> OperatorMatrix:
        phase = self.phi(t)
        _, cos_term, sin_term = self.base
        rate = self.drive_rate(t)
        return np.asarray(
            rate * (-math.sin(phase) * cos_term + math.cos(phase) * sin_term),
            dtype=np.complex128,
        )

    def breakpoints_between(self, s: float, t: float) -> list[float]:  # noqa: ARG002
        return []


HamiltonianSchedule: TypeAlias = ZeroDrive | ConstantDrive | PiecewiseConstantDrive | PhiDrive


@dataclass(frozen=True, eq=False)
class LindbladModel:
    """A fixed dissipator with a Hamiltonian schedule: L_t = −i[H(t), ·] + Σ_j D_{L_j}."""

    dim: int
    jumps: JumpSet
    hamiltonian: HamiltonianSchedule

    def __post_init__(self) -> None:
        check_dim(self.dim)
        if self.jumps.dim != self.dim:
            raise OperatorError("jump dimension mismatch", expected=self.dim, actual=self.jumps.dim)
        if self.hamiltonian.dim != self.dim:
            raise OperatorError(
                "Hamiltonian dimension mismatch", expected=self.dim, actual=self.hamiltonian.dim
            )

    @classmethod
    def dissipative(cls, jumps: JumpSet) -> LindbladModel:
        return cls(jumps.dim, jumps, ZeroDrive(jumps.dim))

    def hamiltonian_at(self, t: float) -> OperatorMatrix:
        return self.hamiltonian.evaluate(t)

    def with_hamiltonian(self, schedule: HamiltonianSchedule) -> LindbladModel:
        return LindbladModel(self.dim, self.jumps, schedule)

    def normalized(self) -> LindbladModel:
        """Traceless jumps with the trace shift absorbed into a constant Hamiltonian."""
        if not isinstance(self.hamiltonian, ZeroDrive | ConstantDrive):
            if self.jumps.is_traceless():
                return self
            raise OperatorError("jump normalization needs a constant Hamiltonian")
        jumps, hamiltonian = normalize_jumps(self.jumps, self.hamiltonian.evaluate(0.0))
        schedule: HamiltonianSchedule = (
            ZeroDrive(self.dim) if not np.any(hamiltonian) else ConstantDrive(hamiltonian)
        )
        return LindbladModel(self.dim, jumps, schedule)


def normalize_jumps(
    jumps: JumpSet, hamiltonian: OperatorMatrix, tol: float = DEFAULT_TOL
) -> tuple[JumpSet, OperatorMatrix]:
    """Shift every jump to be traceless and compensate in the Hamiltonian.

    L_j -> L_j − tr(L_j) I/d and H -> H + (i/2d) Σ_j (tr(L_j)* L_j − tr(L_j) L_j†), which leaves
    the generated Lindbladian unchanged.
    """
    hamiltonian = as_operator(hamiltonian, jumps.dim)
    if not is_hermitian(hamiltonian, tol):
        raise OperatorError("Hamiltonian must be Hermitian")
    dim = jumps.dim
    identity = np.eye(dim, dtype=np.complex128)
    shift = np.zeros((dim, dim), dtype=np.complex128)
    shifted = []
    for jump in jumps:
        trace = np.trace(jump)
        shift += np.conj(trace) * jump - trace * dagger(jump)
        shifted.append(jump - trace * identity / dim)
    new_hamiltonian = hermitian_part(hamiltonian + (1j / (2 * dim)) * shift)
    return JumpSet(dim, tuple(shifted)), new_hamiltonian


def dissipator_apply(jumps: JumpSet, matrix: OperatorMatrix) -> OperatorMatrix:
    """Σ_j (L_j X L_j† − ½{L_j† L_j, X})."""
    x = as_operator(matrix, jumps.dim)
    out = np.zeros_like(x)
    for jump in jumps:
        decay = dagger(jump) @ jump
        out += jump @ x @ dagger(jump) - 0.5 * anticommutator(decay, x)
    return out


def lindbladian_apply(model: LindbladModel, t: float, matrix: OperatorMatrix) -> OperatorMatrix:
    """−i[H(t), X] + D(X)."""
    x = as_operator(matrix, model.dim)
    hamiltonian = model.hamiltonian_at(t)
    return -1j * commutator(hamiltonian, x) + dissipator_apply(model.jumps, x)
