"""Superoperators as d²×d² matrices acting on column-stacked operators.

vec(A X B) = (Bᵀ ⊗ A) vec(X), so left multiplication by A is ``I ⊗ A`` and right multiplication
by B is ``Bᵀ ⊗ I``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import scipy.linalg as la

from lindcert.logging_utils import get_logger, log_warning
from lindcert.operators import (
    JumpSet,
    LindbladModel,
    OperatorError,
    OperatorMatrix,
    as_operator,
    check_dim,
    dagger,
    hermitian_part,
    is_psd,
    matrix_unit,
    trace_norm,
)
from lindcert.workers import parallel_map

logger = get_logger(__name__)

RealMatrix = npt.NDArray[np.float64]


def vec(matrix: OperatorMatrix) -> npt.NDArray[np.complex128]:
    return np.asarray(matrix, dtype=np.complex128).reshape(-1, order="F")


def unvec(vector: npt.ArrayLike, dim: int) -> OperatorMatrix:
    return np.asarray(vector, dtype=np.complex128).reshape((dim, dim), order="F")


@dataclass(frozen=True, eq=False)
class SuperMatrix:
    """Matrix of a linear map on d×d operators in the column-stacking convention."""

    dim: int
    matrix: npt.NDArray[np.complex128]

    def __post_init__(self) -> None:
        check_dim(self.dim)
        matrix = np.array(self.matrix, dtype=np.complex128, copy=True)
        size = self.dim * self.dim
        if matrix.shape != (size, size):
            raise OperatorError("superoperator shape mismatch", expected=(size, size), actual=matrix.shape)
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    def apply(self, operator: OperatorMatrix) -> OperatorMatrix:
        return unvec(self.matrix @ vec(as_operator(operator, self.dim)), self.dim)

    def adjoint(self) -> SuperMatrix:
        """Adjoint with respect to the Hilbert-Schmidt inner product."""
        return SuperMatrix(self.dim, self.matrix.conj().T)

    def __add__(self, other: SuperMatrix) -> SuperMatrix:
        return SuperMatrix(self.dim, self.matrix + other.matrix)

    def __sub__(self, other: SuperMatrix) -> SuperMatrix:
        return SuperMatrix(self.dim, self.matrix - other.matrix)

    def __matmul__(self, other: SuperMatrix) -> SuperMatrix:
        return SuperMatrix(self.dim, self.matrix @ other.matrix)

    def scaled(self, factor: complex) -> SuperMatrix:
        return SuperMatrix(self.dim, factor * self.matrix)


def identity_superoperator(dim: int) -> SuperMatrix:
    return SuperMatrix(dim, np.eye(dim * dim, dtype=np.complex128))


def commutator_superoperator(hamiltonian: OperatorMatrix) -> SuperMatrix:
    """−i[H, ·]."""
    h = as_operator(hamiltonian)
    dim = h.shape[0]
    identity = np.eye(dim, dtype=np.complex128)
    return SuperMatrix(dim, -1j * (np.kron(identity, h) - np.kron(h.T, identity)))


def dissipator_superoperator(jumps: JumpSet) -> SuperMatrix:
    dim = jumps.dim
    identity = np.eye(dim, dtype=np.complex128)
    total = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for jump in jumps:
        decay = dagger(jump) @ jump
        total += np.kron(jump.conj(), jump)
        total -= 0.5 * np.kron(identity, decay)
        total -= 0.5 * np.kron(decay.T, identity)
    return SuperMatrix(dim, total)


def dissipator_adjoint_superoperator(jumps: JumpSet) -> SuperMatrix:
    """D†(Y) = Σ_j (L_j† Y L_j − ½{L_j† L_j, Y})."""
    return dissipator_superoperator(jumps).adjoint()


def identity_projector(dim: int) -> SuperMatrix:
    """Δ(x) = x − tr(x) I/d."""
    identity = vec(np.eye(dim, dtype=np.complex128))
    return SuperMatrix(dim, np.eye(dim * dim) - np.outer(identity, identity) / dim)


def build_superoperator(model: LindbladModel, t: float) -> SuperMatrix:
    """Matrix of L_t = −i[H(t), ·] + D."""
    return commutator_superoperator(model.hamiltonian_at(t)) + dissipator_superoperator(model.jumps)


def dtilde_superoperator(jumps: JumpSet, tol: float = 1e-10) -> SuperMatrix:
    """D̃ = Δ ∘ (D + D†)/2 ∘ Δ for traceless jumps."""
    if not jumps.is_traceless(tol):
        raise OperatorError("jumps must be traceless; apply normalize_jumps first")
    dissipator = dissipator_superoperator(jumps)
    symmetric = (dissipator + dissipator.adjoint()).scaled(0.5)
    delta = identity_projector(jumps.dim)
    return delta @ symmetric @ delta


@dataclass(frozen=True, eq=False)
class HermitianBasis:
    """Hilbert-Schmidt orthonormal basis of the d² dimensional real space of Hermitian matrices."""

    dim: int
    elements: tuple[OperatorMatrix, ...]

    @classmethod
    def gell_mann(cls, dim: int) -> HermitianBasis:
        """Normalized generalized Gell-Mann matrices with I/√d first."""
        check_dim(dim)
        elements: list[OperatorMatrix] = [np.eye(dim, dtype=np.complex128) / math.sqrt(dim)]
        for j in range(dim):
            for k in range(j + 1, dim):
                elements.append((matrix_unit(j, k, dim) + matrix_unit(k, j, dim)) / math.sqrt(2))
                elements.append(1j * (matrix_unit(j, k, dim) - matrix_unit(k, j, dim)) / math.sqrt(2))
        for level in range(1, dim):
            diagonal = np.zeros(dim, dtype=np.complex128)
            diagonal[:level] = 1.0
            diagonal[level] = -level
            elements.append(np.diag(diagonal) / math.sqrt(level * (level + 1)))
        return cls(dim, tuple(elements))

    @classmethod
    def ladder_ordered(cls, dim: int) -> HermitianBasis:
        """Diagonal units, then per distance l the symmetric and antisymmetric off-diagonal chains."""
        check_dim(dim)
        elements: list[OperatorMatrix] = [matrix_unit(j, j, dim) for j in range(dim)]
        for distance in range(1, dim):
            pairs = [(j, j + distance) for j in range(dim - distance)]
            elements.extend(
                (matrix_unit(j, k, dim) + matrix_unit(k, j, dim)) / math.sqrt(2) for j, k in pairs
            )
            elements.extend(
                1j * (matrix_unit(j, k, dim) - matrix_unit(k, j, dim)) / math.sqrt(2) for j, k in pairs
            )
        return cls(dim, tuple(elements))

    def matrix(self) -> npt.NDArray[np.complex128]:
        """Columns are vec(e_i)."""
        return np.stack([vec(element) for element in self.elements], axis=1)

    def coordinates(self, operator: OperatorMatrix) -> RealMatrix:
        return np.real(self.matrix().conj().T @ vec(operator))

    def operator(self, coordinates: npt.ArrayLike) -> OperatorMatrix:
        return unvec(self.matrix() @ np.asarray(coordinates, dtype=np.complex128), self.dim)


def build_dtilde(jumps: JumpSet, basis: HermitianBasis, tol: float = 1e-10) -> RealMatrix:
    """Real matrix ⟨e_i, D̃ e_j⟩ of D̃ in a Hermitian basis."""
    if basis.dim != jumps.dim:
        raise OperatorError("basis dimension mismatch", expected=jumps.dim, actual=basis.dim)
    frame = basis.matrix()
    dtilde = dtilde_superoperator(jumps, tol)
    return np.real(frame.conj().T @ dtilde.matrix @ frame)


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    """Eigenvalues, second eigenvalue and fixed-point structure of a generator."""

    eigenvalues: npt.NDArray[np.complex128]
    lambda2: complex | None
    lambda2_pair: bool
    gap: float
    has_nonzero: bool
    fixed_point_count: int
    fixed_points: tuple[OperatorMatrix, ...]
    fixed_point_psd: tuple[bool, ...]


def _second_eigenvalue(
    eigenvalues: npt.NDArray[np.complex128], scale: float
) -> tuple[complex | None, bool]:
    if scale == 0.0:
        return None, False
    nonzero = [index for index, value in enumerate(eigenvalues) if abs(value) > 1e-9 * scale]
    if not nonzero:
        return None, False
    tie = 1e-12 * max(1.0, scale)
    best_real = max(eigenvalues[index].real for index in nonzero)
    tied = [index for index in nonzero if eigenvalues[index].real >= best_real - tie]
    chosen = min(tied, key=lambda index: (-abs(eigenvalues[index].imag), index))
    value = complex(eigenvalues[chosen])
    pair = abs(value.imag) > tie and any(
        abs(eigenvalues[index] - value.conjugate()) <= 1e-9 * scale for index in tied if index != chosen
    )
    return value, pair


def _hermitian_kernel(kernel: npt.NDArray[np.complex128], dim: int) -> list[OperatorMatrix]:
    """Orthonormal Hermitian basis of a †-closed kernel given by complex column vectors."""
    candidates = []
    for column in kernel.T:
        matrix = unvec(column, dim)
        candidates.append(hermitian_part(matrix))
        candidates.append(hermitian_part(-1j * matrix))
    if not candidates:
        return []
    # Hermitian matrices as real vectors: real part and imaginary part stacked.
    real_rows = np.array([np.concatenate([vec(c).real, vec(c).imag]) for c in candidates])
    _, singular_values, vh = la.svd(real_rows, full_matrices=False)
    rank = int(np.sum(singular_values > 1e-8 * singular_values[0])) if singular_values.size else 0
    size = dim * dim
    return [unvec(row[:size] + 1j * row[size:], dim) for row in vh[:rank]]


def _trace_one_representatives(
    basis: list[OperatorMatrix],
) -> list[OperatorMatrix]:
    if not basis:
        return []
    traces = np.array([np.trace(element).real for element in basis])
    weight = float(traces @ traces)
    if weight < 1e-20:
        return basis
    representatives = [sum(t * b for t, b in zip(traces / weight, basis, strict=True))]
    # Traceless complement of the trace direction inside the kernel.
    complement = la.null_space(traces.reshape(1, -1))
    for column in complement.T:
        representatives.append(sum(c * b for c, b in zip(column, basis, strict=True)))
    return [np.asarray(rep, dtype=np.complex128) for rep in representatives]


def _spectrum_report(operator: SuperMatrix, tol: float) -> SpectrumReport:
    dim = operator.dim
    eigenvalues = la.eigvals(operator.matrix)
    singular_values = la.svdvals(operator.matrix)
    sigma_max = float(singular_values[0])
    if sigma_max == 0.0:
        kernel = np.eye(dim * dim, dtype=np.complex128)
    else:
        kernel = la.null_space(operator.matrix, rcond=tol)
    hermitian = _hermitian_kernel(kernel, dim)
    fixed = _trace_one_representatives(hermitian)
    psd = tuple(
        bool(abs(np.trace(point) - 1.0) < 1e-8 and is_psd(point, 1e-8)) for point in fixed
    )
    lambda2, pair = _second_eigenvalue(eigenvalues, float(np.linalg.norm(operator.matrix, 2)))
    return SpectrumReport(
        eigenvalues=eigenvalues,
        lambda2=lambda2,
        lambda2_pair=pair,
        gap=0.0 if lambda2 is None else max(0.0, -lambda2.real),
        has_nonzero=lambda2 is not None,
        fixed_point_count=len(hermitian),
        fixed_points=tuple(fixed),
        fixed_point_psd=psd,
    )


def fixed_points(operator: SuperMatrix, tol: float = 1e-9) -> SpectrumReport:
    """Kernel of a Lindbladian matrix with Hermitian, trace-normalized representatives."""
    if tol <= 0:
        raise OperatorError("fixed-point tolerance must be positive", actual=tol)
    return _spectrum_report(operator, tol)


def spectral_gap(operator: SuperMatrix, tol: float = 1e-9) -> SpectrumReport:
    """λ₂ is the nonzero eigenvalue with the largest real part; gap = −Re λ₂."""
    report = _spectrum_report(operator, tol)
    if not report.has_nonzero:
        log_warning(logger, "superoperator has no nonzero eigenvalue; gap reported as 0")
    return report


@dataclass(frozen=True, eq=False)
class NormEstimate:
    """Bracket lower ≤ ‖S‖₁→₁ ≤ upper with the best pure input found."""

    lower: float
    upper: float
    state: npt.NDArray[np.complex128]
    restarts: int


def _polar_unitary(matrix: OperatorMatrix) -> OperatorMatrix:
    left, _, right = la.svd(matrix)
    return np.asarray(left @ right, dtype=np.complex128)


def _ascend_pure_state(
    operator: SuperMatrix,
    start: npt.NDArray[np.complex128],
    max_iter: int,
) -> tuple[float, npt.NDArray[np.complex128]]:
    """Sign-iteration ascent of ψ ↦ ‖S(ψψ†)‖₁ on the unit sphere.

    With U the polar factor of S(ψψ†) the objective is locally ⟨ψ|G|ψ⟩, G = herm(S†(U)); moving
    ψ to the top eigenvector of G never decreases the objective.
    """
    adjoint = operator.adjoint()
    psi = start / np.linalg.norm(start)
    value = trace_norm(operator.apply(np.outer(psi, psi.conj())))
    for _ in range(max_iter):
        image = operator.apply(np.outer(psi, psi.conj()))
        gradient = hermitian_part(adjoint.apply(_polar_unitary(image)))
        _, vectors = la.eigh(gradient)
        candidate = vectors[:, -1]
        candidate_value = trace_norm(operator.apply(np.outer(candidate, candidate.conj())))
        if candidate_value <= value + 1e-13 * max(1.0, value):
            break
        psi, value = candidate, candidate_value
    return value, psi


def estimate_1to1_norm(
    operator: SuperMatrix,
    restarts: int,
    *,
    seed: int = 0,
    threads: int | None = None,
    max_iter: int = 200,
) -> NormEstimate:
    """Lower estimate of the induced trace norm from optimized pure-state inputs."""
    if restarts < 1:
        raise OperatorError("restarts must be at least 1", actual=restarts)
    dim = operator.dim
    rng = np.random.default_rng(seed)
    starts = [rng.normal(size=dim) + 1j * rng.normal(size=dim) for _ in range(restarts)]
    results = parallel_map(lambda start: _ascend_pure_state(operator, start, max_iter), starts, threads)
    best_value, best_state = results[0]
    for value, state in results[1:]:
        if value > best_value:
            best_value, best_state = value, state
    upper = math.sqrt(dim) * float(np.linalg.norm(operator.matrix, 2))
    return NormEstimate(lower=best_value, upper=upper, state=best_state, restarts=restarts)
