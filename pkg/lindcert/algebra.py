"""Algebraic tests on jump operators: generated algebra, anti-Hermitian span, irreducibility."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import scipy.linalg as la
from returns.maybe import Maybe, Nothing, Some

from lindcert.logging_utils import get_logger
from lindcert.operators import (
    JumpSet,
    LindbladModel,
    OperatorMatrix,
    as_operator,
    check_dim,
    dagger,
)
from lindcert.superop import HermitianBasis, unvec, vec

logger = get_logger(__name__)

DEFAULT_RANK_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class AlgebraError(RuntimeError):
    """Span closure did not stabilize within the round budget."""

    detail: str
    rounds: int
    dimension: int

    def __str__(self) -> str:  # pragma: no cover - trivial
        return f"{self.detail} (rounds={self.rounds}, dimension={self.dimension})"


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    dim: int
    generators: tuple[OperatorMatrix, ...] = ()

    def __post_init__(self) -> None:
        check_dim(self.dim)
        object.__setattr__(
            self, "generators", tuple(as_operator(g, self.dim) for g in self.generators)
        )

    @classmethod
    def with_daggers(cls, jumps: JumpSet) -> GeneratorSet:
        """{L_j, L_j†}."""
        return cls(jumps.dim, tuple(jumps) + tuple(dagger(jump) for jump in jumps))

    @classmethod
    def jumps_only(cls, jumps: JumpSet) -> GeneratorSet:
        return cls(jumps.dim, tuple(jumps))


def _extend_basis(
    basis: npt.NDArray[np.complex128],
    candidates: list[OperatorMatrix],
    rank_tol: float,
) -> npt.NDArray[np.complex128]:
    """Append to the orthonormal columns of ``basis`` the directions new in ``candidates``."""
    columns = []
    for candidate in candidates:
        vector = vec(candidate)
        norm = np.linalg.norm(vector)
        if norm > 0:
            columns.append(vector / norm)
    if not columns:
        return basis
    block = np.stack(columns, axis=1)
    if basis.shape[1]:
        block = block - basis @ (basis.conj().T @ block)
        block = block - basis @ (basis.conj().T @ block)
    left, singular_values, _ = la.svd(block, full_matrices=False)
    keep = singular_values > rank_tol * math.sqrt(block.shape[1])
    return np.concatenate([basis, left[:, keep]], axis=1)


def generated_algebra_dim(
    generators: GeneratorSet,
    max_rounds: int | None = None,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> int:
    """Dimension of the unital associative algebra generated by ``generators``.

    Seeds the span with I and the generators, then closes it under pairwise products of basis
    elements until a round adds nothing.
    """
    dim = generators.dim
    full = dim * dim
    rounds_allowed = max_rounds if max_rounds is not None else 2 * math.ceil(math.log2(full + 1)) + 4
    seed = [np.eye(dim, dtype=np.complex128), *generators.generators]
    basis = _extend_basis(np.zeros((full, 0), dtype=np.complex128), seed, rank_tol)
    fresh = basis.shape[1]
    for round_index in range(rounds_allowed):
        if basis.shape[1] == full or fresh == 0:
            logger.debug("algebra span %d/%d after %d rounds", basis.shape[1], full, round_index)
            return int(basis.shape[1])
        elements = [unvec(column, dim) for column in basis.T]
        start = len(elements) - fresh
        products = [
            a @ b
            for i, a in enumerate(elements)
            for j, b in enumerate(elements)
            if i >= start or j >= start
        ]
        size = basis.shape[1]
        basis = _extend_basis(basis, products, rank_tol)
        fresh = basis.shape[1] - size
    if basis.shape[1] == full or fresh == 0:
        return int(basis.shape[1])
    raise AlgebraError(
        "algebra span did not stabilize; check rank_tol",
        rounds=rounds_allowed,
        dimension=int(basis.shape[1]),
    )


@dataclass(frozen=True, eq=False)
class SpanReport:
    """Outcome of the anti-Hermitian span test (performed modulo the identity)."""

    spans: bool
    rank: int
    target: int
    witness: Maybe[OperatorMatrix]
    pair: Maybe[tuple[npt.NDArray[np.complex128], npt.NDArray[np.complex128]]]


def _pair_from_witness(
    witness: OperatorMatrix, tol: float
) -> tuple[OperatorMatrix, tuple[npt.NDArray[np.complex128], npt.NDArray[np.complex128]]] | None:
    """Write a rank-two witness with spectrum ±iλ as i(aa†−bb†) = |u⟩⟨v|−|v⟩⟨u|."""
    eigenvalues, vectors = la.eigh(-1j * witness)
    scale = float(np.max(np.abs(eigenvalues)))
    if scale == 0.0:
        return None
    support = np.abs(eigenvalues) > tol * scale
    if int(np.sum(support)) != 2 or abs(eigenvalues[0] + eigenvalues[-1]) > tol * scale:
        return None
    a = vectors[:, -1]
    b = vectors[:, 0]
    u = (a + b) / math.sqrt(2)
    v = 1j * (b - a) / math.sqrt(2)
    return np.outer(u, v.conj()) - np.outer(v, u.conj()), (u, v)


def spans_antihermitian(jumps: JumpSet, rank_tol: float = DEFAULT_RANK_TOL) -> SpanReport:
    """Whether span{L_j, L_j†, I} contains every anti-Hermitian matrix.

    The complex span of a †-closed set meets the anti-Hermitian matrices in the real span of the
    anti-Hermitian parts of L_j and iL_j, so the test is a real rank count in the coordinates of
    the traceless anti-Hermitian basis {i e_k}.
    """
    dim = jumps.dim
    basis = HermitianBasis.gell_mann(dim).elements[1:]
    target = dim * dim - 1
    rows = []
    for jump in jumps:
        for candidate in (jump, 1j * jump):
            part = (candidate - dagger(candidate)) / 2
            rows.append([float(np.real(np.vdot(1j * element, part))) for element in basis])
    coords = np.array(rows, dtype=np.float64).reshape(len(rows), target)
    if coords.size:
        _, singular_values, vh = la.svd(coords)
        cutoff = rank_tol * max(1.0, float(singular_values[0]))
        rank = int(np.sum(singular_values > cutoff))
        complement = vh[rank:].T
    else:
        rank = 0
        complement = np.eye(target)
    if rank == target or complement.shape[1] == 0:
        return SpanReport(True, rank, target, Nothing, Nothing)
    witnesses = [
        np.asarray(sum(w * 1j * e for w, e in zip(column, basis, strict=True)), dtype=np.complex128)
        for column in complement.T
    ]
    for witness in witnesses:
        paired = _pair_from_witness(witness, 1e-8)
        if paired is not None:
            matrix, pair = paired
            return SpanReport(False, rank, target, Some(matrix), Some(pair))
    return SpanReport(False, rank, target, Some(witnesses[0]), Nothing)


def is_irreducible(model: LindbladModel, t: float = 0.0, rank_tol: float = DEFAULT_RANK_TOL) -> bool:
    """{L_j} ∪ {iH(t) + ½ Σ_j L_j†L_j} generates the full matrix algebra."""
    drift = 1j * model.hamiltonian_at(t) + 0.5 * model.jumps.decay_operator()
    generators = GeneratorSet(model.dim, (*model.jumps, drift))
    return generated_algebra_dim(generators, rank_tol=rank_tol) == model.dim**2


@dataclass(frozen=True, slots=True)
class AlgebraReport:
    with_daggers: int
    jumps_only: int
    full: int

    @property
    def full_with_daggers(self) -> bool:
        return self.with_daggers == self.full

    @property
    def full_jumps_only(self) -> bool:
        return self.jumps_only == self.full


def algebra_report(jumps: JumpSet, rank_tol: float = DEFAULT_RANK_TOL) -> AlgebraReport:
    """Dimensions of the algebras generated by {L_j, L_j†} and by {L_j} alone."""
    return AlgebraReport(
        with_daggers=generated_algebra_dim(GeneratorSet.with_daggers(jumps), rank_tol=rank_tol),
        jumps_only=generated_algebra_dim(GeneratorSet.jumps_only(jumps), rank_tol=rank_tol),
        full=jumps.dim**2,
    )
