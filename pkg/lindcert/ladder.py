"""Ladder dissipators L = √η Σ_j α_j |j−1⟩⟨j| and the block form of their D̃.

In the ladder-ordered Hermitian basis D̃ splits into P·B₀·P on the diagonal sector and, for each
distance l ≥ 1, two copies of a tridiagonal B_l (symmetric and antisymmetric chains).
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import scipy.linalg as la

from lindcert.logging_utils import get_logger, timed
from lindcert.operators import JumpSet, OperatorError, check_dim, matrix_unit
from lindcert.workers import parallel_map

logger = get_logger(__name__)

RealMatrix = npt.NDArray[np.float64]

MAX_SCAN_DIM = 16

FAMILIES: dict[str, Callable[[int, int, float], float]] = {
    "ho": lambda j, _d, gamma: math.sqrt(gamma * j),
    "am": lambda j, d, gamma: math.sqrt(gamma * j * (d - j)),
    "ul": lambda _j, _d, gamma: math.sqrt(gamma),
}


@dataclass(frozen=True, slots=True)
class LadderSpec:
    """Coefficients α₁..α_{d−1} (positive) and overall rate η."""

    alphas: tuple[float, ...]
    eta: float = 1.0

    def __post_init__(self) -> None:
        alphas = tuple(float(a) for a in self.alphas)
        if not alphas:
            raise OperatorError("a ladder needs at least one coefficient")
        if any(not a > 0 for a in alphas):
            raise OperatorError("ladder coefficients must be positive", actual=alphas)
        if not self.eta > 0:
            raise OperatorError("ladder rate must be positive", actual=self.eta)
        check_dim(len(alphas) + 1)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "eta", float(self.eta))

    @property
    def dim(self) -> int:
        return len(self.alphas) + 1

    @classmethod
    def from_family(cls, family: str, dim: int, gamma: float = 1.0) -> LadderSpec:
        """Harmonic oscillator (ho), angular momentum (am) or uniform (ul) coefficients."""
        try:
            rule = FAMILIES[family.lower()]
        except KeyError:
            raise OperatorError("unknown ladder family", expected=sorted(FAMILIES), actual=family) from None
        if dim < 2:
            raise OperatorError("ladder dimension must be at least 2", actual=dim)
        return cls(tuple(rule(j, dim, gamma) for j in range(1, dim)), 1.0)

    @classmethod
    def from_complex(cls, alphas: Sequence[complex], eta: float = 1.0) -> LadderSpec:
        """Complex coefficients reduce to their moduli by a diagonal unitary gauge."""
        return cls(tuple(abs(a) for a in alphas), eta)


def ladder_jump(spec: LadderSpec) -> JumpSet:
    dim = spec.dim
    jump = sum(
        (alpha * matrix_unit(j - 1, j, dim) for j, alpha in enumerate(spec.alphas, start=1)),
        np.zeros((dim, dim), dtype=np.complex128),
    )
    return JumpSet.of(math.sqrt(spec.eta) * jump)


@dataclass(frozen=True, eq=False)
class LadderBlocks:
    b0: RealMatrix
    pb0p: RealMatrix
    b: tuple[RealMatrix, ...]


def _padded(spec: LadderSpec) -> list[float]:
    """α₀ = 0, α₁..α_{d−1}, then zeros up to index 2d."""
    return [0.0, *spec.alphas] + [0.0] * (spec.dim + 1)


def ladder_blocks(spec: LadderSpec) -> LadderBlocks:
    dim = spec.dim
    a = _padded(spec)
    scale = -0.5 * spec.eta
    b0 = np.zeros((dim, dim))
    for k in range(dim):
        b0[k, k] = 2 * a[k] ** 2
        if k + 1 < dim:
            b0[k, k + 1] = b0[k + 1, k] = -a[k + 1] ** 2
    b0 *= scale
    projector = np.eye(dim) - np.ones((dim, dim)) / dim
    blocks = []
    for distance in range(1, dim):
        size = dim - distance
        block = np.zeros((size, size))
        for k in range(size):
            block[k, k] = a[k] ** 2 + a[k + distance] ** 2
            if k + 1 < size:
                block[k, k + 1] = block[k + 1, k] = -a[k + 1] * a[k + 1 + distance]
        blocks.append(scale * block)
    return LadderBlocks(b0=b0, pb0p=projector @ b0 @ projector, b=tuple(blocks))


def _diagonal_sector(blocks: LadderBlocks) -> tuple[npt.NDArray[np.float64], int]:
    """Eigenvalues of P·B₀·P and the index of the all-ones (structural) eigenvector."""
    eigenvalues, vectors = la.eigh(blocks.pb0p)
    ones = np.ones(blocks.pb0p.shape[0]) / math.sqrt(blocks.pb0p.shape[0])
    structural = int(np.argmax(np.abs(vectors.T @ ones)))
    return eigenvalues, structural


def ladder_eigenvalues(spec: LadderSpec) -> npt.NDArray[np.float64]:
    """All d² eigenvalues of D̃, sorted ascending."""
    blocks = ladder_blocks(spec)
    diagonal, _ = _diagonal_sector(blocks)
    values = [diagonal]
    for block in blocks.b:
        eig = la.eigvalsh(block)
        values.extend([eig, eig])
    return np.sort(np.concatenate(values))


def ladder_mu2(spec: LadderSpec) -> float:
    """Largest eigenvalue of D̃ once the identity direction is removed."""
    blocks = ladder_blocks(spec)
    diagonal, structural = _diagonal_sector(blocks)
    candidates = [float(v) for i, v in enumerate(diagonal) if i != structural]
    candidates.extend(float(la.eigvalsh(block)[-1]) for block in blocks.b)
    return max(candidates)


@dataclass(frozen=True, slots=True)
class FamilyScan:
    family: str
    gamma: float
    rows: tuple[tuple[int, float], ...]
    crossover: int | None


def family_scan(
    family: str, d_max: int, gamma: float = 1.0, *, threads: int | None = None
) -> FamilyScan:
    """μ₂ for d = 2..d_max; ``crossover`` is the first d with μ₂ ≥ 0."""
    if not 2 <= d_max <= MAX_SCAN_DIM:
        raise OperatorError("scan dimension out of range", expected=f"2..{MAX_SCAN_DIM}", actual=d_max)
    dims = list(range(2, d_max + 1))
    with timed(logger, f"{family} ladder scan to d={d_max}"):
        values = parallel_map(
            lambda d: ladder_mu2(LadderSpec.from_family(family, d, gamma)), dims, threads
        )
    rows = tuple(zip(dims, values, strict=True))
    crossover = next((d for d, mu2 in rows if mu2 >= 0), None)
    return FamilyScan(family=family.lower(), gamma=gamma, rows=rows, crossover=crossover)


def c_alpha(alpha: float) -> float:
    """min{(2+α²)/4 − (α/4)√(4+α²), (1+α²)/2 − √((1−α²+α⁴)/3)}; μ₂ = −c_α η for the 3-level ladder."""
    if not alpha > 0:
        raise OperatorError("alpha must be positive", actual=alpha)
    a2 = alpha * alpha
    first = (2 + a2) / 4 - (alpha / 4) * math.sqrt(4 + a2)
    second = (1 + a2) / 2 - math.sqrt((1 - a2 + a2 * a2) / 3)
    return min(first, second)


def c_alpha_scan(a_min: float, a_max: float, steps: int) -> list[tuple[float, float, float]]:
    """Rows (α, c_α, block μ₂ of the ladder with α = (1, α), η = 1)."""
    if steps < 1 or not 0 < a_min <= a_max:
        raise OperatorError("invalid alpha range", actual=(a_min, a_max, steps))
    grid = np.linspace(a_min, a_max, steps) if steps > 1 else np.array([a_min])
    return [(float(a), c_alpha(float(a)), ladder_mu2(LadderSpec((1.0, float(a))))) for a in grid]


def three_level_eigenvalues(alpha: float, eta: float = 1.0) -> list[tuple[float, int]]:
    """Closed-form spectrum of D̃ for L = √η(|0⟩⟨1| + α|1⟩⟨2|) as (value, multiplicity)."""
    a2 = alpha * alpha
    outer = math.sqrt((1 + a2) ** 2 - (10 * a2 - 1 - a2 * a2) / 3)
    inner = math.sqrt((1 + a2 / 2) ** 2 - 1)
    return [
        (0.0, 1),
        (-(eta / 2) * ((1 + a2) + outer), 1),
        (-(eta / 2) * ((1 + a2) - outer), 1),
        (-eta * a2 / 2, 2),
        (-(eta / 2) * (1 + a2 / 2 + inner), 2),
        (-(eta / 2) * (1 + a2 / 2 - inner), 2),
    ]
