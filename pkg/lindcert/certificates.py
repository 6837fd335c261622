"""Hamiltonian-independent contraction certificates for a fixed dissipator.

Three quantitative certificates are computed from the jumps alone:

- ``R``: the minimum over orthonormal pairs (u, v) of Σ_j |⟨v|L_j|u⟩|² + |⟨v|L_j†|u⟩|², a 1-norm
  contraction rate with K = 1;
- ``r_times_d``: d times the minimum of Σ_j |⟨v|L_j|u⟩|², again with K = 1;
- ``mu2``: minus the second eigenvalue of D̃ = Δ(D + D†)/2Δ when negative, a 2-norm rate that
  becomes a 1-norm rate with K = √d.

The pair minima are found by restarted Riemannian descent on the Stiefel manifold of
orthonormal pairs; for qubits the pair manifold is also gridded exhaustively.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
import scipy.linalg as la
import scipy.optimize as opt

from lindcert.algebra import algebra_report, spans_antihermitian
from lindcert.config import LindcertConfig
from lindcert.logging_utils import get_logger, log_info, log_result, log_success, log_warning, timed
from lindcert.operators import (
    JumpSet,
    OperatorError,
    OperatorMatrix,
    commutator,
    dagger,
    is_normal,
    normalize_jumps,
)
from lindcert.superop import HermitianBasis, build_dtilde
from lindcert.workers import parallel_map

logger = get_logger(__name__)

ComplexVector = npt.NDArray[np.complex128]

MAX_DESCENT_STEPS = 500


@dataclass(frozen=True, eq=False)
class OrthoPairWitness:
    """Orthonormal pair (u, v) attaining ``value``."""

    u: ComplexVector
    v: ComplexVector
    value: float

    def __post_init__(self) -> None:
        u = np.asarray(self.u, dtype=np.complex128)
        v = np.asarray(self.v, dtype=np.complex128)
        u = u / np.linalg.norm(u)
        v = v - np.vdot(u, v) * u
        v = v / np.linalg.norm(v)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)


@dataclass(frozen=True, eq=False)
class PairRate:
    value: float
    witness: OrthoPairWitness
    saturated: bool
    restarts: int


def _pair_operators(jumps: JumpSet, with_adjoints: bool) -> list[OperatorMatrix]:
    operators = list(jumps)
    if with_adjoints:
        operators += [dagger(jump) for jump in jumps]
    return operators


def pair_objective(
    operators: Sequence[OperatorMatrix], u: ComplexVector, v: ComplexVector
) -> float:
    """Σ_A |⟨v|A|u⟩|²."""
    return float(sum(abs(np.vdot(v, op @ u)) ** 2 for op in operators))


def _objective_and_gradient(
    operators: Sequence[OperatorMatrix], frame: npt.NDArray[np.complex128]
) -> tuple[float, npt.NDArray[np.complex128]]:
    u, v = frame[:, 0], frame[:, 1]
    value = 0.0
    grad_u = np.zeros_like(u)
    grad_v = np.zeros_like(v)
    for op in operators:
        image = op @ u
        amplitude = np.vdot(v, image)
        value += abs(amplitude) ** 2
        grad_u += amplitude * (dagger(op) @ v)
        grad_v += np.conj(amplitude) * image
    return value, np.stack([grad_u, grad_v], axis=1)


def _retract(frame: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
    q, r = la.qr(frame, mode="economic")
    phases = np.sign(np.diag(r))
    phases[phases == 0] = 1.0
    return np.asarray(q * phases, dtype=np.complex128)


def _descend_pair(
    operators: Sequence[OperatorMatrix],
    start: npt.NDArray[np.complex128],
    grad_tol: float = 1e-12,
) -> tuple[float, npt.NDArray[np.complex128]]:
    """Riemannian steepest descent with Armijo backtracking and QR retraction."""
    frame = _retract(start)
    value, euclidean = _objective_and_gradient(operators, frame)
    step = 1.0
    for _ in range(MAX_DESCENT_STEPS):
        gram = frame.conj().T @ euclidean
        gradient = euclidean - frame @ ((gram + gram.conj().T) / 2)
        slope = float(np.real(np.vdot(gradient, gradient)))
        if slope < grad_tol:
            break
        step = min(1.0, 2.0 * step)
        while step > 1e-14:
            candidate = _retract(frame - step * gradient)
            candidate_value, candidate_grad = _objective_and_gradient(operators, candidate)
            if candidate_value <= value - 1e-4 * step * slope:
                frame, value, euclidean = candidate, candidate_value, candidate_grad
                break
            step /= 2.0
        else:
            break
    return value, frame


def _random_frames(dim: int, restarts: int, seed: int) -> list[npt.NDArray[np.complex128]]:
    rng = np.random.default_rng(seed)
    return [
        _retract(rng.normal(size=(dim, 2)) + 1j * rng.normal(size=(dim, 2))) for _ in range(restarts)
    ]


def bloch_grid_minimum(
    operators: Sequence[OperatorMatrix],
    theta_steps: int = 181,
    phi_steps: int = 361,
    polish: bool = True,
) -> OrthoPairWitness:
    """Exhaustive qubit search: u = (cos θ/2, e^{iφ} sin θ/2), v = u⊥, then a local polish."""
    stacked = np.stack([np.asarray(op, dtype=np.complex128) for op in operators]) if operators else None
    if stacked is not None and stacked.shape[1:] != (2, 2):
        raise OperatorError("Bloch grid search needs qubit operators", expected=2, actual=stacked.shape[1])

    def frame(theta: npt.ArrayLike, phi: npt.ArrayLike) -> tuple[ComplexVector, ComplexVector]:
        half = np.asarray(theta) / 2
        phase = np.exp(1j * np.asarray(phi))
        u = np.stack([np.cos(half) + 0j, phase * np.sin(half)], axis=-1)
        v = np.stack([-np.conj(phase) * np.sin(half), np.cos(half) + 0j], axis=-1)
        return u, v

    def values(theta: npt.ArrayLike, phi: npt.ArrayLike) -> npt.NDArray[np.float64]:
        u, v = frame(theta, phi)
        if stacked is None:
            return np.zeros(np.shape(u)[:-1])
        amplitudes = np.einsum("...i,kij,...j->...k", v.conj(), stacked, u)
        return np.asarray(np.sum(np.abs(amplitudes) ** 2, axis=-1), dtype=np.float64)

    thetas, phis = np.meshgrid(
        np.linspace(0.0, math.pi, theta_steps), np.linspace(0.0, 2 * math.pi, phi_steps), indexing="ij"
    )
    grid = values(thetas, phis)
    index = np.unravel_index(int(np.argmin(grid)), grid.shape)
    best = np.array([thetas[index], phis[index]])
    best_value = float(grid[index])
    if polish and best_value > 0.0:
        result = opt.minimize(lambda p: float(values(p[0], p[1])), best, method="Nelder-Mead",
                              options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 2000})
        if float(result.fun) < best_value:
            best, best_value = np.asarray(result.x), float(result.fun)
    u, v = frame(best[0], best[1])
    return OrthoPairWitness(u=u, v=v, value=best_value)


def _pair_rate(
    jumps: JumpSet,
    with_adjoints: bool,
    restarts: int | None,
    seed: int | None,
    threads: int | None,
    config: LindcertConfig | None,
) -> PairRate:
    cfg = config or LindcertConfig.from_env()
    count = cfg.restarts if restarts is None else restarts
    if count < 1:
        raise OperatorError("restarts must be at least 1", actual=count)
    if jumps.dim < 2:
        raise OperatorError("orthonormal pairs need dimension >= 2", actual=jumps.dim)
    operators = _pair_operators(jumps, with_adjoints)
    frames = _random_frames(jumps.dim, count, cfg.seed if seed is None else seed)
    label = "R" if with_adjoints else "r"
    with timed(logger, f"pair search for {label} ({count} restarts)"):
        results = parallel_map(
            lambda start: _descend_pair(operators, start), frames, threads or cfg.threads
        )
    running = []
    best_value, best_frame = results[0]
    for value, frame in results:
        if value < best_value:
            best_value, best_frame = value, frame
        running.append(best_value)
    saturated = abs(running[-1] - running[(count - 1) // 2]) < cfg.saturation_tol
    witness = OrthoPairWitness(u=best_frame[:, 0], v=best_frame[:, 1], value=best_value)
    if jumps.dim == 2:
        gridded = bloch_grid_minimum(operators)
        if gridded.value < witness.value:
            witness = gridded
        saturated = True
    if not saturated:
        log_warning(logger, f"{label} search not saturated after {count} restarts")
    value = pair_objective(operators, witness.u, witness.v)
    return PairRate(
        value=value,
        witness=OrthoPairWitness(witness.u, witness.v, value),
        saturated=saturated,
        restarts=count,
    )


def rate_R(  # noqa: N802
    jumps: JumpSet,
    restarts: int | None = None,
    *,
    seed: int | None = None,
    threads: int | None = None,
    config: LindcertConfig | None = None,
) -> PairRate:
    """Upper estimate of R(D); the value is the objective at the returned witness."""
    return _pair_rate(jumps, True, restarts, seed, threads, config)


def rate_r(
    jumps: JumpSet,
    restarts: int | None = None,
    *,
    seed: int | None = None,
    threads: int | None = None,
    config: LindcertConfig | None = None,
) -> PairRate:
    """Upper estimate of r(D); the certified rate is d·r."""
    return _pair_rate(jumps, False, restarts, seed, threads, config)


@dataclass(frozen=True, eq=False)
class Mu2Result:
    value: float
    eigenvector: OperatorMatrix
    multiplicity: int


def rate_mu2(jumps: JumpSet, tol: float = 1e-10) -> Mu2Result:
    """Largest eigenvalue of D̃ on the traceless Hermitian matrices."""
    basis = HermitianBasis.gell_mann(jumps.dim)
    if jumps.dim == 1:
        return Mu2Result(0.0, np.zeros((1, 1), dtype=np.complex128), 0)
    dtilde = build_dtilde(jumps, basis, tol)[1:, 1:]
    eigenvalues, vectors = la.eigh((dtilde + dtilde.T) / 2)
    top = float(eigenvalues[-1])
    spread = 1e-9 * max(1.0, float(np.max(np.abs(eigenvalues))))
    multiplicity = int(np.sum(eigenvalues >= top - spread))
    eigenvector = basis.operator(np.concatenate([[0.0], vectors[:, -1]]))
    return Mu2Result(top, eigenvector, multiplicity)


@dataclass(frozen=True, slots=True)
class Classification:
    unital: bool
    antiherm_span: bool
    algebra_full_with_daggers: bool
    algebra_full_jumps_only: bool
    d2_contractive: bool
    d3_sufficient: bool

    def to_dict(self) -> dict[str, bool]:
        return {
            "unital": self.unital,
            "antiherm_span": self.antiherm_span,
            "algebra_full_with_daggers": self.algebra_full_with_daggers,
            "algebra_full_jumps_only": self.algebra_full_jumps_only,
            "d2_contractive": self.d2_contractive,
            "d3_sufficient": self.d3_sufficient,
        }


def classify(jumps: JumpSet, tol: float = 1e-10, rank_tol: float = 1e-9) -> Classification:
    dim = jumps.dim
    imbalance = sum(
        (commutator(jump, dagger(jump)) for jump in jumps),
        np.zeros((dim, dim), dtype=np.complex128),
    )
    scale = max(1.0, sum(float(np.linalg.norm(jump)) ** 2 for jump in jumps))
    unital = float(np.linalg.norm(imbalance)) <= tol * scale
    algebras = algebra_report(jumps, rank_tol)
    d2_contractive = False
    if dim == 2:
        operators = list(jumps)
        non_normal = any(not is_normal(jump, tol) for jump in operators)
        non_commuting = any(
            float(np.linalg.norm(commutator(a, b))) > tol * scale
            for i, a in enumerate(operators)
            for b in operators[i + 1 :]
        )
        d2_contractive = non_normal or non_commuting
    return Classification(
        unital=unital,
        antiherm_span=spans_antihermitian(jumps, rank_tol).spans,
        algebra_full_with_daggers=algebras.full_with_daggers,
        algebra_full_jumps_only=algebras.full_jumps_only,
        d2_contractive=d2_contractive,
        d3_sufficient=dim == 3 and algebras.full_jumps_only,
    )


@dataclass(frozen=True, eq=False)
class ContractionCertificate:
    """Best certified (γ, K) together with every raw certificate value."""

    method: str
    gamma: float
    K: float
    witness: OrthoPairWitness | OperatorMatrix | None
    classifications: Classification
    R: PairRate
    r: PairRate
    mu2: Mu2Result
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def dim(self) -> int:
        return int(self.R.witness.u.shape[0])


METHOD_ORDER = ("R", "r_times_d", "mu2")


def certify(
    jumps: JumpSet,
    restarts: int | None = None,
    *,
    seed: int | None = None,
    threads: int | None = None,
    config: LindcertConfig | None = None,
) -> ContractionCertificate:
    """Run every certificate and keep the largest guaranteed rate.

    Ties prefer R, then d·r, then μ₂. Classification flags are reported but never turned into a
    rate on their own.
    When every rate is at or below ``rate_tol`` yet the jumps span the anti-Hermitian matrices,
    the method is ``span`` with the positive R estimate as its rate: the span guarantees R > 0, and
    ``rate_tol`` only decides which rates are large enough to quote as quantitative.
    """
    cfg = config or LindcertConfig.from_env()
    normalized, _ = normalize_jumps(jumps, np.zeros((jumps.dim, jumps.dim)), cfg.struct_tol)
    dim = jumps.dim
    classifications = classify(normalized, cfg.struct_tol, cfg.rank_tol)
    big_r = rate_R(normalized, restarts, seed=seed, threads=threads, config=cfg)
    small_r = rate_r(normalized, restarts, seed=seed, threads=threads, config=cfg)
    mu2 = rate_mu2(normalized, cfg.struct_tol)

    warnings = []
    if not big_r.saturated:
        warnings.append("R search not saturated")
    if not small_r.saturated:
        warnings.append("r search not saturated")

    candidates: list[tuple[str, float, float, OrthoPairWitness | OperatorMatrix]] = [
        ("R", big_r.value, 1.0, big_r.witness),
        ("r_times_d", dim * small_r.value, 1.0, small_r.witness),
        ("mu2", -mu2.value, math.sqrt(dim), mu2.eigenvector),
    ]
    best: tuple[str, float, float, OrthoPairWitness | OperatorMatrix | None] = ("none", 0.0, 1.0, None)
    for method, gamma, constant, witness in candidates:
        if gamma <= cfg.rate_tol:
            continue
        if best[0] == "none" or gamma > best[1] * (1.0 + 1e-12):
            best = (method, gamma, constant, witness)
    if best[0] == "none" and classifications.antiherm_span and big_r.value > 0.0:
        best = ("span", big_r.value, 1.0, big_r.witness)
    if best[0] == "none" and classifications.algebra_full_jumps_only:
        warnings.append("jumps generate the full algebra but no quantitative certificate fired")

    method, gamma, constant, witness = best
    if method == "none":
        log_info(logger, f"no Hamiltonian-independent certificate for d={dim}")
    else:
        log_success(logger, f"certificate from {method}")
        log_result(logger, "gamma", gamma)
        log_result(logger, "K", constant)
    return ContractionCertificate(
        method=method,
        gamma=gamma,
        K=constant,
        witness=witness,
        classifications=classifications,
        R=big_r,
        r=small_r,
        mu2=mu2,
        warnings=tuple(warnings),
    )


def certificate_curve(
    cert: ContractionCertificate, times: npt.ArrayLike, x0_norm: float
) -> npt.NDArray[np.float64]:
    """K e^{−γt}‖x0‖₁ on ``times``."""
    grid = np.asarray(times, dtype=np.float64)
    return np.asarray(cert.K * np.exp(-cert.gamma * grid) * x0_norm, dtype=np.float64)
