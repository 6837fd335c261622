"""Time evolution under driven Lindbladians.

States are propagated as column-stacked vectors. Generators that are constant between
breakpoints are exponentiated exactly; smooth drives are integrated with midpoint matrix
exponentials (or RK4) under Richardson step-doubling control.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
import scipy.linalg as la

from lindcert.config import LindcertConfig
from lindcert.logging_utils import get_logger, log_info, log_warning, timed
from lindcert.operators import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    ConstantDrive,
    LindbladModel,
    OperatorError,
    OperatorMatrix,
    PhiDrive,
    PiecewiseConstantDrive,
    ZeroDrive,
    as_operator,
    dagger,
    dissipator_apply,
    hermitian_part,
    kron_all,
    trace_norm,
)
from lindcert.superop import build_superoperator, unvec, vec
from lindcert.workers import parallel_map

logger = get_logger(__name__)

SCHEMES = ("expstep", "rk4")
KERNEL_TOL = 1e-8
DRIFT_TOL = 1e-10


@dataclass(frozen=True, slots=True)
class PropagationError(RuntimeError):
    """Step refinement budget exhausted."""

    detail: str
    time: float
    dt: float
    error_estimate: float

    def __str__(self) -> str:  # pragma: no cover - trivial
        return f"{self.detail} (t={self.time}, dt={self.dt}, error={self.error_estimate:.3e})"


@dataclass(frozen=True, slots=True)
class PropagatorOptions:
    scheme: str = "expstep"
    dt: float = 1e-2
    richardson: bool = True
    tol_state: float = 1e-8
    max_refinements: int = 12

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise OperatorError("unknown propagation scheme", expected=SCHEMES, actual=self.scheme)
        if not self.dt > 0:
            raise OperatorError("time step must be positive", actual=self.dt)
        if not self.tol_state > 0:
            raise OperatorError("state tolerance must be positive", actual=self.tol_state)

    @classmethod
    def from_config(cls, config: LindcertConfig | None = None, **overrides: object) -> PropagatorOptions:
        cfg = config or LindcertConfig.from_env()
        values: dict[str, object] = {
            "dt": cfg.dt,
            "tol_state": cfg.tol_state,
            "max_refinements": cfg.max_refinements,
        }
        values.update(overrides)
        return cls(**values)  # type: ignore[arg-type]


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: npt.NDArray[np.float64]
    states: tuple[OperatorMatrix, ...] = ()
    observables: Mapping[str, npt.NDArray[np.float64]] = field(default_factory=dict)


def _record_grid(s: float, t: float, record: Sequence[float] | None) -> list[float]:
    if record is None:
        return [s, t] if t > s else [s]
    grid = sorted(float(point) for point in record)
    if grid and (grid[0] < s or grid[-1] > t):
        raise OperatorError("record times must lie in [s, t]", expected=(s, t), actual=(grid[0], grid[-1]))
    return grid


def _is_piecewise_exact(model: LindbladModel) -> bool:
    return isinstance(model.hamiltonian, ZeroDrive | ConstantDrive | PiecewiseConstantDrive)


class _Stepper:
    """Advances a vectorized state between two times for a smoothly driven model."""

    def __init__(self, model: LindbladModel, options: PropagatorOptions) -> None:
        self.model = model
        self.options = options
        self.refined = 0
        self._step: Callable[[float, float, npt.NDArray[np.complex128]], npt.NDArray[np.complex128]]
        self._step = self._expstep if options.scheme == "expstep" else self._rk4

    def generator(self, t: float) -> npt.NDArray[np.complex128]:
        return build_superoperator(self.model, t).matrix

    def _expstep(self, t: float, h: float, state: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
        return np.asarray(la.expm(h * self.generator(t + h / 2)) @ state)

    def _rk4(self, t: float, h: float, state: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
        start, middle, end = self.generator(t), self.generator(t + h / 2), self.generator(t + h)
        k1 = start @ state
        k2 = middle @ (state + h / 2 * k1)
        k3 = middle @ (state + h / 2 * k2)
        k4 = end @ (state + h * k3)
        return np.asarray(state + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4))

    def advance(self, t0: float, t1: float, state: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
        options = self.options
        t = t0
        while t1 - t > 1e-14 * max(1.0, t1):
            nominal = options.dt / (1.0 + self.model.hamiltonian.drive_rate(t))
            h = min(nominal, t1 - t)
            for attempt in range(options.max_refinements + 1):
                full = self._step(t, h, state)
                if not options.richardson:
                    candidate = full
                    break
                candidate = self._step(t + h / 2, h / 2, self._step(t, h / 2, state))
                error = float(np.linalg.norm(full - candidate))
                if error <= options.tol_state:
                    break
                if attempt == options.max_refinements:
                    raise PropagationError("step refinement budget exhausted", t, h, error)
                self.refined += 1
                h /= 2
            state = candidate
            t = t1 if h >= t1 - t else t + h
        return state


def propagate(
    model: LindbladModel,
    s: float,
    t: float,
    x0: OperatorMatrix,
    options: PropagatorOptions | None = None,
    record: Sequence[float] | None = None,
) -> tuple[OperatorMatrix, Trajectory]:
    """E_{t,s}(x0), with the states at the ``record`` times (default: s and t)."""
    if not 0 <= s <= t:
        raise OperatorError("propagation needs 0 <= s <= t", actual=(s, t))
    opts = options or PropagatorOptions.from_config()
    state = vec(as_operator(x0, model.dim))
    grid = _record_grid(s, t, record)
    states: list[OperatorMatrix] = []
    current = s
    stepper = _Stepper(model, opts)
    with timed(logger, f"propagation over [{s}, {t}]"):
        for point in [*grid, t]:
            if point > current:
                if _is_piecewise_exact(model):
                    stops = [*model.hamiltonian.breakpoints_between(current, point), point]
                    for stop in stops:
                        generator = build_superoperator(model, current).matrix
                        state = la.expm((stop - current) * generator) @ state
                        current = stop
                else:
                    state = stepper.advance(current, point, state)
                    current = point
            if len(states) < len(grid):
                states.append(unvec(state, model.dim))
    if stepper.refined:
        log_info(logger, f"refined {stepper.refined} integration steps")
    final = unvec(state, model.dim)
    return final, Trajectory(times=np.asarray(grid, dtype=np.float64), states=tuple(states))


def contraction_envelope(
    model: LindbladModel,
    rho: OperatorMatrix,
    sigma: OperatorMatrix,
    grid: Sequence[float],
    options: PropagatorOptions | None = None,
) -> npt.NDArray[np.float64]:
    """‖E_{t,t₀}(ρ − σ)‖₁ on ``grid``, starting at t₀ = grid[0]."""
    if not grid:
        raise OperatorError("envelope grid must not be empty")
    difference = as_operator(rho, model.dim) - as_operator(sigma, model.dim)
    _, trajectory = propagate(model, grid[0], grid[-1], difference, options, grid)
    return np.array([trace_norm(hermitian_part(state)) for state in trajectory.states])


@dataclass(frozen=True, eq=False)
class SignDecomposition:
    eigenvalues: npt.NDArray[np.float64]
    signs: npt.NDArray[np.int64]
    basis: npt.NDArray[np.complex128]

    @property
    def f(self) -> npt.NDArray[np.float64]:
        """f(k, l) = 1 − s_k s_l."""
        return np.asarray(1.0 - np.outer(self.signs, self.signs), dtype=np.float64)


@dataclass(frozen=True, eq=False)
class RightDerivative:
    value: float
    decomposition: SignDecomposition
    ambiguous: bool


def trace_norm_right_derivative(
    model: LindbladModel,
    t: float,  # noqa: ARG001
    x: OperatorMatrix,
    kernel_tol: float = KERNEL_TOL,
    drift_tol: float = DRIFT_TOL,
) -> RightDerivative:
    """∂₊‖x(t)‖₁ = −Σ_{k,l} |λ_k| f(k,l) Σ_j |⟨e_l|L_j|e_k⟩|².

    Signs on the kernel of x come from the drift y = P_ker D(x) P_ker; the Hamiltonian at ``t``
    drops out.
    """
    matrix = as_operator(x, model.dim)
    if float(np.linalg.norm(matrix - dagger(matrix))) > 1e-10 * max(1.0, float(np.linalg.norm(matrix))):
        raise OperatorError("right derivative needs a Hermitian argument")
    matrix = hermitian_part(matrix)
    eigenvalues, basis = la.eigh(matrix)
    scale = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    threshold = kernel_tol * scale
    in_kernel = np.abs(eigenvalues) <= threshold
    signs = np.where(in_kernel, 0, np.sign(eigenvalues)).astype(np.int64)
    ambiguous = bool(
        np.any((np.abs(eigenvalues) > threshold / 10) & (np.abs(eigenvalues) < 10 * threshold))
    )
    if scale > 0 and np.any(in_kernel):
        kernel = basis[:, in_kernel]
        drift = dagger(kernel) @ dissipator_apply(model.jumps, matrix) @ kernel
        drift_values, rotation = la.eigh(hermitian_part(drift))
        basis = basis.copy()
        basis[:, in_kernel] = kernel @ rotation
        jump_weight = sum(float(np.linalg.norm(jump)) ** 2 for jump in model.jumps)
        drift_threshold = drift_tol * scale * max(jump_weight, 1.0)
        signs[in_kernel] = np.where(np.abs(drift_values) <= drift_threshold, 0, np.sign(drift_values))
        eigenvalues = eigenvalues.copy()
        eigenvalues[in_kernel] = 0.0
    decomposition = SignDecomposition(eigenvalues=eigenvalues, signs=signs, basis=basis)
    weights = np.zeros((model.dim, model.dim))
    for jump in model.jumps:
        weights += np.abs(dagger(basis) @ jump @ basis) ** 2
    # weights[l, k] = Σ_j |⟨e_l|L_j|e_k⟩|²
    value = -float(np.sum(np.abs(eigenvalues)[:, None] * decomposition.f * weights.T))
    if ambiguous:
        log_warning(logger, "eigenvalue close to the kernel threshold; right derivative may be unstable")
    return RightDerivative(value=min(value, 0.0), decomposition=decomposition, ambiguous=ambiguous)


def observable_trajectory(
    model: LindbladModel,
    initials: Sequence[OperatorMatrix],
    observable: OperatorMatrix,
    grid: Sequence[float],
    options: PropagatorOptions | None = None,
    *,
    labels: Sequence[str] | None = None,
    threads: int | None = None,
) -> Trajectory:
    """tr(O ρ_i(t)) on ``grid`` for every initial state."""
    if not grid:
        raise OperatorError("observable grid must not be empty")
    names = list(labels) if labels is not None else [f"initial_{i}" for i in range(len(initials))]
    if len(names) != len(initials):
        raise OperatorError("one label per initial state", expected=len(initials), actual=len(names))
    obs = as_operator(observable, model.dim)

    def series(initial: OperatorMatrix) -> npt.NDArray[np.float64]:
        _, trajectory = propagate(model, grid[0], grid[-1], initial, options, grid)
        return np.array([float(np.real(np.trace(obs @ state))) for state in trajectory.states])

    results = parallel_map(series, list(initials), threads)
    return Trajectory(
        times=np.asarray(grid, dtype=np.float64),
        observables=dict(zip(names, results, strict=True)),
    )


def approximate_difference(t: float, r: float = 3.0, c: float = 2.0) -> OperatorMatrix:
    """(|0⟩⟨0| − a(sin φ σʸ + cos φ σˣ)) ⊗ σᶻ with a = 1/φ′(t); trace norm at least 2."""
    drive = PhiDrive.counterexample(c=c, r=r)
    phase = drive.phi(t)
    amplitude = 1.0 / drive.drive_rate(t)
    ground = np.array([[1, 0], [0, 0]], dtype=np.complex128)
    rotating = math.sin(phase) * SIGMA_Y + math.cos(phase) * SIGMA_X
    return kron_all(ground - amplitude * rotating, SIGMA_Z)


def approximation_bound(r: float = 3.0, c: float = 2.0) -> float:
    """Uniform bound (1/(πrc))(9/(c(r−2)) + 4) on ‖x(t) − x̃(t)‖₁."""
    return (9.0 / (c * (r - 2.0)) + 4.0) / (math.pi * r * c)


def decay_slope(times: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of log(values) against times (positive values only)."""
    t = np.asarray(times, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    mask = v > 0
    if int(np.sum(mask)) < 2:
        raise OperatorError("need at least two positive samples for a slope", actual=int(np.sum(mask)))
    slope, _ = np.polyfit(t[mask], np.log(v[mask]), 1)
    return float(slope)
