"""Contraction rates that survive small or slow Hamiltonian drives.

All quantities here are scalars. A base contraction (K, γ) of the undriven generator is turned
into constants (K̃, γ̃) for the perturbed one by maximizing a one-dimensional objective over the
window length x = γ·τ.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
import scipy.optimize as opt

from lindcert.logging_utils import get_logger, log_warning
from lindcert.operators import HamiltonianSchedule, drive_norm, operator_norms

logger = get_logger(__name__)

X_MIN = 1e-6
X_MAX = 100.0
GRID_POINTS = 4000


@dataclass(frozen=True, slots=True)
class PerturbationError(ValueError):
    detail: str
    parameter: str
    value: float

    def __str__(self) -> str:  # pragma: no cover - trivial
        return f"{self.detail} ({self.parameter}={self.value})"


@dataclass(frozen=True, slots=True)
class BaseContraction:
    """‖E_{t,s}(ρ−σ)‖₁ ≤ K e^{−γ(t−s)}‖ρ−σ‖₁ for the unperturbed generator."""

    K: float
    gamma: float

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise PerturbationError("base rate must be positive", "gamma", self.gamma)
        if not self.K >= 1:
            raise PerturbationError("base constant must be at least 1", "K", self.K)

    @property
    def log_k(self) -> float:
        return math.log(self.K)


@dataclass(frozen=True, slots=True)
class PerturbedContraction:
    K_tilde: float
    gamma_tilde: float
    x_star: float
    feasible: bool
    analytic: bool = False
    method: str = "golden"


def _check_nonnegative(name: str, value: float) -> None:
    if not value >= 0:
        raise PerturbationError("value must be non-negative", name, value)


def _infeasible() -> PerturbedContraction:
    return PerturbedContraction(
        K_tilde=math.inf, gamma_tilde=0.0, x_star=math.nan, feasible=False, method="infeasible"
    )


def _maximize_rate(
    gamma: float, q: Callable[[float], float], lower: float
) -> PerturbedContraction:
    """Maximize −(γ/x) ln q(x) over x in [lower, X_MAX]."""

    def rate(x: float) -> float:
        value = q(x)
        if value <= 0:
            return -math.inf
        return -(gamma / x) * math.log(value)

    grid = np.geomspace(lower, X_MAX, GRID_POINTS)
    rates = np.array([rate(float(x)) for x in grid])
    peak = int(np.argmax(rates))
    x_star, best = float(grid[peak]), float(rates[peak])
    method = "grid"
    rises = np.diff(rates) > 0
    unimodal = bool(np.all(rises[:peak])) and not bool(np.any(rises[peak:]))
    if 0 < peak < len(grid) - 1:
        if unimodal:
            try:
                result = opt.minimize_scalar(
                    lambda x: -rate(x),
                    bracket=(float(grid[peak - 1]), x_star, float(grid[peak + 1])),
                    method="golden",
                    options={"xtol": 1e-12},
                )
            except ValueError:
                result = None
            if result is not None and -float(result.fun) >= best and lower <= float(result.x) <= X_MAX:
                x_star, best = float(result.x), -float(result.fun)
                method = "golden"
        else:
            log_warning(logger, "rate objective is not unimodal on the x grid; using grid maximum")
    if not best > 0:
        return _infeasible()
    return PerturbedContraction(
        K_tilde=1.0 / q(x_star), gamma_tilde=best, x_star=x_star, feasible=True, method=method
    )


def perturbed_rate(base: BaseContraction, delta_l: float) -> PerturbedContraction:
    """Constants for L + ΔL(t) when sup_t ‖ΔL(t)‖₁→₁ ≤ ``delta_l``.

    q(x) = ((1+ln K)/γ)ΔL + K(1−ΔL/γ)e^{−x} for x ≥ ln K; γ̃ = sup −(γ/x) ln q(x) and K̃ = 1/q(x*).
    Feasible iff ΔL < γ/(1+ln K).
    """
    _check_nonnegative("delta_l", delta_l)
    gamma, k, log_k = base.gamma, base.K, base.log_k
    if delta_l == 0:
        return PerturbedContraction(k, gamma, math.inf, True, analytic=True, method="analytic")
    if k == 1.0:
        gamma_tilde = gamma - delta_l
        if gamma_tilde <= 0:
            return _infeasible()
        return PerturbedContraction(1.0, gamma_tilde, 0.0, True, analytic=True, method="analytic")
    slope = (1.0 + log_k) / gamma
    if slope * delta_l >= 1.0:
        return _infeasible()

    def q(x: float) -> float:
        return slope * delta_l + k * (1.0 - delta_l / gamma) * math.exp(-x)

    return _maximize_rate(gamma, q, max(log_k, X_MIN))


def slow_drive_rate(base0: BaseContraction, l: float) -> PerturbedContraction:  # noqa: E741
    """Constants for a Hamiltonian whose instantaneous generators contract with (K₀, γ₀).

    ``l`` bounds ‖dL_t/dt‖₁→₁. Maximizes −(γ₀/x) ln(A + Be^{−x} − Cxe^{−x}) over x ≥ ln K₀.
    """
    _check_nonnegative("l", l)
    gamma0, k0, log_k = base0.gamma, base0.K, base0.log_k
    if l == 0 or k0 == 1.0:
        return PerturbedContraction(k0, gamma0, math.inf, True, analytic=True, method="analytic")
    scale = l / gamma0**2
    a = scale * (0.75 + 0.5 * log_k + 0.25 * log_k**2)
    b = k0 * (1.0 - scale * (1.0 - log_k) / 2.0)
    c = scale * k0

    def q(x: float) -> float:
        return a + (b - c * x) * math.exp(-x)

    return _maximize_rate(gamma0, q, max(log_k, X_MIN))


def small_drive_threshold(base: BaseContraction) -> float:
    """γ/(2 + 2 ln K)."""
    return base.gamma / (2.0 + 2.0 * base.log_k)


def slow_drive_threshold(base0: BaseContraction) -> float:
    """(2γ₀²/3)/(1 + ⅔ ln K₀ + ⅓ ln² K₀)."""
    log_k = base0.log_k
    return (2.0 * base0.gamma**2 / 3.0) / (1.0 + 2.0 * log_k / 3.0 + log_k**2 / 3.0)


def small_drive_check(base: BaseContraction, v_max: float) -> PerturbedContraction:
    """Small drive V(t) on top of a contractive constant generator; ΔL ≤ 2‖V‖∞."""
    _check_nonnegative("v_max", v_max)
    if v_max >= small_drive_threshold(base):
        return _infeasible()
    return perturbed_rate(base, 2.0 * v_max)


def slow_drive_check(base0: BaseContraction, h_dot_max: float) -> PerturbedContraction:
    """Slowly varying Hamiltonian; ‖dL_t/dt‖₁→₁ ≤ 2‖dH/dt‖∞."""
    _check_nonnegative("h_dot_max", h_dot_max)
    if h_dot_max >= slow_drive_threshold(base0):
        return _infeasible()
    return slow_drive_rate(base0, 2.0 * h_dot_max)


@dataclass(frozen=True, slots=True)
class TimeAverageReport:
    passed: bool
    q: float
    generic: tuple[float, float] | None
    instance: tuple[float, float] | None


def time_average_check(
    base: BaseContraction, avg: float, period: float, *, drive: bool = False
) -> TimeAverageReport:
    """Windowed condition: the perturbation averaged over windows of length T.

    ``avg`` is the window average of ‖ΔL(t)‖₁→₁, or of ‖V(t)‖∞ when ``drive`` is set; a drive
    counts twice in ΔL. With q = ΔL_avg·T + K e^{−γT} < 1 the driven dynamics contract with
    (1/q, ln(1/q)/T). When T ≥ ln(4K)/γ and the ‖V‖∞ average is ≤ 1/(2T), equivalently
    ΔL_avg ≤ 1/T, the fixed pair (4/3, ln(4/3)/T) holds.
    """
    _check_nonnegative("avg", avg)
    if not period > base.log_k / base.gamma or period <= 0:
        raise PerturbationError("window must exceed ln(K)/gamma", "T", period)
    delta_avg = 2.0 * avg if drive else avg
    q = delta_avg * period + base.K * math.exp(-base.gamma * period)
    generic = (1.0 / q, math.log(1.0 / q) / period) if q < 1.0 else None
    instance = None
    if period >= math.log(4.0 * base.K) / base.gamma and delta_avg <= 1.0 / period:
        instance = (4.0 / 3.0, math.log(4.0 / 3.0) / period)
    return TimeAverageReport(
        passed=generic is not None or instance is not None, q=q, generic=generic, instance=instance
    )


def small_drive_instance(base: BaseContraction, v_max: float) -> tuple[float, float] | None:
    """(4/3, γ ln(4/3)/ln(4K)) when V_max ≤ γ/(4 + 4 ln K)."""
    _check_nonnegative("v_max", v_max)
    if v_max > base.gamma / (4.0 + 4.0 * base.log_k):
        return None
    return 4.0 / 3.0, base.gamma * math.log(4.0 / 3.0) / math.log(4.0 * base.K)


def slow_drive_instance(base0: BaseContraction, h_dot_max: float) -> tuple[float, float] | None:
    """(6/5, γ₀ ln(6/5)/ln(2K₀)) when ‖dH/dt‖∞ ≤ γ₀²/(2 ln²(2K₀))."""
    _check_nonnegative("h_dot_max", h_dot_max)
    if h_dot_max > base0.gamma**2 / (2.0 * math.log(2.0 * base0.K) ** 2):
        return None
    return 6.0 / 5.0, base0.gamma * math.log(6.0 / 5.0) / math.log(2.0 * base0.K)


def derivative_average_instance(
    base0: BaseContraction, h_dot_avg: float, period: float
) -> tuple[float, float] | None:
    """(4/3, ln(4/3)/T) when T ≥ ln(4K₀)/γ₀ and the window average of ‖dH/dt‖∞ is ≤ 1/T²."""
    _check_nonnegative("h_dot_avg", h_dot_avg)
    if period < math.log(4.0 * base0.K) / base0.gamma or h_dot_avg > 1.0 / period**2:
        return None
    return 4.0 / 3.0, math.log(4.0 / 3.0) / period


@dataclass(frozen=True, slots=True)
class DriveBounds:
    """Drive sizes measured on a time grid relative to H(0)."""

    v_max_raw: float
    v_max_shifted: float
    h_dot_max: float


def schedule_bounds(schedule: HamiltonianSchedule, times: Sequence[float]) -> DriveBounds:
    if not times:
        raise PerturbationError("time grid must not be empty", "times", 0.0)
    reference = schedule.evaluate(0.0)
    raw = shifted = h_dot = 0.0
    for t in times:
        size = drive_norm(schedule.evaluate(t) - reference)
        raw = max(raw, size.raw)
        shifted = max(shifted, size.shifted)
        h_dot = max(h_dot, operator_norms(schedule.derivative(t)).spectral)
    return DriveBounds(v_max_raw=raw, v_max_shifted=shifted, h_dot_max=h_dot)
