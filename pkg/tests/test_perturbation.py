"""Tests for the small-drive, slow-drive and time-averaged contraction bounds."""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
import pytest

from lindcert.operators import SIGMA_Z, ConstantDrive, PhiDrive, PiecewiseConstantDrive
from lindcert.perturbation import (
    BaseContraction,
    PerturbationError,
    derivative_average_instance,
    perturbed_rate,
    schedule_bounds,
    slow_drive_check,
    slow_drive_instance,
    slow_drive_rate,
    slow_drive_threshold,
    small_drive_check,
    small_drive_instance,
    small_drive_threshold,
    time_average_check,
)

UNIT = BaseContraction(K=1.0, gamma=1.0)
EULER = BaseContraction(K=math.e, gamma=1.0)


def _oracle(
    gamma: float, q: Callable[[np.ndarray], np.ndarray], lower: float, upper: float = 100.0
) -> float:
    """Maximum of −(γ/x) ln q(x) on a dense grid, refined on a finer grid around the best point."""

    def rates(grid: np.ndarray) -> np.ndarray:
        values = q(grid)
        positive = values > 0
        return np.where(positive, -(gamma / grid) * np.log(np.where(positive, values, 1.0)), -np.inf)

    coarse = np.linspace(lower, upper, 200_001)
    coarse_rates = rates(coarse)
    peak = int(np.argmax(coarse_rates))
    fine = np.linspace(coarse[max(peak - 1, 0)], coarse[min(peak + 1, len(coarse) - 1)], 20_001)
    return float(max(np.max(rates(fine)), coarse_rates[peak]))


def _random_bases(rng: np.random.Generator, count: int) -> list[tuple[BaseContraction, float]]:
    """Base constants with K > 1 and a fraction in (0, 1) of the relevant feasibility threshold."""
    return [
        (BaseContraction(K=float(rng.uniform(1.05, 20.0)), gamma=float(rng.uniform(0.2, 5.0))), float(u))
        for u in rng.uniform(0.02, 0.95, count)
    ]


def test_base_contraction_validation() -> None:
    """γ must be positive and K at least 1."""
    with pytest.raises(PerturbationError):
        BaseContraction(K=1.0, gamma=0.0)
    with pytest.raises(PerturbationError):
        BaseContraction(K=0.5, gamma=1.0)


def test_unit_constant_is_analytic() -> None:
    """With K = 1 the perturbed rate is γ − ΔL."""
    result = perturbed_rate(UNIT, 0.3)

    assert result.analytic
    assert result.gamma_tilde == pytest.approx(0.7)
    assert result.K_tilde == 1.0


def test_zero_perturbation_keeps_base() -> None:
    """ΔL = 0 returns (K, γ)."""
    result = perturbed_rate(EULER, 0.0)

    assert (result.K_tilde, result.gamma_tilde) == (math.e, 1.0)


def test_golden_search_matches_dense_grid() -> None:
    """The refined maximum agrees with a dense grid to 1e-6."""
    delta = 0.1
    result = perturbed_rate(EULER, delta)

    def q(x: np.ndarray) -> np.ndarray:
        return 2.0 * delta + math.e * (1.0 - delta) * np.exp(-x)

    assert result.feasible
    assert result.gamma_tilde == pytest.approx(_oracle(1.0, q, 1.0), abs=1e-6)
    assert result.K_tilde == pytest.approx(1.0 / float(q(np.asarray(result.x_star))))
    assert result.x_star >= 1.0


def _perturbed_q(base: BaseContraction, delta: float) -> Callable[[np.ndarray], np.ndarray]:
    slope = (1.0 + base.log_k) / base.gamma

    def q(x: np.ndarray) -> np.ndarray:
        return slope * delta + base.K * (1.0 - delta / base.gamma) * np.exp(-x)

    return q


def _slow_q(base0: BaseContraction, l: float) -> Callable[[np.ndarray], np.ndarray]:  # noqa: E741
    scale, log_k = l / base0.gamma**2, base0.log_k
    a = scale * (0.75 + 0.5 * log_k + 0.25 * log_k**2)
    b = base0.K * (1.0 - scale * (1.0 - log_k) / 2.0)

    def q(x: np.ndarray) -> np.ndarray:
        return a + (b - scale * base0.K * x) * np.exp(-x)

    return q


def test_perturbed_rate_matches_dense_grid_on_random_tuples(rng: np.random.Generator) -> None:
    """perturbed_rate and small_drive_check agree with the grid maximum on 50 random tuples."""
    for base, fraction in _random_bases(rng, 50):
        lower = max(base.log_k, 1e-6)
        delta = fraction * base.gamma / (1.0 + base.log_k)
        v_max = fraction * small_drive_threshold(base)

        for result, q in (
            (perturbed_rate(base, delta), _perturbed_q(base, delta)),
            (small_drive_check(base, v_max), _perturbed_q(base, 2.0 * v_max)),
        ):
            expected = _oracle(base.gamma, q, lower)
            if result.feasible:
                assert result.gamma_tilde == pytest.approx(expected, abs=1e-6), base
            else:
                assert expected <= 1e-6, base


def test_slow_drive_matches_dense_grid_on_random_tuples(rng: np.random.Generator) -> None:
    """slow_drive_rate and slow_drive_check agree with the grid maximum on 50 random tuples."""
    for base0, fraction in _random_bases(rng, 50):
        lower = max(base0.log_k, 1e-6)
        h_dot = fraction * slow_drive_threshold(base0)

        for result, q in (
            (slow_drive_rate(base0, h_dot), _slow_q(base0, h_dot)),
            (slow_drive_check(base0, h_dot), _slow_q(base0, 2.0 * h_dot)),
        ):
            expected = _oracle(base0.gamma, q, lower)
            if result.feasible:
                assert result.gamma_tilde == pytest.approx(expected, abs=1e-6), base0
            else:
                assert expected <= 1e-6, base0


def test_perturbed_rate_decreases_with_perturbation() -> None:
    """Larger ΔL never gives a larger rate."""
    rates = [perturbed_rate(EULER, delta).gamma_tilde for delta in (0.0, 0.05, 0.1, 0.2, 0.4)]

    assert all(a >= b for a, b in zip(rates, rates[1:], strict=False))


def test_perturbed_rate_vanishes_at_feasibility_boundary() -> None:
    """γ̃ → 0 as ΔL → γ/(1 + ln K); at the boundary the bound is infeasible."""
    boundary = EULER.gamma / (1.0 + EULER.log_k)

    near = perturbed_rate(EULER, 0.999 * boundary)
    at = perturbed_rate(EULER, boundary)

    assert near.feasible
    assert 0.0 < near.gamma_tilde < 2e-3
    assert not at.feasible
    assert at.gamma_tilde == 0.0
    assert math.isinf(at.K_tilde)


def test_negative_perturbation_is_rejected() -> None:
    """Norm bounds cannot be negative."""
    with pytest.raises(PerturbationError):
        perturbed_rate(UNIT, -0.1)
    with pytest.raises(PerturbationError):
        small_drive_check(UNIT, -1.0)


def test_small_drive_check() -> None:
    """K = 1, γ = 1, V = 0.4 leaves γ̃ = 0.2; K = e with V = 0.3 is infeasible."""
    assert small_drive_threshold(UNIT) == pytest.approx(0.5)
    assert small_drive_check(UNIT, 0.4).gamma_tilde == pytest.approx(0.2)
    assert small_drive_threshold(EULER) == pytest.approx(0.25)
    assert not small_drive_check(EULER, 0.3).feasible


def test_small_drive_instance() -> None:
    """(4/3, γ ln(4/3)/ln(4K)) below γ/(4 + 4 ln K)."""
    assert small_drive_instance(UNIT, 0.25) == pytest.approx((4 / 3, math.log(4 / 3) / math.log(4)))
    assert small_drive_instance(UNIT, 0.3) is None


def test_slow_drive_threshold_at_unit_constant() -> None:
    """2γ₀²/3 when K₀ = 1."""
    assert slow_drive_threshold(UNIT) == pytest.approx(2 / 3)
    assert not slow_drive_check(UNIT, 0.7).feasible


def test_slow_drive_rate_with_unit_constant_is_exact() -> None:
    """K₀ = 1 keeps (1, γ₀)."""
    result = slow_drive_check(UNIT, 0.5)

    assert result.analytic
    assert (result.K_tilde, result.gamma_tilde) == (1.0, 1.0)


def test_slow_drive_rate_matches_dense_grid() -> None:
    """The optimized slow-drive rate agrees with a dense grid."""
    l = 0.1  # noqa: E741
    result = slow_drive_rate(EULER, l)
    a = l * (0.75 + 0.5 + 0.25)
    b = math.e
    c = l * math.e

    def q(x: np.ndarray) -> np.ndarray:
        return a + (b - c * x) * np.exp(-x)

    assert result.feasible
    assert 0.0 < result.gamma_tilde < 1.0
    assert result.gamma_tilde == pytest.approx(_oracle(1.0, q, 1.0), abs=1e-6)


def test_slow_drive_instance() -> None:
    """(6/5, γ₀ ln(6/5)/ln(2K₀)) below γ₀²/(2 ln²(2K₀))."""
    assert slow_drive_instance(UNIT, 0.5) == pytest.approx((1.2, math.log(1.2) / math.log(2)))
    assert slow_drive_instance(UNIT, 2.0) is None


def test_time_average_generic_pair() -> None:
    """q = avg·T + K e^{−γT} < 1 gives (1/q, ln(1/q)/T)."""
    report = time_average_check(UNIT, 0.4, 2.0)
    q = 0.8 + math.exp(-2.0)

    assert report.passed
    assert report.q == pytest.approx(q)
    assert report.generic == pytest.approx((1 / q, math.log(1 / q) / 2.0))
    assert report.instance is None


def test_time_average_instance() -> None:
    """T = ln(4K)/γ with avg = 1/(2T) gives (4/3, ln(4/3)/T)."""
    period = math.log(4.0)

    report = time_average_check(UNIT, 1.0 / (2.0 * period), period)

    assert report.instance == pytest.approx((4 / 3, math.log(4 / 3) / period))


def test_time_average_drive_doubles_average() -> None:
    """A drive average contributes 2‖V‖ to the perturbation."""
    report = time_average_check(UNIT, 0.2, 2.0, drive=True)

    assert report.q == pytest.approx(0.8 + math.exp(-2.0))


def test_time_average_drive_instance() -> None:
    """A ‖V‖∞ average of 1/(2T) with T = ln 4 gives (4/3, ln(4/3)/ln 4) although q > 1."""
    period = math.log(4.0)

    report = time_average_check(UNIT, 1.0 / (2.0 * period), period, drive=True)

    assert report.passed
    assert report.generic is None
    assert report.instance == pytest.approx((4 / 3, math.log(4 / 3) / period))


def test_time_average_instance_threshold_in_lindbladian_norm() -> None:
    """Without ``drive`` the instance holds up to ΔL_avg = 1/T and not beyond."""
    period = math.log(4.0)

    assert time_average_check(UNIT, 1.0 / period, period).instance is not None
    assert time_average_check(UNIT, 1.01 / period, period).instance is None
    assert time_average_check(UNIT, 1.01 / (2.0 * period), period, drive=True).instance is None


def test_time_average_fails_for_large_average() -> None:
    """q ≥ 1 and no instance means no bound."""
    report = time_average_check(UNIT, 1.0, 2.0)

    assert not report.passed
    assert report.generic is None


def test_time_average_rejects_short_window() -> None:
    """The window must exceed ln K / γ."""
    with pytest.raises(PerturbationError):
        time_average_check(EULER, 0.1, 0.5)


def test_derivative_average_instance() -> None:
    """(4/3, ln(4/3)/T) for T ≥ ln(4K₀)/γ₀ and average ≤ 1/T²."""
    assert derivative_average_instance(UNIT, 0.25, 2.0) == pytest.approx((4 / 3, math.log(4 / 3) / 2.0))
    assert derivative_average_instance(UNIT, 0.25, 1.0) is None
    assert derivative_average_instance(UNIT, 0.3, 2.0) is None


def test_schedule_bounds_of_constant_drive() -> None:
    """A constant Hamiltonian has no drive and no derivative."""
    bounds = schedule_bounds(ConstantDrive(SIGMA_Z), [0.0, 1.0, 2.0])

    assert (bounds.v_max_raw, bounds.v_max_shifted, bounds.h_dot_max) == (0.0, 0.0, 0.0)


def test_schedule_bounds_identity_shift() -> None:
    """An identity offset counts in the raw norm only."""
    drive = PiecewiseConstantDrive((0.0, 1.0), (np.zeros((2, 2)), SIGMA_Z + 3 * np.eye(2)))

    bounds = schedule_bounds(drive, [0.0, 0.5, 1.5])

    assert bounds.v_max_raw == pytest.approx(4.0)
    assert bounds.v_max_shifted == pytest.approx(1.0)
    assert bounds.h_dot_max == 0.0


def test_schedule_bounds_of_phase_drive() -> None:
    """‖dH/dt‖ at t = 0 is φ'(0) = 2πrc."""
    bounds = schedule_bounds(PhiDrive.counterexample(), [0.0])

    assert bounds.h_dot_max == pytest.approx(12 * math.pi)


def test_schedule_bounds_rejects_empty_grid() -> None:
    """At least one time is required."""
    with pytest.raises(PerturbationError):
        schedule_bounds(ConstantDrive(SIGMA_Z), [])
