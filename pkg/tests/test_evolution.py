"""Tests for propagation, contraction envelopes and the trace-norm right derivative."""

from __future__ import annotations

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from lindcert.evolution import (
    PropagationError,
    PropagatorOptions,
    approximate_difference,
    approximation_bound,
    contraction_envelope,
    decay_slope,
    observable_trajectory,
    propagate,
    trace_norm_right_derivative,
)
from lindcert.operators import (
    SIGMA_MINUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    ConstantDrive,
    JumpSet,
    LindbladModel,
    OperatorError,
    PhiDrive,
    PiecewiseConstantDrive,
    ZeroDrive,
    is_psd,
    ket,
    pauli_string,
    projector,
    random_density_matrix,
    random_hermitian,
    random_traceless_hermitian,
    trace_norm,
)
from lindcert.scenarios import ce1_fixed_point, ce1_jumps, depolarizing_jumps


def _random_model(dim: int, rng: np.random.Generator) -> LindbladModel:
    jumps = JumpSet.of(
        rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)),
        rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)),
    )
    return LindbladModel(dim, jumps, ConstantDrive(random_hermitian(dim, rng)))


def test_propagator_options_validation() -> None:
    """Unknown schemes and non-positive steps are rejected."""
    with pytest.raises(OperatorError):
        PropagatorOptions(scheme="euler")
    with pytest.raises(OperatorError):
        PropagatorOptions(dt=0.0)
    assert PropagatorOptions.from_config(scheme="rk4", dt=0.5).dt == 0.5


def test_zero_generator_keeps_state() -> None:
    """L = 0 leaves the input untouched."""
    model = LindbladModel(2, JumpSet(2, ()), ZeroDrive(2))
    x0 = projector(ket("+"))

    final, trajectory = propagate(model, 0.0, 3.0, x0)

    assert_allclose(final, x0, atol=1e-14)
    assert_allclose(trajectory.times, [0.0, 3.0])


def test_propagate_rejects_backwards_interval() -> None:
    """Propagation runs forward in time only."""
    model = LindbladModel.dissipative(depolarizing_jumps())
    with pytest.raises(OperatorError):
        propagate(model, 2.0, 1.0, np.eye(2) / 2)


def test_ce1_relaxes_to_fixed_point(rng: np.random.Generator) -> None:
    """The undriven counterexample relaxes to its unique state."""
    model = LindbladModel.dissipative(ce1_jumps())
    final, _ = propagate(model, 0.0, 50.0, random_density_matrix(4, rng))

    assert np.max(np.abs(final - ce1_fixed_point())) < 1e-6


def test_depolarizing_envelope_decay() -> None:
    """‖E_t(ρ − σ)‖₁ = 2e^{−4t} for orthogonal qubit states."""
    model = LindbladModel.dissipative(depolarizing_jumps(1.0))
    grid = list(np.linspace(0.0, 3.0, 31))

    envelope = contraction_envelope(model, projector(ket("0")), projector(ket("1")), grid)

    expected = 2.0 * np.exp(-4.0 * np.asarray(grid))
    assert_allclose(envelope, expected, rtol=1e-2)
    assert decay_slope(grid, envelope) == pytest.approx(-4.0, rel=1e-3)


def test_envelope_of_equal_states_is_zero(rng: np.random.Generator) -> None:
    """ρ = σ gives an identically zero envelope."""
    model = _random_model(3, rng)
    state = random_density_matrix(3, rng)

    envelope = contraction_envelope(model, state, state, [0.0, 0.5, 1.0])

    assert_allclose(envelope, 0.0, atol=1e-14)


def test_envelope_is_nonincreasing_and_states_stay_physical(rng: np.random.Generator) -> None:
    """CPTP evolution never increases trace distance nor leaves the state space."""
    model = _random_model(3, rng)
    grid = list(np.linspace(0.0, 2.0, 21))
    rho, sigma = random_density_matrix(3, rng), random_density_matrix(3, rng)

    envelope = contraction_envelope(model, rho, sigma, grid)
    _, trajectory = propagate(model, 0.0, 2.0, rho, record=grid)

    assert envelope[0] == pytest.approx(trace_norm(rho - sigma))
    assert np.all(np.diff(envelope) <= 1e-8)
    for state in trajectory.states:
        assert np.trace(state).real == pytest.approx(1.0, abs=1e-8)
        assert is_psd(state, 1e-8)


def test_piecewise_drive_is_split_at_breakpoints() -> None:
    """A drive that switches on at t = 1 only acts after the switch."""
    jumps = JumpSet.of(0.1 * SIGMA_Z)
    drive = PiecewiseConstantDrive((0.0, 1.0), (np.zeros((2, 2)), math.pi / 2 * SIGMA_X))
    model = LindbladModel(2, jumps, drive)
    start = projector(ket("0"))

    before, _ = propagate(model, 0.0, 1.0, start)
    after, _ = propagate(model, 0.0, 2.0, start)

    assert_allclose(before, start, atol=1e-12)
    assert after[1, 1].real > 0.5


def test_smooth_drive_schemes_agree() -> None:
    """Midpoint exponentials and RK4 agree on a slowly rotating drive."""
    drive = PhiDrive(c=0.1, r=3.0, base=(SIGMA_Z, SIGMA_X, SIGMA_Y))
    model = LindbladModel(2, JumpSet.of(SIGMA_MINUS), drive)
    start = projector(ket("+"))

    expstep, _ = propagate(model, 0.0, 1.0, start, PropagatorOptions(scheme="expstep", dt=0.01))
    rk4, _ = propagate(model, 0.0, 1.0, start, PropagatorOptions(scheme="rk4", dt=0.01))

    assert_allclose(expstep, rk4, atol=1e-6)


def test_refinement_budget_exhaustion_raises() -> None:
    """A zero refinement budget with an unreachable tolerance fails loudly."""
    drive = PhiDrive(c=1.0, r=3.0, base=(SIGMA_Z, SIGMA_X, SIGMA_Y))
    model = LindbladModel(2, JumpSet.of(SIGMA_MINUS), drive)
    options = PropagatorOptions(dt=1.0, tol_state=1e-15, max_refinements=0)

    with pytest.raises(PropagationError):
        propagate(model, 0.0, 1.0, projector(ket("+")), options)


def test_spectral_decay_rate_of_amplitude_damping() -> None:
    """Distance to the fixed point decays at least at 0.9 times the spectral gap γ/2."""
    model = LindbladModel.dissipative(JumpSet.of(SIGMA_MINUS))
    grid = list(np.linspace(5.0, 10.0, 26))
    _, trajectory = propagate(model, 0.0, 10.0, projector(ket("+")), record=[0.0, *grid])
    distances = [trace_norm(state - projector(ket("0"))) for state in trajectory.states[1:]]

    assert decay_slope(grid, distances) <= -0.9 * 0.5


def test_ce1_observables_with_and_without_hamiltonian() -> None:
    """Without H the I⊗σᶻ series forget the initial state; with H = σʸ⊗I they do not."""
    jumps = ce1_jumps()
    initials = [projector(ket("+1")), projector(ket("+0"))]
    observable = pauli_string("IZ")
    bare = LindbladModel.dissipative(jumps)
    driven = LindbladModel(4, jumps, ConstantDrive(pauli_string("YI")))

    free = observable_trajectory(bare, initials, observable, [0.0, 50.0], labels=["a", "b"], threads=1)
    forced = observable_trajectory(driven, initials, observable, [0.0, 50.0], labels=["a", "b"], threads=1)

    assert abs(free.observables["a"][-1] - free.observables["b"][-1]) < 1e-4
    assert abs(forced.observables["a"][-1] - forced.observables["b"][-1]) > 1e-2


def test_identity_observable_is_constant(rng: np.random.Generator) -> None:
    """tr ρ(t) = 1 along the trajectory."""
    model = _random_model(2, rng)
    trajectory = observable_trajectory(
        model, [random_density_matrix(2, rng)], np.eye(2), [0.0, 0.5, 1.0], threads=1
    )

    assert_allclose(trajectory.observables["initial_0"], 1.0, atol=1e-10)


def test_observable_trajectory_label_mismatch() -> None:
    """One label per initial state is required."""
    model = LindbladModel.dissipative(depolarizing_jumps())
    with pytest.raises(OperatorError):
        observable_trajectory(model, [np.eye(2) / 2], SIGMA_Z, [0.0, 1.0], labels=["a", "b"])


def test_right_derivative_depolarizing() -> None:
    """∂₊‖σᶻ(t)‖₁ = −8 under unit-rate depolarizing noise."""
    model = LindbladModel.dissipative(depolarizing_jumps(1.0))

    result = trace_norm_right_derivative(model, 0.0, SIGMA_Z)

    assert result.value == pytest.approx(-8.0)
    assert not result.ambiguous


def test_right_derivative_without_jumps_is_zero() -> None:
    """Pure Hamiltonian dynamics conserve the trace norm."""
    model = LindbladModel(2, JumpSet(2, ()), ConstantDrive(SIGMA_X))

    assert trace_norm_right_derivative(model, 0.0, SIGMA_Z).value == 0.0


def test_right_derivative_matches_finite_difference(rng: np.random.Generator) -> None:
    """Formula and forward difference agree on 50 generic (model, x) pairs in d = 2, 3, 4."""
    h = 1e-6
    for case in range(50):
        dim = 2 + case % 3
        model = _random_model(dim, rng)
        x = random_traceless_hermitian(dim, rng)
        stepped, _ = propagate(model, 0.0, h, x)
        numeric = (trace_norm(stepped) - trace_norm(x)) / h

        result = trace_norm_right_derivative(model, 0.0, x)

        if result.ambiguous:
            continue
        assert result.value == pytest.approx(numeric, abs=1e-4 * max(1.0, abs(numeric)))


def test_right_derivative_is_hamiltonian_independent(rng: np.random.Generator) -> None:
    """Swapping H(t) leaves the derivative unchanged."""
    model = _random_model(3, rng)
    other = model.with_hamiltonian(ConstantDrive(random_hermitian(3, rng)))
    x = random_traceless_hermitian(3, rng)

    first = trace_norm_right_derivative(model, 0.0, x).value
    second = trace_norm_right_derivative(other, 0.0, x).value

    assert abs(first - second) < 1e-12


def test_right_derivative_uses_kernel_drift() -> None:
    """When x has a kernel the signs there come from the projected drift; the value stays ≤ 0."""
    model = LindbladModel.dissipative(JumpSet.of(np.kron(SIGMA_MINUS, np.eye(2))))
    x = np.diag([1.0, 0.0, -1.0, 0.0]).astype(complex)

    result = trace_norm_right_derivative(model, 0.0, x)

    assert result.value <= 0.0
    assert set(result.decomposition.signs.tolist()) <= {-1, 0, 1}


def test_right_derivative_rejects_non_hermitian() -> None:
    """The formula is defined for Hermitian x only."""
    model = LindbladModel.dissipative(depolarizing_jumps())
    with pytest.raises(OperatorError):
        trace_norm_right_derivative(model, 0.0, SIGMA_MINUS)


def test_ce2_approximation_has_large_trace_norm() -> None:
    """The analytic approximation keeps trace norm at least 2."""
    for t in (0.0, 0.5, 3.0):
        assert trace_norm(approximate_difference(t)) >= 2.0 - 1e-12
    assert approximation_bound(3.0, 2.0) == pytest.approx(8.5 / (6 * math.pi))


def test_ce2_envelope_short_horizon() -> None:
    """Over t ≤ 2 the driven counterexample keeps ‖E_t(ρ − σ)‖₁ above the lower bound."""
    model = LindbladModel(4, ce1_jumps(), PhiDrive.counterexample())
    grid = list(np.linspace(0.0, 2.0, 41))
    options = PropagatorOptions(dt=0.02, richardson=False)

    envelope = contraction_envelope(model, projector(ket("00")), projector(ket("01")), grid, options)

    assert float(np.min(envelope)) >= 2.0 - approximation_bound() - 0.02


@pytest.mark.slow
def test_ce2_envelope_long_horizon() -> None:
    """Over t ≤ 20 the envelope stays above the lower bound minus the integrator budget."""
    model = LindbladModel(4, ce1_jumps(), PhiDrive.counterexample())
    grid = list(np.linspace(0.0, 20.0, 81))
    options = PropagatorOptions(dt=0.25, richardson=False)

    envelope = contraction_envelope(model, projector(ket("00")), projector(ket("01")), grid, options)

    assert float(np.min(envelope)) >= 2.0 - approximation_bound() - 0.02
