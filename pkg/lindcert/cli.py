from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any

from returns.result import Failure, Result, Success

from lindcert import __version__
from lindcert.algebra import AlgebraError
from lindcert.config import LindcertConfig
from lindcert.evolution import PropagationError
from lindcert.logging_utils import configure_logging, get_logger, log_error, log_success
from lindcert.model_file import ModelFileError
from lindcert.operators import LindbladModel, OperatorError, OperatorMatrix
from lindcert.perturbation import PerturbationError
from lindcert.report import Report, inputs_digest, write_text

logger = get_logger(__name__)

NUMERIC_ERRORS = (OperatorError, AlgebraError, PerturbationError, PropagationError, ModelFileError)


def _complex_list(values: Any) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in values]


def _matrix_payload(matrix: OperatorMatrix) -> list[list[list[float]]]:
    return [_complex_list(row) for row in matrix]


def _config(args: argparse.Namespace) -> LindcertConfig:
    config = LindcertConfig.from_env()
    overrides: dict[str, Any] = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "restarts", None) is not None:
        overrides["restarts"] = args.restarts
    if getattr(args, "dt", None) is not None:
        overrides["dt"] = args.dt
    if getattr(args, "tol", None) is not None:
        overrides["fixed_point_tol"] = args.tol
    return replace(config, **overrides)


def _load_model(args: argparse.Namespace) -> Result[LindbladModel, Exception]:
    from lindcert.model_file import read_model
    from lindcert.scenarios import scenario_build

    if args.model is not None:
        loaded: Result[LindbladModel, Exception] = read_model(Path(args.model))
        return loaded
    try:
        return Success(scenario_build(args.scenario).model)
    except OperatorError as exc:
        return Failure(exc)


def _report(args: argparse.Namespace, model: LindbladModel | None = None) -> Report:
    from lindcert.model_file import model_to_dict

    payload: dict[str, Any] = {"argv": args.argv}
    if model is not None:
        payload["model"] = model_to_dict(model)
    return Report(command=list(args.argv), inputs_digest=inputs_digest(payload))


def _emit(text: str, out: str | None) -> int:
    if out is None:
        sys.stdout.write(text)
        return 0
    result = write_text(text, Path(out))
    if isinstance(result, Failure):
        print(f"Error writing report: {result.failure()}", file=sys.stderr)
        return 1
    log_success(logger, f"report written to {result.unwrap()}")
    return 0


def _time_grid(t_end: float, points: int, start: float = 0.0) -> list[float]:
    if points < 2:
        return [start, t_end]
    step = (t_end - start) / (points - 1)
    return [start + i * step for i in range(points - 1)] + [t_end]


def certificate_payload(cert: Any) -> dict[str, Any]:
    from lindcert.certificates import OrthoPairWitness

    witness: Any = None
    if isinstance(cert.witness, OrthoPairWitness):
        witness = {
            "u": _complex_list(cert.witness.u),
            "v": _complex_list(cert.witness.v),
            "value": cert.witness.value,
        }
    elif cert.witness is not None:
        witness = _matrix_payload(cert.witness)
    return {
        "method": cert.method,
        "gamma": cert.gamma,
        "K": cert.K,
        "R": cert.R.value,
        "r": cert.r.value,
        "r_times_d": cert.dim * cert.r.value,
        "mu2": cert.mu2.value,
        "mu2_multiplicity": cert.mu2.multiplicity,
        "saturated": {"R": cert.R.saturated, "r": cert.r.saturated},
        "restarts": cert.R.restarts,
        "classifications": cert.classifications.to_dict(),
        "witness": witness,
    }


def cmd_certify(args: argparse.Namespace) -> int:
    """Compute the Hamiltonian-independent contraction certificate of a dissipator."""
    from lindcert.certificates import certify

    loaded = _load_model(args)
    if isinstance(loaded, Failure):
        print(f"Error loading model: {loaded.failure()}", file=sys.stderr)
        return 1
    model = loaded.unwrap()
    config = _config(args)
    cert = certify(model.jumps, config=config)
    report = _report(args, model)
    report.results = certificate_payload(cert)
    report.warnings.extend(cert.warnings)
    return _emit(report.to_json(), args.out)


def cmd_spectrum(args: argparse.Namespace) -> int:
    """Report the spectrum and second eigenvalue of L_t."""
    from lindcert.superop import build_superoperator, spectral_gap

    loaded = _load_model(args)
    if isinstance(loaded, Failure):
        print(f"Error loading model: {loaded.failure()}", file=sys.stderr)
        return 1
    model = loaded.unwrap()
    spectrum = spectral_gap(build_superoperator(model, args.time), _config(args).fixed_point_tol)
    report = _report(args, model)
    report.results = {
        "time": args.time,
        "eigenvalues": _complex_list(spectrum.eigenvalues),
        "lambda2": None if spectrum.lambda2 is None else [spectrum.lambda2.real, spectrum.lambda2.imag],
        "lambda2_pair": spectrum.lambda2_pair,
        "gap": spectrum.gap,
        "has_nonzero": spectrum.has_nonzero,
    }
    if not spectrum.has_nonzero:
        report.warnings.append("superoperator has no nonzero eigenvalue")
    return _emit(report.to_json(), args.out)


def cmd_fixed_points(args: argparse.Namespace) -> int:
    """Report the fixed points of L_t."""
    from lindcert.superop import build_superoperator, fixed_points

    loaded = _load_model(args)
    if isinstance(loaded, Failure):
        print(f"Error loading model: {loaded.failure()}", file=sys.stderr)
        return 1
    model = loaded.unwrap()
    spectrum = fixed_points(build_superoperator(model, args.time), _config(args).fixed_point_tol)
    report = _report(args, model)
    report.results = {
        "time": args.time,
        "fixed_point_count": spectrum.fixed_point_count,
        "unique": spectrum.fixed_point_count == 1,
        "fixed_points": [_matrix_payload(point) for point in spectrum.fixed_points],
        "psd": list(spectrum.fixed_point_psd),
    }
    return _emit(report.to_json(), args.out)


def _propagator_options(args: argparse.Namespace) -> Any:
    from lindcert.evolution import PropagatorOptions

    return PropagatorOptions.from_config(_config(args), scheme=args.scheme)


def cmd_simulate(args: argparse.Namespace) -> int:
    """Propagate initial states and record an observable."""
    from lindcert.evolution import observable_trajectory
    from lindcert.scenarios import parse_observable, parse_state

    loaded = _load_model(args)
    if isinstance(loaded, Failure):
        print(f"Error loading model: {loaded.failure()}", file=sys.stderr)
        return 1
    model = loaded.unwrap()
    initials = args.initial or ["0"]
    states = [parse_state(spec, model.dim) for spec in initials]
    observable = parse_observable(args.observable, model.dim)
    grid = _time_grid(args.t_end, args.points)
    trajectory = observable_trajectory(
        model, states, observable, grid, _propagator_options(args), labels=initials
    )
    report = _report(args, model)
    header = ["t", *(f"<{args.observable}>[{label}]" for label in initials)]
    rows = [
        [t, *(trajectory.observables[label][i] for label in initials)]
        for i, t in enumerate(trajectory.times)
    ]
    return _emit(report.to_csv(header, rows), args.out)


def cmd_envelope(args: argparse.Namespace) -> int:
    """Trace distance ‖E_t(ρ) − E_t(σ)‖₁ on a time grid."""
    from lindcert.evolution import contraction_envelope
    from lindcert.scenarios import parse_state

    loaded = _load_model(args)
    if isinstance(loaded, Failure):
        print(f"Error loading model: {loaded.failure()}", file=sys.stderr)
        return 1
    model = loaded.unwrap()
    grid = _time_grid(args.t_end, args.points)
    envelope = contraction_envelope(
        model,
        parse_state(args.rho, model.dim),
        parse_state(args.sigma, model.dim),
        grid,
        _propagator_options(args),
    )
    report = _report(args, model)
    rows = [[t, value] for t, value in zip(grid, envelope, strict=True)]
    return _emit(report.to_csv(["t", "trace_norm"], rows), args.out)


def cmd_ladder_scan(args: argparse.Namespace) -> int:
    """μ₂ of a ladder family for d = 2..dmax."""
    from lindcert.ladder import family_scan

    scan = family_scan(args.family, args.dmax, args.gamma)
    report = _report(args)
    notes = {"family": scan.family, "crossover": scan.crossover}
    return _emit(report.to_csv(["d", "mu2"], [list(row) for row in scan.rows], notes), args.out)


def cmd_ladder_c_alpha(args: argparse.Namespace) -> int:
    """Tabulate c_α and the block μ₂ of the 3-level ladder."""
    from lindcert.ladder import c_alpha_scan

    rows = c_alpha_scan(args.min, args.max, args.steps)
    report = _report(args)
    return _emit(report.to_csv(["alpha", "c_alpha", "mu2"], [list(row) for row in rows]), args.out)


def _perturbed_payload(result: Any) -> dict[str, Any]:
    return {
        "feasible": result.feasible,
        "K_tilde": result.K_tilde,
        "gamma_tilde": result.gamma_tilde,
        "x_star": result.x_star,
        "analytic": result.analytic,
        "method": result.method,
    }


def cmd_perturb(args: argparse.Namespace) -> int:
    """Contraction constants under small, slow or averaged perturbations."""
    from lindcert import perturbation as pt

    base = pt.BaseContraction(K=args.k, gamma=args.gamma)
    report = _report(args)
    results: dict[str, Any] = {"base": {"K": base.K, "gamma": base.gamma}}
    if args.kind == "small":
        results["threshold"] = pt.small_drive_threshold(base)
        results["rate"] = _perturbed_payload(pt.small_drive_check(base, args.vmax))
        results["instance"] = pt.small_drive_instance(base, args.vmax)
    elif args.kind == "slow":
        results["threshold"] = pt.slow_drive_threshold(base)
        results["rate"] = _perturbed_payload(pt.slow_drive_check(base, args.hdot))
        results["instance"] = pt.slow_drive_instance(base, args.hdot)
    elif args.kind == "lemma":
        results["rate"] = _perturbed_payload(pt.perturbed_rate(base, args.delta_l))
    else:
        average = pt.time_average_check(base, args.avg, args.period, drive=args.drive)
        results.update(
            passed=average.passed, q=average.q, generic=average.generic, instance=average.instance
        )
    report.results = results
    return _emit(report.to_json(), args.out)


def _scenario_params(args: argparse.Namespace) -> dict[str, Any]:
    if args.name == "ce1":
        return {"hamiltonian": not args.no_hamiltonian}
    if args.name == "ce2":
        return {"r": args.r, "c": args.c}
    if args.name == "depolarizing":
        return {"gamma": args.gamma}
    return {"alpha": args.alpha, "eta": args.eta}


def cmd_scenario(args: argparse.Namespace) -> int:
    """Build a named scenario and run its default experiment."""
    from lindcert.model_file import write_model
    from lindcert.scenarios import scenario_build

    scenario = scenario_build(args.name, **_scenario_params(args))
    report = _report(args, scenario.model)
    if args.export is not None:
        written = write_model(scenario.model, Path(args.export))
        if isinstance(written, Failure):
            print(f"Error writing model: {written.failure()}", file=sys.stderr)
            return 1
        report.results = {"scenario": scenario.name, "model_file": str(written.unwrap())}
        return _emit(report.to_json(), args.out)
    runner = {
        "ce1": _run_ce1,
        "ce2": _run_ce2,
        "depolarizing": _run_certified,
        "ladder3": _run_certified,
    }[args.name]
    return runner(args, scenario, report)


def _run_ce1(args: argparse.Namespace, scenario: Any, report: Report) -> int:
    from lindcert.evolution import observable_trajectory
    from lindcert.scenarios import parse_observable, parse_state

    experiment = scenario.experiment
    t_end = args.t_end if args.t_end is not None else experiment["t_end"]
    grid = _time_grid(t_end, args.points)
    labels = experiment["initials"]
    states = [parse_state(label, 4) for label in labels]
    observable = parse_observable(experiment["observable"], 4)
    variants = (
        ["with_hamiltonian", "without_hamiltonian"]
        if not args.no_hamiltonian
        else ["without_hamiltonian"]
    )
    series: dict[str, Any] = {}
    for variant in variants:
        trajectory = observable_trajectory(
            scenario.variants[variant], states, observable, grid, _propagator_options(args), labels=labels
        )
        for label in labels:
            series[f"{variant}[{label}]"] = trajectory.observables[label]
    header = ["t", *series]
    rows = [[t, *(values[i] for values in series.values())] for i, t in enumerate(grid)]
    return _emit(report.to_csv(header, rows), args.out)


def _run_ce2(args: argparse.Namespace, scenario: Any, report: Report) -> int:
    import numpy as np

    from lindcert.evolution import (
        PropagatorOptions,
        approximate_difference,
        approximation_bound,
        contraction_envelope,
    )
    from lindcert.operators import trace_norm
    from lindcert.scenarios import ce2_snapshot, parse_state
    from lindcert.superop import build_superoperator, spectral_gap

    if args.spectrum:
        phases = np.linspace(0.0, 2 * math.pi, args.points, endpoint=False)
        rows = [
            [phi, spectral_gap(build_superoperator(ce2_snapshot(float(phi)), 0.0)).gap]
            for phi in phases
        ]
        notes = {"min_gap": min(row[1] for row in rows)}
        return _emit(report.to_csv(["phi", "gap"], rows, notes), args.out)

    experiment = scenario.experiment
    t_end = args.t_end if args.t_end is not None else experiment["t_end"]
    dt = args.dt if args.dt is not None else experiment["dt"]
    grid = _time_grid(t_end, args.points)
    options = PropagatorOptions.from_config(_config(args), scheme=args.scheme, dt=dt)
    envelope = contraction_envelope(
        scenario.model, parse_state(experiment["rho"], 4), parse_state(experiment["sigma"], 4), grid, options
    )
    bound = 2.0 - approximation_bound(args.r, args.c)
    rows = [
        [t, value, trace_norm(approximate_difference(t, args.r, args.c)), bound]
        for t, value in zip(grid, envelope, strict=True)
    ]
    if float(np.min(envelope)) < bound:
        report.warnings.append("envelope dropped below the non-contractivity bound")
    notes = {"lower_bound": bound, "min_envelope": float(np.min(envelope))}
    return _emit(report.to_csv(["t", "trace_norm", "approx_trace_norm", "lower_bound"], rows, notes), args.out)


def _run_certified(args: argparse.Namespace, scenario: Any, report: Report) -> int:
    from lindcert.certificates import certify
    from lindcert.ladder import LadderSpec, c_alpha, ladder_mu2

    cert = certify(scenario.model.jumps, config=_config(args))
    results: dict[str, Any] = {"scenario": scenario.name, "certificate": certificate_payload(cert)}
    if scenario.name == "ladder3":
        spec = LadderSpec((1.0, args.alpha), args.eta)
        results["ladder_mu2"] = ladder_mu2(spec)
        results["c_alpha"] = c_alpha(args.alpha)
    report.results = results
    report.warnings.extend(cert.warnings)
    return _emit(report.to_json(), args.out)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", metavar="PATH", help="Write the report to PATH instead of stdout")
    parser.add_argument("--seed", type=int, metavar="S", help="Random seed (default: LINDBLAD_SEED or 0)")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Log level (default: LINDBLAD_LOG_LEVEL or INFO)",
    )


def _add_model_source(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--model", metavar="F", help="Model file (JSON)")
    source.add_argument(
        "--scenario",
        choices=["ce1", "ce2", "depolarizing", "ladder3"],
        help="Built-in scenario with default parameters",
    )


def _add_propagation(parser: argparse.ArgumentParser, t_end_required: bool = True) -> None:
    parser.add_argument(
        "--t-end", type=float, required=t_end_required, default=None, metavar="T", help="Final time"
    )
    parser.add_argument("--dt", type=float, metavar="D", help="Nominal time step (default: LINDBLAD_DT)")
    parser.add_argument("--points", type=int, default=101, metavar="N", help="Recorded time points (default: 101)")
    parser.add_argument(
        "--scheme", choices=["expstep", "rk4"], default="expstep", help="Integrator (default: expstep)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lindcert",
        description="Contraction certificates and simulations for driven Lindbladians",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  lindcert certify --scenario depolarizing
  lindcert spectrum --model model.json --time 0.5
  lindcert simulate --scenario ce1 --t-end 50 --initial +1 --initial +0 --observable IZ
  lindcert envelope --model model.json --rho 00 --sigma 01 --t-end 5
  lindcert ladder scan --family am --dmax 5
  lindcert ladder c-alpha --min 0.2 --max 4 --steps 50
  lindcert perturb small --k 1 --gamma 1 --vmax 0.4
  lindcert scenario ce2 --spectrum --points 256
  lindcert scenario ce1 --export ce1.json
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(title="commands", dest="command", required=True)

    # 'certify' subcommand
    certify_parser = subparsers.add_parser(
        "certify", help="Hamiltonian-independent contraction certificate", description=cmd_certify.__doc__
    )
    _add_model_source(certify_parser)
    certify_parser.add_argument("--restarts", type=int, metavar="N", help="Pair-search restarts (default: 64)")
    _add_common(certify_parser)
    certify_parser.set_defaults(func=cmd_certify)

    # 'spectrum' subcommand
    spectrum_parser = subparsers.add_parser(
        "spectrum", help="Spectrum and gap of L_t", description=cmd_spectrum.__doc__
    )
    _add_model_source(spectrum_parser)
    spectrum_parser.add_argument("--time", type=float, default=0.0, metavar="T", help="Time t (default: 0)")
    spectrum_parser.add_argument("--tol", type=float, metavar="E", help="Kernel tolerance")
    _add_common(spectrum_parser)
    spectrum_parser.set_defaults(func=cmd_spectrum)

    # 'fixed-points' subcommand
    fixed_parser = subparsers.add_parser(
        "fixed-points", help="Fixed points of L_t", description=cmd_fixed_points.__doc__
    )
    _add_model_source(fixed_parser)
    fixed_parser.add_argument("--time", type=float, default=0.0, metavar="T", help="Time t (default: 0)")
    fixed_parser.add_argument("--tol", type=float, metavar="E", help="Kernel tolerance (default: 1e-9)")
    _add_common(fixed_parser)
    fixed_parser.set_defaults(func=cmd_fixed_points)

    # 'simulate' subcommand
    simulate_parser = subparsers.add_parser(
        "simulate", help="Observable trajectories", description=cmd_simulate.__doc__
    )
    _add_model_source(simulate_parser)
    _add_propagation(simulate_parser)
    simulate_parser.add_argument(
        "--initial", action="append", metavar="SPEC", help="Initial state (repeatable), e.g. +1 or 00"
    )
    simulate_parser.add_argument("--observable", default="I", metavar="SPEC", help="Observable (default: I)")
    _add_common(simulate_parser)
    simulate_parser.set_defaults(func=cmd_simulate)

    # 'envelope' subcommand
    envelope_parser = subparsers.add_parser(
        "envelope", help="Trace-distance envelope", description=cmd_envelope.__doc__
    )
    _add_model_source(envelope_parser)
    _add_propagation(envelope_parser)
    envelope_parser.add_argument("--rho", required=True, metavar="SPEC", help="First initial state")
    envelope_parser.add_argument("--sigma", required=True, metavar="SPEC", help="Second initial state")
    _add_common(envelope_parser)
    envelope_parser.set_defaults(func=cmd_envelope)

    # 'ladder' subcommands
    ladder_parser = subparsers.add_parser("ladder", help="Ladder dissipators")
    ladder_sub = ladder_parser.add_subparsers(title="ladder commands", dest="ladder_command", required=True)
    scan_parser = ladder_sub.add_parser("scan", help="μ₂ versus dimension", description=cmd_ladder_scan.__doc__)
    scan_parser.add_argument("--family", choices=["ho", "am", "ul"], required=True, help="Ladder family")
    scan_parser.add_argument("--dmax", type=int, required=True, metavar="N", help="Largest dimension (<= 16)")
    scan_parser.add_argument("--gamma", type=float, default=1.0, metavar="G", help="Family rate (default: 1)")
    _add_common(scan_parser)
    scan_parser.set_defaults(func=cmd_ladder_scan)
    c_alpha_parser = ladder_sub.add_parser(
        "c-alpha", help="3-level ladder constant c_α", description=cmd_ladder_c_alpha.__doc__
    )
    c_alpha_parser.add_argument("--min", type=float, required=True, metavar="A", help="Smallest α")
    c_alpha_parser.add_argument("--max", type=float, required=True, metavar="B", help="Largest α")
    c_alpha_parser.add_argument("--steps", type=int, required=True, metavar="N", help="Grid points")
    _add_common(c_alpha_parser)
    c_alpha_parser.set_defaults(func=cmd_ladder_c_alpha)

    # 'perturb' subcommands
    perturb_parser = subparsers.add_parser("perturb", help="Perturbation-robust rates")
    perturb_sub = perturb_parser.add_subparsers(title="perturb commands", dest="kind", required=True)
    small = perturb_sub.add_parser("small", help="Small drive V(t)")
    small.add_argument("--vmax", type=float, required=True, metavar="V", help="sup_t ‖V(t)‖∞")
    slow = perturb_sub.add_parser("slow", help="Slowly varying Hamiltonian")
    slow.add_argument("--hdot", type=float, required=True, metavar="H", help="sup_t ‖dH/dt‖∞")
    lemma = perturb_sub.add_parser("lemma", help="General Lindbladian perturbation")
    lemma.add_argument("--delta-l", type=float, required=True, metavar="D", help="sup_t ‖ΔL‖₁→₁")
    average = perturb_sub.add_parser("average", help="Time-averaged perturbation")
    average.add_argument("--avg", type=float, required=True, metavar="A", help="Window average")
    average.add_argument("--period", type=float, required=True, metavar="T", help="Window length T")
    average.add_argument("--drive", action="store_true", help="Average is of ‖V‖∞ rather than ‖ΔL‖")
    for sub in (small, slow, lemma, average):
        sub.add_argument("--k", type=float, required=True, metavar="K", help="Base constant K >= 1")
        sub.add_argument("--gamma", type=float, required=True, metavar="G", help="Base rate γ > 0")
        _add_common(sub)
        sub.set_defaults(func=cmd_perturb)

    # 'scenario' subcommand
    scenario_parser = subparsers.add_parser(
        "scenario", help="Built-in scenarios and their default experiments", description=cmd_scenario.__doc__
    )
    scenario_parser.add_argument("name", choices=["ce1", "ce2", "depolarizing", "ladder3"])
    scenario_parser.add_argument("--no-hamiltonian", action="store_true", help="ce1: drop H = σʸ ⊗ I")
    scenario_parser.add_argument("--r", type=float, default=3.0, help="ce2: phase exponent (default: 3)")
    scenario_parser.add_argument("--c", type=float, default=2.0, help="ce2: phase acceleration (default: 2)")
    scenario_parser.add_argument("--spectrum", action="store_true", help="ce2: gap table over φ")
    scenario_parser.add_argument("--gamma", type=float, default=1.0, help="depolarizing: rate (default: 1)")
    scenario_parser.add_argument("--alpha", type=float, default=1.0, help="ladder3: α (default: 1)")
    scenario_parser.add_argument("--eta", type=float, default=1.0, help="ladder3: η (default: 1)")
    scenario_parser.add_argument("--export", metavar="PATH", help="Write the scenario's model file")
    scenario_parser.add_argument("--restarts", type=int, metavar="N", help="Pair-search restarts")
    _add_propagation(scenario_parser, t_end_required=False)
    _add_common(scenario_parser)
    scenario_parser.set_defaults(func=cmd_scenario)

    return parser


def main(argv: list[str] | None = None) -> int:
    arguments = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(arguments)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    args.argv = arguments
    configure_logging(None if args.log_level is None else getattr(logging, args.log_level))
    try:
        result: int = args.func(args)
    except NUMERIC_ERRORS as exc:
        log_error(logger, f"{args.command} failed")
        print(f"Error: {exc}", file=sys.stderr)
        return 1
    return result


if __name__ == "__main__":
    sys.exit(main())
