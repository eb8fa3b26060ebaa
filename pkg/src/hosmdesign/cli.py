"""Command-line entry point: ``hosmdesign design|verify|simulate|sweep SCENARIO``.

SCENARIO is a JSON file or the name of a bundled scenario (``pendulum_r1``,
``pendulum_r2``, ``pendulum_r3``, ``chain3_r1``, ``chain3_r2``).

Exit codes: 0 success, 1 invalid input, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import functools
import sys
from pathlib import Path

import numpy as np

from .accuracy import PARAMETERS, power_law_simulator, sweep_and_fit, write_fit_csv
from .design import design_sliding_variable, verify_design
from .errors import NumericalError
from .linalg import format_polynomial
from .lti import relative_degree
from .scenario import BUNDLED, load_scenario
from .simulation import simulate, steady_state_error


def _fmt(v, digits):
    return format(float(v), f".{digits}g")


def _fmt_complex(z, digits):
    if abs(z.imag) == 0.0:
        return _fmt(z.real, digits)
    sign = "+" if z.imag >= 0 else "-"
    return f"{_fmt(z.real, digits)}{sign}{_fmt(abs(z.imag), digits)}j"


def _vec(values, digits):
    return "[" + ", ".join(_fmt(v, digits) for v in values) + "]"


def _sliding_row(scenario):
    """Explicit ``design.C`` if present, otherwise the synthesized row."""
    if scenario.C is not None:
        return scenario.C
    return design_sliding_variable(scenario.system, scenario.gamma).C


def cmd_design(args, out):
    sc = load_scenario(args.scenario)
    d = design_sliding_variable(sc.system, sc.gamma)
    digits = args.digits
    print(f"scenario: {sc.name}", file=out)
    print(f"C = {_vec(d.C, digits)}", file=out)
    print(f"gamma(s) = {format_polynomial(d.gamma, digits=digits)}", file=out)
    print(f"relative degree: {d.realized_r}", file=out)
    zeros = ", ".join(_fmt_complex(z, digits) for z in d.zeros) or "none"
    print(f"sliding-mode eigenvalues: {zeros}", file=out)
    print(f"controllability condition (1-norm): {_fmt(d.controllability_condition, digits)}", file=out)
    return 0


def cmd_verify(args, out):
    sc = load_scenario(args.scenario)
    C = _sliding_row(sc)
    rep = verify_design(sc.system, C, sc.gamma)
    digits = args.digits
    print(f"scenario: {sc.name}", file=out)
    print(f"C = {_vec(C, digits)}", file=out)
    r = "undefined" if rep.relative_degree is None else str(rep.relative_degree)
    print(f"relative degree: {r}", file=out)
    print(f"numerator: {format_polynomial(rep.numerator, digits=digits)}", file=out)
    print(f"denominator: {format_polynomial(rep.denominator, digits=digits)}", file=out)
    zeros = ", ".join(_fmt_complex(z, digits) for z in rep.zeros) or "none"
    print(f"zeros: {zeros}", file=out)
    print(f"mismatch vs gamma: {_fmt(rep.mismatch, digits)}", file=out)
    for note in rep.notes:
        print(f"note: {note}", file=out)
    print("minimum phase" if rep.minimum_phase else "NOT minimum phase", file=out)
    return 0


def cmd_simulate(args, out):
    sc = load_scenario(args.scenario)
    C = _sliding_row(sc)
    r = relative_degree(sc.system, C)
    spec = sc.controller_spec(r)
    traj = simulate(sc.system, C, spec, sc.simulation)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / f"{sc.name}_trajectory.csv"
    traj.write_csv(csv_path)
    digits = args.digits
    lines = [
        f"scenario: {sc.name}",
        f"law: {spec.law} (order {spec.order}, k0={spec.k0}" + (f", k1={spec.k1})" if spec.k1 is not None else ")"),
        f"tau = {_fmt(sc.simulation.tau, digits)}, t_end = {_fmt(sc.simulation.t_end, digits)}",
        f"|x(0)| = {_fmt(np.linalg.norm(traj.states[0]), digits)}",
        f"|x(t_end)| = {_fmt(np.linalg.norm(traj.states[-1]), digits)}",
    ]
    for i in range(r):
        lines.append(f"steady error |sigma^({i})| = {_fmt(steady_state_error(traj, i), digits)}")
    lines.append(f"trajectory: {csv_path}")
    report = "\n".join(lines) + "\n"
    (outdir / f"{sc.name}_simulate_report.txt").write_text(report)
    out.write(report)
    return 0


def cmd_sweep(args, out):
    if args.self_test:
        return _sweep_self_test(args, out)
    if args.scenario is None:
        raise ValueError("sweep needs a scenario (or --self-test)")
    sc = load_scenario(args.scenario)
    parameter = args.parameter or sc.sweep_parameter or "sampling_period"
    grid = sc.sweep_grid
    if grid is None:
        raise ValueError("scenario has no 'sweep' section")
    C = _sliding_row(sc)
    spec = sc.controller_spec(relative_degree(sc.system, C))
    fits = sweep_and_fit(sc.system, C, spec, sc.simulation, parameter, grid, workers=args.workers)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / f"{sc.name}_sweep_{parameter}.csv"
    write_fit_csv(path, fits)
    _print_fits(sc.name, parameter, fits, args.digits, out)
    print(f"fits: {path}", file=out)
    return 0


def _sweep_self_test(args, out):
    from .systems import PENDULUM_GAMMA, pendulum
    from .controllers import ControllerSpec
    from .simulation import SimConfig

    sysm = pendulum()
    d = design_sliding_variable(sysm, PENDULUM_GAMMA[1])
    simulator = functools.partial(power_law_simulator, exponent=2.0, parameter="sampling_period")
    fits = sweep_and_fit(sysm, d.C, ControllerSpec.relay(), SimConfig(), "sampling_period", simulator=simulator)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    write_fit_csv(outdir / "self_test_sweep.csv", fits)
    _print_fits("self-test (error = 3 tau^2)", "sampling_period", fits, args.digits, out)
    ok = abs(fits[0].slope - 2.0) < 1e-9
    print("self-test " + ("passed" if ok else "FAILED"), file=out)
    return 0 if ok else 2


def _print_fits(name, parameter, fits, digits, out):
    print(f"scenario: {name}", file=out)
    print(f"parameter: {parameter}", file=out)
    print("i,slope,intercept,residual", file=out)
    for f in fits:
        print(f"{f.derivative_order},{_fmt(f.slope, digits)},{_fmt(f.intercept, digits)},{_fmt(f.residual, digits)}", file=out)
        if f.clamped:
            print(f"note: zero error clamped at {parameter} = {list(f.clamped)}", file=out)


COMMANDS = {"design": cmd_design, "verify": cmd_verify, "simulate": cmd_simulate, "sweep": cmd_sweep}


def build_parser():
    parser = argparse.ArgumentParser(prog="hosmdesign", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("scenario", nargs="?", help=f"scenario JSON file or bundled name ({', '.join(BUNDLED)})")
    parser.add_argument("--out", default=".", help="output directory for CSV artifacts")
    parser.add_argument("--digits", type=int, default=17, help="significant digits in printed numbers")
    parser.add_argument("--self-test", action="store_true", help="sweep: fit a synthetic 3*tau^2 error law")
    parser.add_argument("--parameter", choices=PARAMETERS, help="sweep: override the swept parameter")
    parser.add_argument("--workers", type=int, default=None, help="sweep: worker processes")
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    if args.scenario is None and not (args.command == "sweep" and args.self_test):
        print(f"error: {args.command} requires a scenario", file=sys.stderr)
        return 1
    if not 1 <= args.digits <= 17:
        print("error: --digits must be between 1 and 17", file=sys.stderr)
        return 1
    try:
        return COMMANDS[args.command](args, out)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
