"""Command-line driver: ``polygon-cc <command> [options]``.

Every command prints either a plain table or a JSON document of the shape
``{"command", "inputs", "results", "pass"}`` and exits with

    0 pass, 1 check failed, 2 usage or parse error, 3 infeasible parameters,
    4 invalid geometry, 5 solver non-convergence, 6 close-approach abort.

Job files are JSON::

    {"n": 6, "masses": [...], "center_mass": 0.3, "omega_squared": 2.0,
     "positions": [[x, y], ...]}

``positions`` is optional; without it the regular N-gon plus a central body
is used. ``masses`` lists the N polygon masses (or one mass per position when
positions are given); if omitted, the equal-mass solution is used.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

import numpy as np

from . import circulant, dynamics, identities
from .central_config import (
    cc_residual,
    solve_masses_circulant,
    solve_masses_newton,
    theorem_masses,
)
from .errors import (
    CoincidentPositionsError,
    ConvergenceError,
    DomainError,
    InfeasibleError,
)
from .euler_collinear import EulerProblem, euler_residual, midpoint_residual, solve_Q
from .geometry import Configuration, metrics, polygon_plus_center_configuration

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_GEOMETRY = 4
EXIT_NONCONVERGENCE = 5
EXIT_CLOSE_APPROACH = 6

MAX_IDENTITY_N = 1024


class UsageError(Exception):
    pass


def _pt(z):
    z = complex(z)
    return [z.real, z.imag]


def parse_n_range(text: str):
    """``"5"`` or ``"2..32"`` (inclusive) to a range of N values."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", text)
    if not m:
        raise UsageError(f"bad N range {text!r}; use N or A..B")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if not 2 <= lo <= hi <= MAX_IDENTITY_N:
        raise UsageError(f"N range must lie within 2..{MAX_IDENTITY_N}, got {text!r}")
    return range(lo, hi + 1)


# -- job documents ----------------------------------------------------------

def load_job(path) -> dict:
    try:
        with open(path) as fh:
            job = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read job file {path}: {exc}") from exc
    if not isinstance(job, dict):
        raise UsageError("job file must hold a JSON object")
    return job


def job_from_args(args) -> dict:
    job = load_job(args.config) if getattr(args, "config", None) else {}
    for key, attr in (("n", "n"), ("omega_squared", "omega2"),
                      ("center_mass", "center"), ("masses", "masses")):
        value = getattr(args, attr, None)
        if value is not None:
            job[key] = value
    return job


def _number(job, key, required=True):
    value = job.get(key)
    if value is None:
        if required:
            raise UsageError(f"missing field {key!r}")
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise UsageError(f"field {key!r} must be a number")
    if not math.isfinite(value):
        raise UsageError(f"field {key!r} must be finite")
    return value


def job_configuration(job) -> Configuration:
    """Build the configuration a job document describes."""
    masses = job.get("masses")
    if masses is not None:
        if not isinstance(masses, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in masses):
            raise UsageError("'masses' must be a list of numbers")
    positions = job.get("positions")
    center = _number(job, "center_mass", required=False)
    try:
        if positions is not None:
            pts = np.asarray(positions, dtype=float)
            if pts.ndim != 2 or pts.shape[1] != 2:
                raise UsageError("'positions' must be a list of [x, y] pairs")
            if masses is None:
                raise UsageError("'masses' is required with explicit positions")
            if len(masses) == len(pts) - 1 and center is not None:
                masses = list(masses) + [center]
            return Configuration(pts, masses)
        n = _number(job, "n")
        if int(n) != n:
            raise UsageError("'n' must be an integer")
        n = int(n)
        if center is None:
            raise UsageError("missing field 'center_mass'")
        if masses is None:
            masses = [theorem_masses(n, _number(job, "omega_squared"), center)] * n
        return polygon_plus_center_configuration(n, masses, center)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (DomainError, InfeasibleError)):
            raise
        raise UsageError(str(exc)) from exc


# -- output -----------------------------------------------------------------

def emit(args, command, inputs, results, passed, table_lines):
    if args.format == "json":
        doc = {"command": command, "inputs": inputs, "results": results,
               "pass": bool(passed)}
        print(json.dumps(doc, indent=2))
    else:
        for line in table_lines:
            print(line)
        print("PASS" if passed else "FAIL")
    return EXIT_PASS if passed else EXIT_FAIL


def _identity_row(rep, tol):
    return {"lhs": _pt(rep.lhs), "rhs": rep.rhs,
            "abs_difference": rep.abs_difference, "pass": rep.passed(tol)}


# -- commands ---------------------------------------------------------------

def cmd_identities(args):
    ns = parse_n_range(args.n)
    tol = args.tol_identity
    rows = []
    lines = [f"{'N':>5} {'csc_sum':>22} {'cosecant diff':>14} {'pair diff':>14}"]
    for n in ns:
        a = identities.verify_cosecant_identity(n)
        b = identities.verify_pair_identity(n)
        rows.append({"n": n, "csc_sum": identities.csc_sum(n),
                     "cosecant": _identity_row(a, tol), "pair": _identity_row(b, tol)})
        lines.append(f"{n:>5} {a.rhs:>22.16g} {a.abs_difference:>14.3e} "
                     f"{b.abs_difference:>14.3e}")
    passed = all(r["cosecant"]["pass"] and r["pair"]["pass"] for r in rows)
    return emit(args, "identities", {"n": args.n, "tol_identity": tol},
                {"rows": rows}, passed, lines)


def cmd_masses(args):
    N, w2, mc = args.n, args.omega2, args.center
    m = theorem_masses(N, w2, mc)
    spectral = None
    rel = None
    if N >= 4:
        sol = solve_masses_circulant(N, w2, mc)
        spectral = sol.masses.tolist()
        rel = float(np.max(np.abs(sol.masses - m)) / m)
    passed = rel is None or rel < args.tol_agreement
    if args.write_config:
        with open(args.write_config, "w") as fh:
            json.dump({"n": N, "masses": [m] * N, "center_mass": mc,
                       "omega_squared": w2}, fh, indent=2)
    lines = [f"theorem mass     {m:.17g}"]
    if spectral is not None:
        lines.append(f"circulant masses {', '.join(f'{v:.17g}' for v in spectral)}")
        lines.append(f"relative diff    {rel:.3e}")
    return emit(args, "masses",
                {"n": N, "omega_squared": w2, "center_mass": mc,
                 "tol_agreement": args.tol_agreement},
                {"theorem_mass": m, "circulant_masses": spectral,
                 "relative_difference": rel}, passed, lines)


def _omega_squared_for(job, config, override=None):
    if override is not None:
        return override
    value = _number(job, "omega_squared", required=False)
    if value is not None:
        return value
    met = metrics(config)
    return met.potential_U / met.inertia_I


def cmd_verify(args):
    job = job_from_args(args)
    config = job_configuration(job)
    w2 = _omega_squared_for(job, config)
    if not w2 > 0:
        raise UsageError("omega_squared must be positive")
    rep = cc_residual(config, w2)
    met = metrics(config)
    ratio = met.potential_U / met.inertia_I
    passed = rep.sup_norm < args.tol_residual
    inputs = {"positions": [_pt(z) for z in config.positions],
              "masses": config.masses.tolist(), "omega_squared": w2,
              "tol_residual": args.tol_residual}
    results = {"per_body_norms": rep.per_body_norms.tolist(),
               "per_body": [_pt(z) for z in rep.per_body],
               "sup_norm": rep.sup_norm, "mass_center": _pt(met.mass_center),
               "potential_U": met.potential_U, "inertia_I": met.inertia_I,
               "U_over_I": ratio, "virial_gap": abs(w2 - ratio)}
    lines = [f"body {k:>3}  |residual| = {v:.3e}"
             for k, v in enumerate(rep.per_body_norms, start=1)]
    lines += [f"sup_norm   {rep.sup_norm:.3e}",
              f"c0         ({met.mass_center.real:.3e}, {met.mass_center.imag:.3e})",
              f"U/I        {ratio:.17g}  (omega^2 = {w2:.17g})"]
    return emit(args, "verify", inputs, results, passed, lines)


def cmd_solve(args):
    N, w2, mc = args.n, args.omega2, args.center
    theorem_masses(N, w2, mc)  # infeasibility check before drawing seeds
    if args.seeds < 1:
        raise UsageError("--seeds must be >= 1")
    rng = np.random.default_rng(args.seed)
    runs = []
    for i in range(args.seeds):
        init = np.exp(rng.uniform(math.log(0.1), math.log(10.0), N))
        run = {"index": i, "initial_masses": init.tolist()}
        try:
            sol = solve_masses_newton(N, w2, mc, init)
        except ConvergenceError as exc:
            run.update(status="diverged", residual=exc.residual)
        except InfeasibleError as exc:
            run.update(status="non-positive", message=str(exc))
        else:
            run.update(status="converged", masses=sol.masses.tolist(),
                       branches=[b.value for b in sol.branches],
                       max_deviation_from_equal=sol.max_deviation_from_equal,
                       equal_mass=sol.max_deviation_from_equal < args.tol_equal,
                       iterations=sol.iterations, residual=sol.residual)
        runs.append(run)
    converged = [r for r in runs if r["status"] == "converged"]
    inputs = {"n": N, "omega_squared": w2, "center_mass": mc, "seeds": args.seeds,
              "seed": args.seed, "tol_equal": args.tol_equal}
    results = {"theorem_mass": theorem_masses(N, w2, mc), "runs": runs,
               "converged": len(converged)}
    if not converged:
        emit(args, "solve", inputs, results, False,
             ["no Newton run converged"])
        return EXIT_NONCONVERGENCE
    passed = all(r["equal_mass"] for r in converged)
    lines = [f"seed {args.seed}, theorem mass {results['theorem_mass']:.17g}"]
    for r in runs:
        if r["status"] == "converged":
            lines.append(f"run {r['index']:>3} converged  dev={r['max_deviation_from_equal']:.2e}"
                         f"  branches={','.join(r['branches'])}")
        else:
            lines.append(f"run {r['index']:>3} {r['status']}")
    return emit(args, "solve", inputs, results, passed, lines)


def cmd_euler(args):
    problem = EulerProblem(args.m1, args.m2, args.m3)
    Q = solve_Q(problem)
    res = euler_residual(problem, Q)
    mid = midpoint_residual(args.m1, args.m2, args.m3)
    passed = abs(res) < args.tol_root
    return emit(args, "euler",
                {"m1": args.m1, "m2": args.m2, "m3": args.m3, "tol_root": args.tol_root},
                {"Q": Q, "residual": res, "midpoint_residual": mid}, passed,
                [f"Q*                 {Q:.17g}", f"residual at Q*     {res:.3e}",
                 f"residual at Q=1/2  {mid:.17g}"])


def cmd_simulate(args):
    job = job_from_args(args)
    config = job_configuration(job)
    if args.omega is not None:
        omega = args.omega
    else:
        omega = math.sqrt(_omega_squared_for(job, config))
    if omega == 0:
        raise UsageError("omega must be nonzero to define a period")
    T = dynamics.period(omega)
    step = args.step if args.step is not None else T / 4000
    if not step > 0:
        raise UsageError("--step must be positive")
    n_steps = args.n_steps if args.n_steps is not None else max(1, round(T / step))
    if n_steps < 1:
        raise UsageError("--n-steps must be positive")
    traj = dynamics.integrate(dynamics.relative_equilibrium_state(config, omega),
                              config.masses, step, n_steps, args.method)
    if args.output:
        dynamics.write_csv(traj, args.output)
    err = dynamics.rigid_rotation_error(traj, config, omega)
    inputs = {"positions": [_pt(z) for z in config.positions],
              "masses": config.masses.tolist(), "omega": omega, "step": step,
              "n_steps": n_steps, "method": args.method, "tol_rigid": args.tol_rigid}
    results = {"rigid_rotation_error": err,
               "relative_energy_drift": traj.relative_energy_drift(),
               "angular_momentum_drift": traj.angular_momentum_drift(),
               "linear_momentum_drift": traj.linear_momentum_drift(),
               "final_time": float(traj.times[-1]), "output": args.output,
               "close_approach": None}
    lines = [f"rigid rotation error  {err:.3e}",
             f"energy drift (rel)    {results['relative_energy_drift']:.3e}",
             f"Lz drift              {results['angular_momentum_drift']:.3e}"]
    if traj.event is not None:
        ev = traj.event
        results["close_approach"] = {"time": ev.time, "bodies": list(ev.bodies),
                                     "distance": ev.distance}
        emit(args, "simulate", inputs, results, False,
             lines + [f"close approach of bodies {ev.bodies} at t={ev.time:.6g}"])
        return EXIT_CLOSE_APPROACH
    return emit(args, "simulate", inputs, results, err < args.tol_rigid, lines)


def cmd_spectrum(args):
    N = args.n
    A = circulant.build_A(N)
    lam = circulant.eigenvalues(A)
    S = identities.csc_sum(N)
    gap = abs(lam[0] - S)
    check = None
    passed = gap < args.tol_agreement
    if N >= 4:
        chk = circulant.eigenvalue_vanishing_check(N, args.tol_zero, args.tol_nonzero)
        check = {"magnitudes": chk.magnitudes.tolist(),
                 "vanishing_index": chk.vanishing_index, "pass": chk.passed}
        passed = passed and chk.passed
    lines = [f"lambda_{k:<3} {z.real:>22.16g} {z.imag:>+12.3e}i  |.|={abs(z):.6g}"
             for k, z in enumerate(lam, start=1)]
    lines.append(f"|lambda_1 - csc_sum| = {gap:.3e}")
    if check is not None:
        lines.append(f"vanishing index {check['vanishing_index']}, check "
                     f"{'ok' if check['pass'] else 'failed'}")
    return emit(args, "spectrum",
                {"n": N, "tol_zero": args.tol_zero, "tol_nonzero": args.tol_nonzero,
                 "tol_agreement": args.tol_agreement},
                {"eigenvalues": [_pt(z) for z in lam], "csc_sum": S,
                 "lambda1_gap": gap, "vanishing_check": check}, passed, lines)


# -- parser -----------------------------------------------------------------

def _int(text):
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="polygon-cc",
        description="Central configurations of a regular N-gon with a central body.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--format", choices=("table", "json"), default="table")
        p.set_defaults(func=func)
        return p

    def add_params(p, with_config=False):
        required = not with_config
        p.add_argument("--n", type=_int, required=required)
        p.add_argument("--omega2", type=float, required=required)
        p.add_argument("--center", type=float, required=required)

    p = add("identities", cmd_identities, "check the roots-of-unity sum identities")
    p.add_argument("--n", default="2..32", help="N or an inclusive range A..B")
    p.add_argument("--tol-identity", type=float, default=1e-11)

    p = add("masses", cmd_masses, "equal-mass formula vs circulant solve")
    add_params(p)
    p.add_argument("--tol-agreement", type=float, default=1e-12)
    p.add_argument("--write-config", metavar="PATH",
                   help="write the equal-mass job document to PATH")

    for name, func, help in (("verify", cmd_verify, "residual of a configuration"),
                             ("simulate", cmd_simulate, "integrate a rigid rotation")):
        p = add(name, func, help)
        p.add_argument("--config", metavar="PATH", help="JSON job document")
        add_params(p, with_config=True)
        p.add_argument("--masses", type=float, nargs="+")
    sub.choices["verify"].add_argument("--tol-residual", type=float, default=1e-10)
    p = sub.choices["simulate"]
    p.add_argument("--omega", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--n-steps", type=_int)
    p.add_argument("--method", choices=dynamics.METHODS, default="rk4")
    p.add_argument("--output", metavar="PATH", help="trajectory CSV path")
    p.add_argument("--tol-rigid", type=float, default=1e-5)

    p = add("solve", cmd_solve, "Newton mass solves from random seeds")
    add_params(p)
    p.add_argument("--seeds", type=_int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol-equal", type=float, default=1e-9)

    p = add("euler", cmd_euler, "collinear three-body position")
    for name in ("m1", "m2", "m3"):
        p.add_argument(name, type=float)
    p.add_argument("--tol-root", type=float, default=1e-13)

    p = add("spectrum", cmd_spectrum, "eigenvalues of the N-gon kernel matrix")
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--tol-zero", type=float, default=circulant.TOLERANCE_ZERO)
    p.add_argument("--tol-nonzero", type=float, default=circulant.TOLERANCE_NONZERO)
    p.add_argument("--tol-agreement", type=float, default=1e-12)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CoincidentPositionsError as exc:
        print(f"invalid geometry: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
