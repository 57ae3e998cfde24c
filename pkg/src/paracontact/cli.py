"""Command-line scenario runner.

    paracontact <command> --config scenario.toml --out results/ [--seed N]

Commands write CSV data files and a ``report.csv`` of named checks into the
output directory and exit nonzero if any check fails.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import sys
from pathlib import Path

import numpy as np

from .config import ScenarioConfig, load_config
from .contact_core import ContactPoint, GeneratingFunction, contact_hamiltonian, flow_closed_form
from .errors import ParacontactError
from .length_quad import convergence_rate, length_curve
from .master_engine import exact_solution
from .moment_flow import MomentState, moment_closed_form
from .para_metric import identity_suite
from . import verification as V

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        for row in rows:
            out.writerow([_fmt(v) for v in row])


def write_report(out: Path, checks):
    write_csv(out / "report.csv", V.REPORT_HEADER, [c.row() for c in checks])


def _indexed(prefix, n):
    return [f"{prefix}_{i + 1}" for i in range(n)]


def _start_point(cfg: ScenarioConfig) -> ContactPoint:
    """Flow start: explicit ``[flow]`` coordinates, else the moment state of ``p0``."""
    m = MomentState.from_distribution(cfg.system, cfg.theta, cfg.p0)
    f = cfg.flow
    return ContactPoint(
        m.theta if f.x is None else f.x,
        m.expectations if f.y is None else f.y,
        m.psi if f.z is None else f.z,
    )


def cmd_simulate_master(cfg: ScenarioConfig, out: Path):
    sys_, theta, p0 = cfg.system, cfg.theta, np.asarray(cfg.p0)
    times = [t for t in cfg.verify.check_times if t <= cfg.integrator.t_end] or None
    checks, traj = V.master_rk4_check(sys_, theta, p0, cfg.integrator, times)
    exact = np.array([np.asarray(exact_solution(sys_, theta, p0, t)) for t in traj.times])
    header = ["t"] + _indexed("p", sys_.num_states)
    write_csv(out / "master_exact.csv", header, (np.r_[t, p] for t, p in zip(traj.times, exact)))
    write_csv(out / "master_rk4.csv", header, (np.r_[t, p] for t, p in zip(traj.times, traj.states)))
    checks.append(V.contraction_check(sys_, theta, p0, traj.times))
    checks.append(V.CheckResult("master_renormalization_events", traj.times.size,
                                float(len(traj.renormalized)), 0.0))
    drift = float(np.max(np.abs(traj.states - p0)))
    if drift <= 1e-12:
        print("simulate-master: p0 is the equilibrium; trajectory is a fixed point")
        checks.append(V.CheckResult("fixed_point_constant_trajectory", traj.times.size, drift, 1e-12))
    return checks


def cmd_simulate_moments(cfg: ScenarioConfig, out: Path):
    sys_, theta, p0 = cfg.system, cfg.theta, np.asarray(cfg.p0)
    state0 = MomentState.from_distribution(sys_, theta, p0)
    rk4_check, ts, ys = V.moment_rk4_check(sys_, state0, cfg.integrator)
    closed = np.array([moment_closed_form(sys_, state0, t).to_vector() for t in ts])
    master = np.array([MomentState.from_distribution(sys_, theta, exact_solution(sys_, theta, p0, t)).to_vector()
                       for t in ts])
    header = ["t"] + _indexed("theta", sys_.n) + _indexed("expect", sys_.n) + ["psi"]
    for name, data in (("moments_closed_form", closed), ("moments_master", master), ("moments_rk4", ys)):
        write_csv(out / f"{name}.csv", header, (np.r_[t, row] for t, row in zip(ts, data)))
    # same comparison as consistency_check, on the whole grid
    worst = float(np.max(np.abs(master - closed)))
    theta_drift = float(np.max(np.abs(ys[:, :sys_.n] - theta)))
    return [
        V.CheckResult("moment_master_vs_closed_form", ts.size, worst, 1e-10),
        rk4_check,
        V.CheckResult("moment_theta_invariance", ts.size, theta_drift, 0.0),
    ]


def cmd_flow(cfg: ScenarioConfig, out: Path):
    w = GeneratingFunction.from_system(cfg.system)
    pt0 = _start_point(cfg)
    times = sorted(set(cfg.flow.times) | {0.0})
    rows = []
    for t in times:
        pt = flow_closed_form(w, pt0, t)
        rows.append(np.r_[t, pt.to_vector(), contact_hamiltonian(w, pt)])
    n = pt0.n
    write_csv(out / "flow.csv", ["t"] + _indexed("x", n) + _indexed("y", n) + ["z", "h"], rows)
    return V.flow_checks(w, pt0, cfg.integrator, times)


def cmd_geometry_check(cfg: ScenarioConfig, out: Path):
    g = cfg.geometry
    results = identity_suite(g.trials, n=g.n, seed=cfg.seed, y_range=g.y_range)
    write_csv(out / "identities.csv", ["identity_name", "samples", "max_residual", "tolerance", "pass"],
              ([r.name, r.samples, r.max_residual, r.tolerance, r.passed] for r in results))
    checks = [V.CheckResult(r.name, r.samples, r.max_residual, r.tolerance) for r in results]
    checks += V.theorem_phi_suite(g.theorem_draws, cfg.seed, y_range=g.y_range)
    return checks


def cmd_length(cfg: ScenarioConfig, out: Path):
    w = GeneratingFunction.from_system(cfg.system)
    pt0 = _start_point(cfg)
    table = length_curve(w, pt0, cfg.length.times, cfg.quadrature)
    write_csv(out / "length.csv", ["t", "length", "h_abs", "abs_error"], table)
    checks = [V.CheckResult("length_equals_abs_h", len(table), float(np.max(table[:, 3])), cfg.quadrature.tol)]
    slope = convergence_rate(w, pt0, cfg.length.rate_times, cfg.quadrature)
    print(f"length: fitted decay rate {slope:.12f}")
    checks.append(V.CheckResult("length_decay_slope", len(cfg.length.rate_times), abs(slope + 1.0), 1e-6))
    return checks


SUITES = {
    "simulate-master": cmd_simulate_master,
    "simulate-moments": cmd_simulate_moments,
    "flow": cmd_flow,
    "geometry-check": cmd_geometry_check,
    "length": cmd_length,
}


def cmd_verify_all(cfg: ScenarioConfig, out: Path):
    checks = []
    for name, fn in SUITES.items():
        sub = out / name
        sub.mkdir(parents=True, exist_ok=True)
        part = fn(cfg, sub)
        write_report(sub, part)
        checks += part
    draws = cfg.verify.random_draws
    checks.append(V.moment_consistency_suite(draws, cfg.seed))
    checks.append(V.h_decay_suite(draws, cfg.seed))
    checks += V.landmark_checks(cfg.system, cfg.theta)
    return checks


COMMANDS = {**SUITES, "verify-all": cmd_verify_all}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paracontact", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=list(COMMANDS))
    parser.add_argument("--config", required=True, type=Path, help="scenario TOML file")
    parser.add_argument("--out", required=True, type=Path, help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    return parser


def run(command: str, config_path, output_dir, seed: int | None = None) -> int:
    try:
        cfg = load_config(config_path)
        if seed is not None:
            if seed < 0:
                raise ValueError("seed must be nonnegative")
            cfg = dataclasses.replace(cfg, seed=seed)
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        checks = COMMANDS[command](cfg, out)
    except (ParacontactError, ValueError) as exc:
        print(f"{command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    write_report(out, checks)
    failed = [c for c in checks if not c.passed]
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status}  {c.name:<40s} residual={c.max_residual:.3e}  tol={c.tolerance:.1e}")
    if failed:
        print(f"{command}: {len(failed)} check(s) failed: {', '.join(c.name for c in failed)}",
              file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args.command, args.config, args.out, args.seed)


if __name__ == "__main__":
    sys.exit(main())
