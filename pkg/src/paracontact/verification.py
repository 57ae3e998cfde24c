"""Randomized verification suites shared by the CLI and the acceptance tests.

Every suite returns :class:`CheckResult` rows: the worst residual seen over
its samples against a fixed tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial

import numpy as np

from .contact_core import (
    ContactPoint,
    GeneratingFunction,
    contact_form,
    contact_hamiltonian,
    flow_closed_form,
    flow_vector_rhs,
    hamiltonian_vector_field,
    legendre_distance,
    legendre_point,
    legendre_tangent,
    nondegeneracy_volume,
)
from .errors import InconsistencyError, PropertyViolationError
from .integrators import IntegratorConfig, rk4_solve
from .length_quad import QuadratureConfig, convergence_rate, curve_length
from .master_engine import exact_solution, integrate, solvable_rhs_fn
from .moment_flow import MomentState, consistency_check, moment_closed_form, moment_rhs_vector
from .para_metric import (
    frame_basis,
    identity_suite,
    lie_derivative_h,
    phi_power,
    random_point,
)
from .state_space import (
    ObservableSystem,
    equilibrium_expectation,
    equilibrium_probs,
    theta_potential,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    samples: int
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_residual) and self.max_residual <= self.tolerance)

    def row(self) -> list:
        return [self.name, self.samples, self.max_residual, self.tolerance, self.passed]


REPORT_HEADER = ["check_name", "samples", "max_residual", "tolerance", "pass"]


def random_system(rng: np.random.Generator, num_states: int = 4, n: int = 2,
                  obs_scale: float = 2.0) -> ObservableSystem:
    return ObservableSystem.from_table(rng.uniform(-obs_scale, obs_scale, (n, num_states)))


def random_distribution(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.dirichlet(np.ones(size))


def random_quadratic(rng: np.random.Generator, n: int) -> GeneratingFunction:
    return GeneratingFunction.quadratic(rng.normal(size=(n, n)), rng.normal(size=n), rng.normal())


def random_generating_function(rng: np.random.Generator, n: int) -> GeneratingFunction:
    """A random quadratic or the theta-potential of a random system, with equal odds."""
    if rng.random() < 0.5:
        return random_quadratic(rng, n)
    return GeneratingFunction.from_system(random_system(rng, int(rng.integers(2, 7)), n))


# -- master equation ---------------------------------------------------------

def master_rk4_check(sys: ObservableSystem, theta, p0, cfg: IntegratorConfig,
                     times=None, tol: float = 1e-9) -> tuple[list[CheckResult], object]:
    traj = integrate(solvable_rhs_fn(sys, theta), p0, cfg)
    if times is None:
        times = traj.times
    err = max(float(np.max(np.abs(traj.at(t) - np.asarray(exact_solution(sys, theta, p0, t)))))
              for t in times)
    checks = [
        CheckResult("master_rk4_vs_exact", len(times), err, tol),
        CheckResult("master_probability_conservation", traj.times.size, traj.max_drift, 1e-9),
    ]
    return checks, traj


def contraction_check(sys: ObservableSystem, theta, p0, times, tol: float = 1e-12) -> CheckResult:
    p0 = np.asarray(p0, dtype=float)
    p_eq = equilibrium_probs(sys, theta)
    d0 = np.sum(np.abs(p0 - p_eq))
    worst = 0.0
    for t in times:
        if d0 == 0:
            ratio_err = float(np.sum(np.abs(np.asarray(exact_solution(sys, theta, p0, t)) - p_eq)))
        else:
            d = np.sum(np.abs(np.asarray(exact_solution(sys, theta, p0, t)) - p_eq))
            ratio_err = abs(d / d0 - np.exp(-t))
        worst = max(worst, float(ratio_err))
    return CheckResult("master_exponential_contraction", len(times), worst, tol)


# -- moment dynamics ---------------------------------------------------------

def moment_consistency_suite(draws: int, seed: int, times=(0.1, 1.0, 5.0),
                             tol: float = 1e-10) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        sys = random_system(rng, int(rng.integers(2, 9)), int(rng.integers(1, 4)))
        theta = rng.uniform(-2, 2, sys.n)
        p0 = random_distribution(rng, sys.num_states)
        for t in times:
            try:
                rep = consistency_check(sys, theta, p0, t, tol)
                worst = max(worst, rep.max_deviation)
            except InconsistencyError as exc:
                worst = max(worst, exc.deviation)
    return CheckResult("moment_two_path_consistency", draws * len(times), worst, tol)


def moment_rk4_check(sys: ObservableSystem, state0: MomentState, cfg: IntegratorConfig,
                     tol: float = 1e-9) -> tuple[CheckResult, np.ndarray, np.ndarray]:
    ts, ys = rk4_solve(partial(moment_rhs_vector, sys), state0.to_vector(), cfg)
    closed = np.array([moment_closed_form(sys, state0, t).to_vector() for t in ts])
    err = float(np.max(np.abs(ys - closed)))
    return CheckResult("moment_rk4_vs_closed_form", ts.size, err, tol), ts, ys


# -- contact flow ------------------------------------------------------------

def h_decay_suite(draws: int, seed: int, n_max: int = 3, t_max: float = 10.0,
                  tol: float = 1e-12) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        n = int(rng.integers(1, n_max + 1))
        w = random_generating_function(rng, n)
        pt = ContactPoint(rng.uniform(-2, 2, n), rng.uniform(-3, 3, n), rng.uniform(-3, 3))
        t = rng.uniform(0, t_max)
        h_t = contact_hamiltonian(w, flow_closed_form(w, pt, t))
        worst = max(worst, float(abs(h_t - np.exp(-t) * contact_hamiltonian(w, pt))))
    return CheckResult("contact_h_decay", draws, worst, tol)


def flow_checks(w: GeneratingFunction, pt0: ContactPoint, cfg: IntegratorConfig,
                times) -> list[CheckResult]:
    checks = []
    ts, ys = rk4_solve(flow_vector_rhs(w), pt0.to_vector(), cfg)
    closed = np.array([flow_closed_form(w, pt0, t).to_vector() for t in ts])
    checks.append(CheckResult("flow_rk4_vs_closed_form", ts.size, float(np.max(np.abs(ys - closed))), 1e-9))

    h0 = contact_hamiltonian(w, pt0)
    decay = max(abs(contact_hamiltonian(w, flow_closed_form(w, pt0, t)) - np.exp(-t) * h0) for t in times)
    checks.append(CheckResult("flow_h_decay", len(times), float(decay), 1e-12))

    on = legendre_point(w, pt0.x)
    stay = max(legendre_distance(w, flow_closed_form(w, on, t)) for t in times)
    checks.append(CheckResult("legendre_invariance", len(times), stay, 1e-12))

    d0 = legendre_distance(w, pt0)
    attract = max(abs(legendre_distance(w, flow_closed_form(w, pt0, t)) - np.exp(-t) * d0) for t in times)
    checks.append(CheckResult("legendre_attractor_rate", len(times), float(attract), 1e-12))

    pull = max(abs(contact_form(on, legendre_tangent(w, pt0.x, e))) for e in np.eye(pt0.n))
    checks.append(CheckResult("legendre_lambda_pullback", pt0.n, float(pull), 1e-9))

    if pt0.n <= 3:
        vol = nondegeneracy_volume(pt0)
        expected = math.factorial(pt0.n) * (-1) ** (pt0.n * (pt0.n - 1) // 2)
        checks.append(CheckResult("contact_nondegeneracy", 1, abs(vol - expected), 1e-12))
    return checks


# -- para-contact geometry ---------------------------------------------------

def geometry_suite(trials: int, seed: int, n: int = 2, y_range=(0.1, 10.0)) -> list[CheckResult]:
    return [CheckResult(r.name, r.samples, r.max_residual, r.tolerance)
            for r in identity_suite(trials, n=n, seed=seed, y_range=y_range)]


def theorem_phi_suite(draws: int, seed: int, n_max: int = 3, y_range=(0.1, 10.0)) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    routes = lie1 = lie2 = lie0 = 0.0
    for _ in range(draws):
        n = int(rng.integers(1, n_max + 1))
        w = random_generating_function(rng, n)
        pt = random_point(rng, n, y_range)
        Xh = hamiltonian_vector_field(w, pt)
        fb = frame_basis(pt)
        via_frame = {1: fb.phi(Xh), 2: fb.phi(fb.phi(Xh))}
        for mu in (1, 2):
            routes = max(routes, float(np.max(np.abs(
                phi_power(pt, Xh, mu).to_vector() - via_frame[mu].to_vector()))))
        lie1 = max(lie1, abs(lie_derivative_h(w, pt, 1)))
        lie2 = max(lie2, abs(lie_derivative_h(w, pt, 2)))
        lie0 = max(lie0, abs(lie_derivative_h(w, pt, 0) + contact_hamiltonian(w, pt)))
    return [
        CheckResult("phi_mu_Xh_closed_form_vs_frame", draws, routes, 1e-12),
        CheckResult("lie_phi_Xh_h_zero", draws, lie1, 1e-12),
        CheckResult("lie_phi2_Xh_h_zero", draws, lie2, 1e-12),
        CheckResult("lie_Xh_h_minus_h", draws, lie0, 1e-12),
    ]


# -- curve length ------------------------------------------------------------

def length_checks(w: GeneratingFunction, pt0: ContactPoint, times, cfg: QuadratureConfig,
                  rate_times=(0.0, 1.0, 2.0, 3.0)) -> list[CheckResult]:
    worst = 0.0
    for t in times:
        target = abs(contact_hamiltonian(w, flow_closed_form(w, pt0, t)))
        worst = max(worst, abs(curve_length(w, pt0, t, cfg) - target))
    slope = convergence_rate(w, pt0, rate_times, cfg)
    return [
        CheckResult("length_equals_abs_h", len(times), worst, cfg.tol),
        CheckResult("length_decay_slope", len(rate_times), abs(slope + 1.0), 1e-6),
    ]


# -- landmarks ---------------------------------------------------------------

def direct_summation(sys: ObservableSystem, theta) -> tuple[float, np.ndarray]:
    """Naive ``ln sum exp`` and mean, with no stabilisation; the oracle for landmarks."""
    weights = [np.exp(sum(theta[a] * sys.observables[a, j] for a in range(sys.n)))
               for j in range(sys.num_states)]
    total = sum(weights)
    means = np.array([sum(sys.observables[a, j] * weights[j] for j in range(sys.num_states)) / total
                      for a in range(sys.n)])
    return float(np.log(total)), means


def landmark_checks(sys: ObservableSystem, theta, tol: float = 1e-12) -> list[CheckResult]:
    theta = np.asarray(theta, dtype=float)
    psi_ref, mean_ref = direct_summation(sys, theta)
    return [
        CheckResult("landmark_theta_potential", 1, abs(theta_potential(sys, theta) - psi_ref), tol),
        CheckResult("landmark_equilibrium_expectation", sys.n,
                    float(np.max(np.abs(equilibrium_expectation(sys, theta) - mean_ref))), tol),
    ]


def first_failure(checks) -> CheckResult | None:
    for c in checks:
        if not c.passed:
            return c
    return None


def require(checks):
    bad = first_failure(checks)
    if bad is not None:
        raise PropertyViolationError(bad.name, bad.max_residual, bad.tolerance)
    return checks
