"""Expectation variables, the nonequilibrium potential and their dynamics.

The moment state ``(theta, <O>, Psi)`` lives in R^(2n+1).  Along the solvable
master equation it obeys

    dtheta/dt = 0,  d<O_a>/dt = -<O_a> + dPsi_eq/dtheta^a,  dPsi/dt = -Psi + Psi_eq,

which :func:`moment_closed_form` integrates exactly and
:func:`consistency_check` cross-checks against the master-equation route.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, InconsistencyError
from .master_engine import exact_solution
from .state_space import (
    ObservableSystem,
    equilibrium_expectation,
    equilibrium_probs,
    theta_potential,
)


@dataclass(frozen=True)
class MomentState:
    theta: np.ndarray
    expectations: np.ndarray
    psi: float

    def __post_init__(self):
        th = np.array(self.theta, dtype=float).reshape(-1)
        ex = np.array(self.expectations, dtype=float).reshape(-1)
        if th.size != ex.size:
            raise DimensionError(f"theta has {th.size} entries but expectations have {ex.size}")
        if not (np.all(np.isfinite(th)) and np.all(np.isfinite(ex)) and np.isfinite(self.psi)):
            raise ValueError("moment state entries must be finite")
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "expectations", ex)
        object.__setattr__(self, "psi", float(self.psi))

    @property
    def n(self) -> int:
        return self.theta.size

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.theta, self.expectations, [self.psi]])

    @classmethod
    def from_vector(cls, v) -> "MomentState":
        v = np.asarray(v, dtype=float)
        n = (v.size - 1) // 2
        return cls(v[:n], v[n:2 * n], v[-1])

    @classmethod
    def equilibrium(cls, sys: ObservableSystem, theta) -> "MomentState":
        return cls(theta, equilibrium_expectation(sys, theta), theta_potential(sys, theta))

    @classmethod
    def from_distribution(cls, sys: ObservableSystem, theta, p) -> "MomentState":
        return cls(theta, expectation(sys, p), noneq_potential(sys, theta, p))


def expectation(sys: ObservableSystem, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.size != sys.num_states:
        raise DimensionError(f"p has {p.size} entries, system has {sys.num_states} states")
    return sys.observables @ p


def noneq_potential(sys: ObservableSystem, theta, p) -> float:
    """``Psi = (1/J) * sum_j p(j)/p_eq(j) * Psi_eq``, with J the number of states.

    Equals ``Psi_eq`` at equilibrium and is affine in ``p``.
    """
    p = np.asarray(p, dtype=float)
    if p.size != sys.num_states:
        raise DimensionError(f"p has {p.size} entries, system has {sys.num_states} states")
    ratio = np.sum(p / equilibrium_probs(sys, theta)) / sys.num_states
    return float(ratio * theta_potential(sys, theta))


def moment_rhs(sys: ObservableSystem, state: MomentState) -> MomentState:
    """Time derivative of a moment state, returned in the same container."""
    return MomentState(
        np.zeros_like(state.theta),
        equilibrium_expectation(sys, state.theta) - state.expectations,
        theta_potential(sys, state.theta) - state.psi,
    )


def moment_rhs_vector(sys: ObservableSystem, v: np.ndarray) -> np.ndarray:
    return moment_rhs(sys, MomentState.from_vector(v)).to_vector()


def moment_closed_form(sys: ObservableSystem, state0: MomentState, t: float) -> MomentState:
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    if t == 0:
        return state0
    grad = equilibrium_expectation(sys, state0.theta)
    psi_eq = theta_potential(sys, state0.theta)
    decay = np.exp(-t)
    return MomentState(
        state0.theta,
        decay * (state0.expectations - grad) + grad,
        decay * (state0.psi - psi_eq) + psi_eq,
    )


@dataclass(frozen=True)
class ConsistencyReport:
    t: float
    expectation_deviation: float
    psi_deviation: float

    @property
    def max_deviation(self) -> float:
        return max(self.expectation_deviation, self.psi_deviation)


def consistency_check(sys: ObservableSystem, theta, p0, t: float, tol: float) -> ConsistencyReport:
    """Compare moments of the exact master solution with the moment closed form.

    Raises :class:`InconsistencyError` naming the worse component when the
    deviation exceeds ``tol``.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    p_t = exact_solution(sys, theta, p0, t)
    via_master = MomentState.from_distribution(sys, theta, p_t)
    via_moments = moment_closed_form(sys, MomentState.from_distribution(sys, theta, p0), t)
    report = ConsistencyReport(
        t,
        float(np.max(np.abs(via_master.expectations - via_moments.expectations))),
        abs(via_master.psi - via_moments.psi),
    )
    if report.expectation_deviation > tol:
        raise InconsistencyError("expectations", report.expectation_deviation, tol)
    if report.psi_deviation > tol:
        raise InconsistencyError("psi", report.psi_deviation, tol)
    return report
