"""Continuous-time master equations on a finite state space.

The general equation is

    dp(j)/dt = sum_{j' != j} [ w(j|j') p(j') - w(j'|j) p(j) ]

and choosing ``w(j|j') = p_eq(j)`` collapses it to ``dp/dt = p_eq - p``,
which is solved in closed form by :func:`exact_solution`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionError, DomainError
from .integrators import IntegratorConfig, rk4_path
from .state_space import Distribution, ObservableSystem, equilibrium_probs

RENORM_THRESHOLD = 1e-10


@dataclass(frozen=True)
class MarkovKernel:
    """Jump rates ``w[j, j']`` from state ``j'`` to ``j``; the diagonal is ignored."""

    w: np.ndarray

    def __init__(self, w):
        arr = np.array(w, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"kernel must be square, got shape {arr.shape}")
        off = arr[~np.eye(arr.shape[0], dtype=bool)]
        if not np.all(np.isfinite(off)) or np.any(off < 0) or np.any(off > 1):
            raise ValueError("off-diagonal kernel entries must lie in [0, 1]")
        arr.setflags(write=False)
        object.__setattr__(self, "w", arr)

    @classmethod
    def solvable(cls, sys: ObservableSystem, theta) -> "MarkovKernel":
        """The kernel ``w(j|j') = p_eq(j)`` for every source state ``j'``."""
        p_eq = equilibrium_probs(sys, theta)
        return cls(np.repeat(p_eq[:, None], p_eq.size, axis=1))


def general_rhs(kernel: MarkovKernel, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    w = kernel.w.copy()
    if w.shape[0] != p.size:
        raise DimensionError(f"kernel is {w.shape[0]}x{w.shape[0]} but p has {p.size} entries")
    np.fill_diagonal(w, 0.0)
    gain = w @ p
    loss = w.sum(axis=0) * p
    return gain - loss


def solvable_rhs(sys: ObservableSystem, theta, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.size != sys.num_states:
        raise DimensionError(f"p has {p.size} entries, system has {sys.num_states} states")
    return equilibrium_probs(sys, theta) - p


def solvable_rhs_fn(sys: ObservableSystem, theta) -> Callable[[np.ndarray], np.ndarray]:
    """:func:`solvable_rhs` with the equilibrium precomputed, for repeated RK4 calls."""
    p_eq = equilibrium_probs(sys, theta)
    return lambda p: p_eq - p


def exact_solution(sys: ObservableSystem, theta, p0, t: float) -> Distribution:
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    p0 = np.asarray(p0, dtype=float)
    if t == 0:
        return Distribution(p0)
    p_eq = equilibrium_probs(sys, theta)
    decay = np.exp(-t)
    # same algebra as p0 + (1 - e^-t)(p_eq - p0), kept in the factored form
    p = decay * p0 + (-np.expm1(-t)) * p_eq
    return Distribution(p)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    renormalized: list[float] = field(default_factory=list)
    max_drift: float = 0.0

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def at(self, t: float) -> np.ndarray:
        i = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[i] - t) > 1e-9 * max(1.0, abs(t)):
            raise KeyError(f"time {t} is not on the integration grid")
        return self.states[i]


def integrate(rhs: Callable[[np.ndarray], np.ndarray], p0, cfg: IntegratorConfig) -> Trajectory:
    """RK4 trajectory of a master equation.

    ``rhs`` maps a probability vector to ``dp/dt`` (bind the system, e.g.
    ``functools.partial(solvable_rhs, sys, theta)``).  A state whose total mass
    drifts from 1 by more than ``RENORM_THRESHOLD`` is rescaled and the time
    of the event recorded in ``Trajectory.renormalized``.
    """
    events: list[float] = []
    max_drift = 0.0

    def renormalize(t, p):
        nonlocal max_drift
        drift = abs(p.sum() - 1.0)
        max_drift = max(max_drift, drift)
        if drift > RENORM_THRESHOLD:
            events.append(t)
            return p / p.sum()
        return p

    f = lambda q: np.asarray(rhs(q), dtype=float)  # noqa: E731
    ts, ps = zip(*rk4_path(f, p0, cfg, post=renormalize))
    return Trajectory(np.array(ts), np.array(ps), events, max_drift)
