"""Finite state spaces and their exponential-family equilibria.

An :class:`ObservableSystem` is a finite set of states together with a dense
``(n, |states|)`` table of observables.  The equilibrium distribution at
parameters ``theta`` is ``exp(theta . O(j)) / Z(theta)``; every quantity is
evaluated through log-sum-exp so that large ``|theta|`` stays finite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, NonFiniteResultError, StrictPositivityError

PROB_TOL = 1e-12


@dataclass(frozen=True)
class ObservableSystem:
    states: tuple
    observables: np.ndarray

    def __init__(self, states: Sequence, observables):
        obs = np.array(observables, dtype=float)
        if obs.ndim == 1:
            obs = obs[None, :]
        if obs.ndim != 2:
            raise DimensionError("observable table must be 2-dimensional (n, |states|)")
        states = tuple(states)
        if len(states) < 2:
            raise DimensionError("need at least two states")
        if len(set(states)) != len(states):
            raise ValueError("state labels must be unique")
        if obs.shape[1] != len(states):
            raise DimensionError(
                f"observable table has {obs.shape[1]} columns for {len(states)} states")
        if obs.shape[0] < 1:
            raise DimensionError("need at least one observable")
        if not np.all(np.isfinite(obs)):
            raise ValueError("observable values must be finite")
        obs.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "observables", obs)

    @classmethod
    def from_table(cls, observables) -> "ObservableSystem":
        """Build a system with integer state labels ``0..J-1``."""
        obs = np.atleast_2d(np.asarray(observables, dtype=float))
        return cls(range(obs.shape[1]), obs)

    @property
    def n(self) -> int:
        return self.observables.shape[0]

    @property
    def num_states(self) -> int:
        return len(self.states)

    def index(self, label) -> int:
        for i, s in enumerate(self.states):
            if s == label or str(s) == str(label):
                return i
        raise KeyError(f"unknown state {label!r}")


@dataclass(frozen=True)
class ThetaParams:
    theta: np.ndarray

    def __init__(self, theta):
        arr = np.array(theta, dtype=float).reshape(-1)
        if not np.all(np.isfinite(arr)):
            raise ValueError("theta entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "theta", arr)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.theta, dtype=dtype)

    def __len__(self):
        return self.theta.size


@dataclass(frozen=True)
class Distribution:
    probs: np.ndarray

    def __init__(self, probs, tol: float = PROB_TOL):
        arr = np.array(probs, dtype=float).reshape(-1)
        if not np.all(np.isfinite(arr)):
            raise ValueError("probabilities must be finite")
        if np.any(arr < 0):
            raise ValueError("probabilities must be nonnegative")
        if abs(arr.sum() - 1.0) > tol:
            raise ValueError(f"probabilities sum to {arr.sum()!r}, not 1")
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.probs, dtype=dtype)

    def __len__(self):
        return self.probs.size

    @classmethod
    def delta(cls, size: int, index: int) -> "Distribution":
        p = np.zeros(size)
        p[index] = 1.0
        return cls(p)


def logsumexp(a: np.ndarray) -> float:
    m = a.max()
    if not np.isfinite(m):
        return float(m)
    return float(m + np.log(np.exp(a - m).sum()))


def _theta(sys: ObservableSystem, theta) -> np.ndarray:
    th = np.asarray(theta, dtype=float).reshape(-1)
    if th.size != sys.n:
        raise DimensionError(f"theta has {th.size} entries, system has n={sys.n}")
    return th


def _log_weights(sys: ObservableSystem, theta) -> np.ndarray:
    return _theta(sys, theta) @ sys.observables


def theta_potential(sys: ObservableSystem, theta) -> float:
    """Log partition function ``ln sum_j exp(theta . O(j))``."""
    val = float(logsumexp(_log_weights(sys, theta)))
    if not np.isfinite(val):
        raise NonFiniteResultError(f"theta-potential is not finite: {val}")
    return val


def partition_function(sys: ObservableSystem, theta) -> float:
    log_z = theta_potential(sys, theta)
    try:
        return math.exp(log_z)
    except OverflowError:
        raise NonFiniteResultError(f"partition function overflows (log Z = {log_z!r})") from None


def equilibrium_probs(sys: ObservableSystem, theta) -> np.ndarray:
    lw = _log_weights(sys, theta)
    p = np.exp(lw - logsumexp(lw))
    if np.any(p == 0.0):
        bad = [sys.states[i] for i in np.flatnonzero(p == 0.0)]
        raise StrictPositivityError(f"equilibrium probability underflows to zero at {bad}")
    return p


def equilibrium_distribution(sys: ObservableSystem, theta) -> Distribution:
    return Distribution(equilibrium_probs(sys, theta))


def equilibrium_expectation(sys: ObservableSystem, theta) -> np.ndarray:
    """Equilibrium means of each observable; the gradient of :func:`theta_potential`."""
    return sys.observables @ equilibrium_probs(sys, theta)
