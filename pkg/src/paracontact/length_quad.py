"""Length of the contact flow curve under the Mrugala metric.

The length from a state at time ``t`` to the equilibrium (``t -> inf``) is the
improper integral of ``sqrt(g(X_h, X_h))`` along the flow.  It is computed by
composite Gauss-Legendre quadrature on ``[t, T_max]``; the discarded tail is
bounded by ``exp(-T_max) |h(pt0)|`` because the speed is ``|h|`` and ``h``
decays as ``exp(-s)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .contact_core import (
    ContactPoint,
    GeneratingFunction,
    contact_hamiltonian,
    flow_closed_form,
    hamiltonian_vector_field,
)
from .errors import ConfigError, DegenerateFitError, DomainError, NonFiniteResultError
from .para_metric import mrugala_metric

NEGATIVE_RADICAND_TOL = 1e-14


@dataclass(frozen=True)
class QuadratureConfig:
    nodes: int = 16
    panels: int = 8
    tail_horizon: float = 40.0
    tol: float = 1e-8

    def __post_init__(self):
        if self.nodes < 1 or self.panels < 1:
            raise ConfigError("nodes and panels must be positive integers")
        if not self.tail_horizon > 0:
            raise ConfigError("tail_horizon must be positive")
        if not self.tol >= 1e-12:
            raise ConfigError("tol must be at least 1e-12")


@lru_cache(maxsize=32)
def _gauss_legendre(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(nodes)


def composite_gauss_legendre(f, a: float, b: float, nodes: int, panels: int) -> float:
    """Integrate a scalar function over ``[a, b]`` with equal panels."""
    x, w = _gauss_legendre(nodes)
    edges = np.linspace(a, b, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        total += half * sum(wi * f(mid + half * xi) for xi, wi in zip(x, w))
    return float(total)


def speed(w: GeneratingFunction, pt: ContactPoint) -> float:
    X = hamiltonian_vector_field(w, pt)
    sq = mrugala_metric(pt, X, X)
    if sq < 0:
        if sq < -NEGATIVE_RADICAND_TOL:
            raise NonFiniteResultError(f"g(X_h, X_h) = {sq} is negative on the flow curve")
        sq = 0.0
    return float(np.sqrt(sq))


def tail_bound(w: GeneratingFunction, pt0: ContactPoint, cfg: QuadratureConfig) -> float:
    return float(np.exp(-cfg.tail_horizon) * abs(contact_hamiltonian(w, pt0)))


def curve_length(w: GeneratingFunction, pt0: ContactPoint, t: float,
                 cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """Length of the flow curve from ``flow(t)`` out to equilibrium.

    The integral runs from ``t`` to ``cfg.tail_horizon``; see
    :func:`tail_bound` for the size of the omitted remainder.
    """
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    if t >= cfg.tail_horizon:
        raise ConfigError(f"t={t} is not below tail_horizon={cfg.tail_horizon}")
    if tail_bound(w, pt0, cfg) > cfg.tol / 10:
        raise ConfigError(
            f"tail_horizon={cfg.tail_horizon} leaves a remainder of {tail_bound(w, pt0, cfg):.3e}, "
            f"above tol/10 = {cfg.tol / 10:.1e}")
    return composite_gauss_legendre(lambda s: speed(w, flow_closed_form(w, pt0, s)),
                                    t, cfg.tail_horizon, cfg.nodes, cfg.panels)


def length_curve(w: GeneratingFunction, pt0: ContactPoint, ts,
                 cfg: QuadratureConfig = QuadratureConfig()) -> np.ndarray:
    """Rows of ``(t, length, |h(t)|, |length - |h(t)||)``."""
    rows = []
    for t in ts:
        length = curve_length(w, pt0, t, cfg)
        h_abs = abs(contact_hamiltonian(w, flow_closed_form(w, pt0, t)))
        rows.append((t, length, h_abs, abs(length - h_abs)))
    return np.array(rows, dtype=float)


def convergence_rate(w: GeneratingFunction, pt0: ContactPoint, ts,
                     cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """Least-squares slope of ``ln(length)`` against time."""
    ts = np.asarray(sorted(set(float(t) for t in ts)))
    if ts.size < 3:
        raise DegenerateFitError("need at least three distinct sample times")
    lengths = np.array([curve_length(w, pt0, t, cfg) for t in ts])
    if np.any(lengths <= 0):
        raise DegenerateFitError("curve length vanishes; the state is already at equilibrium")
    slope, _ = np.polyfit(ts, np.log(lengths), 1)
    return float(slope)
