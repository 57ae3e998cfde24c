"""Classical fixed-step Runge-Kutta integration."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import IntegrationError


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 1e-3
    t_end: float = 5.0

    def __post_init__(self):
        if not (self.dt > 0 and np.isfinite(self.dt)):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not (self.t_end >= 0 and np.isfinite(self.t_end)):
            raise ValueError(f"t_end must be nonnegative, got {self.t_end}")
        if self.t_end > 0 and self.dt > self.t_end:
            raise ValueError(f"dt={self.dt} exceeds t_end={self.t_end}")

    def step_sizes(self) -> list[float]:
        """Step sizes covering ``[0, t_end]``; the last one is shortened if needed."""
        if self.t_end == 0:
            return []
        k = int(np.floor(self.t_end / self.dt + 1e-9))
        steps = [self.dt] * k
        rem = self.t_end - k * self.dt
        if rem > 1e-12 * max(1.0, self.t_end):
            steps.append(rem)
        return steps


def rk4_step(f: Callable[[np.ndarray], np.ndarray], y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_path(f: Callable[[np.ndarray], np.ndarray], y0, cfg: IntegratorConfig,
             post: Callable[[float, np.ndarray], np.ndarray] | None = None,
             ) -> Iterator[tuple[float, np.ndarray]]:
    """Yield ``(t, y)`` at t=0 and after every step of an autonomous RK4 solve.

    ``post(t, y)``, if given, may replace the state after each step; the
    replacement is what the next step starts from.
    """
    y = np.array(y0, dtype=float)
    yield 0.0, y.copy()
    for i, h in enumerate(cfg.step_sizes()):
        y = rk4_step(f, y, h)
        # grid times from the step index, so t=k*dt carries no accumulated rounding
        t = cfg.dt * (i + 1) if h == cfg.dt else cfg.t_end
        if not np.all(np.isfinite(y)):
            raise IntegrationError(f"non-finite state at t={t:.6g} (step {i + 1}): {y}")
        if post is not None:
            y = post(t, y)
        yield t, y.copy()


def rk4_solve(f, y0, cfg: IntegratorConfig) -> tuple[np.ndarray, np.ndarray]:
    ts, ys = zip(*rk4_path(f, y0, cfg))
    return np.array(ts), np.array(ys)
