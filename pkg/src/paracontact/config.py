"""TOML scenario files.

A scenario names a finite system, parameters and an initial distribution,
plus optional per-command sections.  See ``scenarios/two_state.toml`` for a
complete example.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .integrators import IntegratorConfig
from .length_quad import QuadratureConfig
from .state_space import Distribution, ObservableSystem, equilibrium_probs


@dataclass(frozen=True)
class FlowOptions:
    x: list | None = None
    y: list | None = None
    z: float | None = None
    times: tuple = (0.0, 0.5, 1.0, 2.0, 5.0, 10.0)


@dataclass(frozen=True)
class GeometryOptions:
    trials: int = 1000
    n: int = 2
    y_range: tuple = (0.1, 10.0)
    theorem_draws: int = 100


@dataclass(frozen=True)
class LengthOptions:
    times: tuple = (0.0, 0.5, math.log(2.0), 2.0)
    rate_times: tuple = (0.0, 1.0, 2.0, 3.0)


@dataclass(frozen=True)
class VerifyOptions:
    random_draws: int = 100
    check_times: tuple = (0.5, 1.0, 2.0, 5.0)


@dataclass(frozen=True)
class ScenarioConfig:
    system: ObservableSystem
    theta: np.ndarray
    p0_spec: object
    integrator: IntegratorConfig = IntegratorConfig()
    quadrature: QuadratureConfig = QuadratureConfig()
    seed: int = 0
    prob_tol: float = 1e-12
    flow: FlowOptions = field(default_factory=FlowOptions)
    geometry: GeometryOptions = field(default_factory=GeometryOptions)
    length: LengthOptions = field(default_factory=LengthOptions)
    verify: VerifyOptions = field(default_factory=VerifyOptions)

    @property
    def p0(self) -> Distribution:
        return resolve_p0(self.system, self.theta, self.p0_spec, self.prob_tol)


def resolve_p0(sys: ObservableSystem, theta, spec, tol: float = 1e-12) -> Distribution:
    """``"equilibrium"``, ``"delta:<state>"`` or an explicit probability list."""
    if isinstance(spec, str):
        if spec == "equilibrium":
            return Distribution(equilibrium_probs(sys, theta), tol)
        if spec.startswith("delta:"):
            label = spec[len("delta:"):]
            try:
                return Distribution.delta(sys.num_states, sys.index(label))
            except KeyError:
                raise ConfigError(f"p0: unknown state {label!r} in {spec!r}") from None
        raise ConfigError(f"p0: expected 'equilibrium', 'delta:<state>' or a list, got {spec!r}")
    try:
        arr = np.asarray(spec, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f"p0: not a numeric list: {spec!r}") from None
    if arr.size != sys.num_states:
        raise ConfigError(f"p0: has {arr.size} entries for {sys.num_states} states")
    try:
        return Distribution(arr, tol)
    except ValueError as exc:
        raise ConfigError(f"p0: {exc}") from None


def _section(doc: dict, name: str) -> dict:
    sec = doc.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError(f"[{name}] must be a table")
    return sec


def _build(kind, name: str, kwargs: dict):
    try:
        return kind(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"[{name}]: {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"[{name}]: {exc}") from None


def _tuples(d: dict) -> dict:
    return {k: tuple(v) if isinstance(v, list) and k != "x" and k != "y" else v for k, v in d.items()}


def parse_config(doc: dict) -> ScenarioConfig:
    if "system" not in doc:
        raise ConfigError("missing [system] table")
    sysd = _section(doc, "system")
    if "observables" not in sysd:
        raise ConfigError("[system]: missing field 'observables'")
    obs = np.atleast_2d(np.asarray(sysd["observables"], dtype=float))
    states = sysd.get("states", list(range(obs.shape[1])))
    try:
        system = ObservableSystem(states, obs)
    except ValueError as exc:
        raise ConfigError(f"[system]: {exc}") from None

    if "theta" not in doc:
        raise ConfigError("missing top-level field 'theta'")
    theta = np.asarray(doc["theta"], dtype=float).reshape(-1)
    if theta.size != system.n or not np.all(np.isfinite(theta)):
        raise ConfigError(f"theta: need {system.n} finite entries, got {doc['theta']!r}")

    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"seed: must be an unsigned integer, got {seed!r}")

    cfg = ScenarioConfig(
        system=system,
        theta=theta,
        p0_spec=doc.get("p0", "equilibrium"),
        integrator=_build(IntegratorConfig, "integrator", _section(doc, "integrator")),
        quadrature=_build(QuadratureConfig, "quadrature", _section(doc, "quadrature")),
        seed=seed,
        prob_tol=float(doc.get("prob_tol", 1e-12)),
        flow=_build(FlowOptions, "flow", _tuples(_section(doc, "flow"))),
        geometry=_build(GeometryOptions, "geometry", _tuples(_section(doc, "geometry"))),
        length=_build(LengthOptions, "length", _tuples(_section(doc, "length"))),
        verify=_build(VerifyOptions, "verify", _tuples(_section(doc, "verify"))),
    )
    cfg.p0  # resolve eagerly so bad initial data fails at load time
    return cfg


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config(doc)
