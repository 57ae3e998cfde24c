"""Contact geometry in Darboux coordinates ``(x, y, z)``.

The contact form is ``lambda = dz - y_a dx^a``.  For a generating function
``varpi(x)`` the contact Hamiltonian ``h = varpi(x) - z`` produces the flow

    dx/dt = 0,  dy/dt = grad varpi(x) - y,  dz/dt = varpi(x) - z,

whose fixed-point set is the Legendre submanifold ``y = grad varpi``,
``z = varpi``.  Along the flow ``h`` decays exactly as ``exp(-t)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DimensionError, DomainError, PropertyViolationError
from .state_space import ObservableSystem, equilibrium_expectation, theta_potential

FD_STEP = 1e-6


@dataclass(frozen=True)
class ContactPoint:
    x: np.ndarray
    y: np.ndarray
    z: float

    def __post_init__(self):
        x = np.array(self.x, dtype=float).reshape(-1)
        y = np.array(self.y, dtype=float).reshape(-1)
        if x.size != y.size:
            raise DimensionError(f"x has {x.size} entries but y has {y.size}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y)) and np.isfinite(self.z)):
            raise ValueError("contact point coordinates must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", float(self.z))

    @property
    def n(self) -> int:
        return self.x.size

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.y, [self.z]])

    @classmethod
    def from_vector(cls, v) -> "ContactPoint":
        v = np.asarray(v, dtype=float)
        n = (v.size - 1) // 2
        return cls(v[:n], v[n:2 * n], v[-1])

    def shifted(self, v: "TangentVector", s: float = 1.0) -> "ContactPoint":
        return ContactPoint(self.x + s * v.dx, self.y + s * v.dy, self.z + s * v.dz)


@dataclass(frozen=True)
class TangentVector:
    dx: np.ndarray
    dy: np.ndarray
    dz: float

    def __post_init__(self):
        dx = np.array(self.dx, dtype=float).reshape(-1)
        dy = np.array(self.dy, dtype=float).reshape(-1)
        if dx.size != dy.size:
            raise DimensionError(f"dx has {dx.size} entries but dy has {dy.size}")
        if not (np.all(np.isfinite(dx)) and np.all(np.isfinite(dy)) and np.isfinite(self.dz)):
            raise ValueError("tangent vector components must be finite")
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "dy", dy)
        object.__setattr__(self, "dz", float(self.dz))

    @property
    def n(self) -> int:
        return self.dx.size

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.dx, self.dy, [self.dz]])

    @classmethod
    def from_vector(cls, v) -> "TangentVector":
        v = np.asarray(v, dtype=float)
        n = (v.size - 1) // 2
        return cls(v[:n], v[n:2 * n], v[-1])

    @classmethod
    def zero(cls, n: int) -> "TangentVector":
        return cls(np.zeros(n), np.zeros(n), 0.0)

    @classmethod
    def reeb(cls, n: int) -> "TangentVector":
        """The Reeb field ``d/dz``."""
        return cls(np.zeros(n), np.zeros(n), 1.0)

    @classmethod
    def coordinate(cls, n: int, index: int) -> "TangentVector":
        """Coordinate field number ``index`` in the order ``x^1..x^n, y_1..y_n, z``."""
        e = np.zeros(2 * n + 1)
        e[index] = 1.0
        return cls.from_vector(e)

    def __add__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector(self.dx + other.dx, self.dy + other.dy, self.dz + other.dz)

    def __sub__(self, other: "TangentVector") -> "TangentVector":
        return TangentVector(self.dx - other.dx, self.dy - other.dy, self.dz - other.dz)

    def __mul__(self, s: float) -> "TangentVector":
        return TangentVector(s * self.dx, s * self.dy, s * self.dz)

    __rmul__ = __mul__

    def __neg__(self) -> "TangentVector":
        return self * -1.0


@dataclass(frozen=True)
class GeneratingFunction:
    """A function ``varpi(x)`` with its gradient.

    When no analytic gradient is supplied a central finite difference is used
    and ``uses_fd_gradient`` is set, so reports can flag the reduced accuracy.
    """

    evaluate: Callable[[np.ndarray], float]
    gradient_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hessian_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "varpi"

    @property
    def uses_fd_gradient(self) -> bool:
        return self.gradient_fn is None

    def __call__(self, x) -> float:
        return float(self.evaluate(np.asarray(x, dtype=float)))

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.gradient_fn is not None:
            return np.asarray(self.gradient_fn(x), dtype=float).reshape(x.shape)
        return fd_gradient(self.evaluate, x)

    def hessian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.hessian_fn is not None:
            return np.asarray(self.hessian_fn(x), dtype=float)
        h = np.empty((x.size, x.size))
        for i in range(x.size):
            e = np.zeros_like(x)
            e[i] = FD_STEP
            h[:, i] = (self.gradient(x + e) - self.gradient(x - e)) / (2 * FD_STEP)
        return 0.5 * (h + h.T)

    @classmethod
    def constant(cls, c: float, n: int = 1) -> "GeneratingFunction":
        return cls.quadratic(np.zeros((n, n)), c=c, name=f"const({c})")

    @classmethod
    def quadratic(cls, A, b=None, c: float = 0.0, name: str = "quadratic") -> "GeneratingFunction":
        """``varpi(x) = x.A.x + b.x + c``."""
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.zeros(A.shape[0]) if b is None else np.asarray(b, dtype=float)
        sym = A + A.T
        return cls(
            evaluate=lambda x: float(x @ A @ x + b @ x + c),
            gradient_fn=lambda x: sym @ x + b,
            hessian_fn=lambda x: sym,
            name=name,
        )

    @classmethod
    def from_system(cls, sys: ObservableSystem) -> "GeneratingFunction":
        """The theta-potential of ``sys`` with its exact gradient (equilibrium means)."""
        return cls(
            evaluate=lambda th: theta_potential(sys, th),
            gradient_fn=lambda th: equilibrium_expectation(sys, th),
            name="theta_potential",
        )


def fd_gradient(f: Callable[[np.ndarray], float], x: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        g[i] = (f(x + e) - f(x - e)) / (2 * step)
    return g


def gradient_check(w: GeneratingFunction, points) -> float:
    """Largest deviation between ``w.gradient`` and central differences of ``w``."""
    worst = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        worst = max(worst, float(np.max(np.abs(w.gradient(x) - fd_gradient(w.evaluate, x)))))
    return worst


def _check_dims(pt: ContactPoint, v: TangentVector):
    if pt.n != v.n:
        raise DimensionError(f"point has n={pt.n} but tangent vector has n={v.n}")


def contact_form(pt: ContactPoint, v: TangentVector) -> float:
    _check_dims(pt, v)
    return float(v.dz - pt.y @ v.dx)


def exterior_derivative(form: Callable[[ContactPoint, TangentVector], float],
                        pt: ContactPoint, X: TangentVector, Y: TangentVector,
                        step: float = 1.0) -> float:
    """``d form(X, Y) = X(form(Y)) - Y(form(X)) - form([X, Y])`` for constant fields.

    Constant-coefficient fields commute, so the bracket term drops.  The
    directional derivatives are central differences; they are exact whenever
    the form's coefficients are affine in the point, as for Darboux forms.
    """
    def along(V, W):
        return (form(pt.shifted(V, step), W) - form(pt.shifted(V, -step), W)) / (2 * step)
    return along(X, Y) - along(Y, X)


def contact_hamiltonian(w: GeneratingFunction, pt: ContactPoint) -> float:
    return w(pt.x) - pt.z


def hamiltonian_vector_field(w: GeneratingFunction, pt: ContactPoint) -> TangentVector:
    return TangentVector(np.zeros(pt.n), w.gradient(pt.x) - pt.y, w(pt.x) - pt.z)


def flow_closed_form(w: GeneratingFunction, pt0: ContactPoint, t: float) -> ContactPoint:
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    if t == 0:
        return pt0
    grad = w.gradient(pt0.x)
    val = w(pt0.x)
    decay = np.exp(-t)
    return ContactPoint(pt0.x, decay * (pt0.y - grad) + grad, decay * (pt0.z - val) + val)


def flow_vector_rhs(w: GeneratingFunction) -> Callable[[np.ndarray], np.ndarray]:
    """The Hamiltonian vector field as a map on flat ``(x, y, z)`` arrays, for RK4."""
    def rhs(v):
        return hamiltonian_vector_field(w, ContactPoint.from_vector(v)).to_vector()
    return rhs


def legendre_point(w: GeneratingFunction, x) -> ContactPoint:
    x = np.asarray(x, dtype=float).reshape(-1)
    return ContactPoint(x, w.gradient(x), w(x))


def legendre_tangent(w: GeneratingFunction, x, dx) -> TangentVector:
    """Push-forward of ``dx`` into the Legendre submanifold at ``x``."""
    x = np.asarray(x, dtype=float).reshape(-1)
    dx = np.asarray(dx, dtype=float).reshape(-1)
    return TangentVector(dx, w.hessian(x) @ dx, float(w.gradient(x) @ dx))


def legendre_distance(w: GeneratingFunction, pt: ContactPoint) -> float:
    """Euclidean distance in ``(y, z)`` to the Legendre point over ``pt.x``."""
    target = legendre_point(w, pt.x)
    return float(np.sqrt(np.sum((pt.y - target.y) ** 2) + (pt.z - target.z) ** 2))


def h_decay_check(w: GeneratingFunction, pt0: ContactPoint, t: float,
                  tol: float = 1e-12) -> tuple[float, float]:
    """Return ``(h(flow(t)), exp(-t) h(pt0))``; raise if they differ by more than ``tol``."""
    along_flow = contact_hamiltonian(w, flow_closed_form(w, pt0, t))
    predicted = float(np.exp(-t) * contact_hamiltonian(w, pt0))
    if abs(along_flow - predicted) > tol:
        raise PropertyViolationError("h_decay", abs(along_flow - predicted), tol)
    return along_flow, predicted


def _perm_sign(perm) -> int:
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def nondegeneracy_volume(pt: ContactPoint, n: Optional[int] = None,
                         form: Callable[[ContactPoint, TangentVector], float] = contact_form) -> float:
    """Evaluate ``form ^ (d form)^n`` on ``(d/dx^1..d/dx^n, d/dy_1..d/dy_n, d/dz)``.

    Uses the determinant convention for wedge products, matching
    ``d form(X, Y) = X form(Y) - Y form(X)``.  For the Darboux contact form
    the result is ``n! (-1)^(n(n-1)/2)`` at every point.
    """
    n = pt.n if n is None else n
    if n != pt.n:
        raise DimensionError(f"n={n} does not match point dimension {pt.n}")
    if n > 3:
        raise ValueError("permutation expansion limited to n <= 3")
    dim = 2 * n + 1
    basis = [TangentVector.coordinate(n, i) for i in range(dim)]
    one = np.array([form(pt, b) for b in basis])
    two = np.array([[exterior_derivative(form, pt, bi, bj) for bj in basis] for bi in basis])
    total = 0.0
    for perm in itertools.permutations(range(dim)):
        term = one[perm[0]]
        if term == 0.0:
            continue
        for k in range(n):
            term *= two[perm[1 + 2 * k], perm[2 + 2 * k]]
        total += _perm_sign(perm) * term
    return total / (2 ** n)
