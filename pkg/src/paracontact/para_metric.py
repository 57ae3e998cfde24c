"""The Mrugala metric and the almost para-contact structure ``(phi, xi, lambda)``.

``g = 1/2 (dx^a (x) dy_a + dy_a (x) dx^a) + lambda (x) lambda`` on Darboux
coordinates.  ``phi`` is applied through its coordinate closed form

    phi(X) = -dx^a (d/dx^a + y_a d/dz) + dy_a d/dy_a,

valid at every point; the frame expansion (defined only where all
``y_a > 0``) is kept as an independent route for cross-checks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contact_core import (
    ContactPoint,
    GeneratingFunction,
    TangentVector,
    contact_form,
    exterior_derivative,
    hamiltonian_vector_field,
)
from .errors import DomainError, PropertyViolationError

EXACT_TOL = 1e-13
FRAME_TOL = 1e-11


def mrugala_metric(pt: ContactPoint, u: TangentVector, v: TangentVector) -> float:
    sym = 0.5 * float(u.dx @ v.dy + u.dy @ v.dx)
    return sym + contact_form(pt, u) * contact_form(pt, v)


@dataclass(frozen=True)
class FrameBasis:
    """Frame ``e0, e_a^-, e_a^+`` and dual co-frame at a point with ``y > 0``.

    Vectors and covectors are stored as rows of flat ``(x, y, z)`` component
    arrays; covector ``c`` acts on vector ``v`` as ``c @ v``.
    """

    point: ContactPoint
    e0: np.ndarray
    e_minus: np.ndarray
    e_plus: np.ndarray
    theta0: np.ndarray
    theta_minus: np.ndarray
    theta_plus: np.ndarray

    def vectors(self) -> np.ndarray:
        """All frame vectors as rows, ordered ``e0, e_1^-, e_1^+, ..., e_n^-, e_n^+``."""
        rows = [self.e0]
        for a in range(self.point.n):
            rows += [self.e_minus[a], self.e_plus[a]]
        return np.array(rows)

    def covectors(self) -> np.ndarray:
        rows = [self.theta0]
        for a in range(self.point.n):
            rows += [self.theta_minus[a], self.theta_plus[a]]
        return np.array(rows)

    def duality_matrix(self) -> np.ndarray:
        return self.covectors() @ self.vectors().T

    def metric(self, u: TangentVector, v: TangentVector) -> float:
        """``theta0 (x) theta0 + sum theta_+ (x) theta_+ - sum theta_- (x) theta_-``."""
        uu, vv = u.to_vector(), v.to_vector()
        return float((self.theta0 @ uu) * (self.theta0 @ vv)
                     + np.sum((self.theta_plus @ uu) * (self.theta_plus @ vv))
                     - np.sum((self.theta_minus @ uu) * (self.theta_minus @ vv)))

    def phi(self, u: TangentVector) -> TangentVector:
        """``phi = -theta_-^a (x) e_a^+ - theta_+^a (x) e_a^-``."""
        uu = u.to_vector()
        out = -(self.theta_minus @ uu) @ self.e_plus - (self.theta_plus @ uu) @ self.e_minus
        return TangentVector.from_vector(out)


def frame_basis(pt: ContactPoint) -> FrameBasis:
    if np.any(pt.y <= 0):
        raise DomainError(f"frame requires y_a > 0 for all a, got y = {pt.y}")
    n = pt.n
    dim = 2 * n + 1
    sq = np.sqrt(pt.y)

    e0 = np.zeros(dim)
    e0[-1] = 1.0
    theta0 = np.concatenate([-pt.y, np.zeros(n), [1.0]])

    e_minus = np.zeros((n, dim))
    e_plus = np.zeros((n, dim))
    th_minus = np.zeros((n, dim))
    th_plus = np.zeros((n, dim))
    for a in range(n):
        # e_a^{+/-} = sqrt(y)[(1/y)(d_x + y d_z) +/- d_y]
        for sign, e in ((1.0, e_plus), (-1.0, e_minus)):
            e[a, a] = 1.0 / sq[a]
            e[a, n + a] = sign * sq[a]
            e[a, -1] = sq[a]
        # theta^a_{+/-} = (y dx +/- dy) / (2 sqrt(y))
        for sign, th in ((1.0, th_plus), (-1.0, th_minus)):
            th[a, a] = pt.y[a] / (2 * sq[a])
            th[a, n + a] = sign / (2 * sq[a])
    return FrameBasis(pt, e0, e_minus, e_plus, theta0, th_minus, th_plus)


def phi_apply(pt: ContactPoint, u: TangentVector) -> TangentVector:
    return TangentVector(-u.dx, u.dy, -float(pt.y @ u.dx))


def phi_squared_apply(pt: ContactPoint, u: TangentVector) -> TangentVector:
    return TangentVector(u.dx, u.dy, float(pt.y @ u.dx))


def phi_power(pt: ContactPoint, u: TangentVector, mu: int) -> TangentVector:
    if mu == 0:
        return u
    if mu == 1:
        return phi_apply(pt, u)
    if mu == 2:
        return phi_squared_apply(pt, u)
    raise ValueError(f"mu must be 0, 1 or 2, got {mu}")


def lie_derivative_h(w: GeneratingFunction, pt: ContactPoint, mu: int) -> float:
    """Derivative of ``h = varpi(x) - z`` along ``phi^mu(X_h)``."""
    V = phi_power(pt, hamiltonian_vector_field(w, pt), mu)
    # dh = d varpi/dx^a dx^a - dz; h carries no y-dependence
    return float(w.gradient(pt.x) @ V.dx - V.dz)


def _vec_residual(a: TangentVector, b: TangentVector) -> float:
    return float(np.max(np.abs(a.to_vector() - b.to_vector())))


def eigen_split(pt: ContactPoint, u: TangentVector) -> tuple[TangentVector, TangentVector]:
    """Split ``u`` in ``ker lambda`` into its ``phi = +1`` and ``phi = -1`` parts."""
    pu = phi_apply(pt, u)
    return 0.5 * (u + pu), 0.5 * (u - pu)


@dataclass(frozen=True)
class IdentityResult:
    name: str
    samples: int
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


def random_point(rng: np.random.Generator, n: int, y_range=(0.1, 10.0), scale: float = 3.0) -> ContactPoint:
    lo, hi = y_range
    if lo <= 0:
        raise DomainError(f"sampling range for y must satisfy y_a > 0, got lower bound {lo}")
    return ContactPoint(rng.uniform(-scale, scale, n), rng.uniform(lo, hi, n), rng.uniform(-scale, scale))


def random_tangent(rng: np.random.Generator, n: int, scale: float = 1.0) -> TangentVector:
    return TangentVector.from_vector(rng.uniform(-scale, scale, 2 * n + 1))


def identity_suite(trials: int, n: int = 2, seed: int = 0, y_range=(0.1, 10.0),
                   raise_on_failure: bool = False) -> list[IdentityResult]:
    """Sample the structural identities of the para-contact metric manifold.

    Each trial draws a point with ``y`` in ``y_range`` and two random tangent
    vectors with components in ``[-1, 1]``.  Residuals are absolute.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    worst: dict[str, float] = {}
    tol = {}

    def record(name, residual, tolerance):
        worst[name] = max(worst.get(name, 0.0), float(residual))
        tol[name] = tolerance

    for _ in range(trials):
        pt = random_point(rng, n, y_range)
        X = random_tangent(rng, n)
        Y = random_tangent(rng, n)
        xi = TangentVector.reeb(n)
        fb = frame_basis(pt)
        lam = lambda V: contact_form(pt, V)  # noqa: E731
        g = lambda U, V: mrugala_metric(pt, U, V)  # noqa: E731

        # (i) phi^2 = Id - lambda (x) xi, via two applications of phi
        record("axiom_i_phi_squared",
               _vec_residual(phi_apply(pt, phi_apply(pt, X)), X - lam(X) * xi), EXACT_TOL)
        # (ii)
        record("axiom_ii_lambda_xi", abs(lam(xi) - 1.0), EXACT_TOL)
        # (iii) ker lambda = Im phi = D+ + D-: a kernel vector is phi^2-fixed
        # (so lies in Im phi) and splits into +/-1 eigenvectors of phi
        K = X - lam(X) * xi
        plus, minus = eigen_split(pt, K)
        r3 = max(_vec_residual(phi_squared_apply(pt, K), K),
                 _vec_residual(phi_apply(pt, plus), plus),
                 _vec_residual(phi_apply(pt, minus), -minus),
                 _vec_residual(plus + minus, K),
                 abs(lam(K)))
        record("axiom_iii_kernel_image_eigensplit", r3, EXACT_TOL)
        record("lambda_phi_zero", abs(lam(phi_apply(pt, X))), EXACT_TOL)
        record("phi_xi_zero", _vec_residual(phi_apply(pt, xi), TangentVector.zero(n)), EXACT_TOL)
        record("lambda_equals_g_xi", abs(lam(X) - g(X, xi)), EXACT_TOL)
        record("g_xi_xi_one", abs(g(xi, xi) - 1.0), EXACT_TOL)
        record("phi_antisymmetry", abs(g(phi_apply(pt, X), Y) + g(X, phi_apply(pt, Y))), FRAME_TOL)
        lhs = g(phi_apply(pt, X), phi_apply(pt, Y))
        rhs = -g(X, Y) + lam(X) * lam(Y)
        record("compatibility", abs(lhs - rhs), FRAME_TOL)
        record("para_contact_condition",
               abs(g(X, phi_apply(pt, Y)) - 0.5 * exterior_derivative(contact_form, pt, X, Y)), FRAME_TOL)
        record("frame_expansion_metric", abs(fb.metric(X, Y) - g(X, Y)), FRAME_TOL)
        record("frame_duality",
               float(np.max(np.abs(fb.duality_matrix() - np.eye(2 * n + 1)))), FRAME_TOL)
        frame_action = 0.0
        for a in range(n):
            ep = TangentVector.from_vector(fb.e_plus[a])
            em = TangentVector.from_vector(fb.e_minus[a])
            frame_action = max(frame_action,
                               _vec_residual(phi_apply(pt, ep), -em),
                               _vec_residual(phi_apply(pt, em), -ep))
        record("phi_frame_action", frame_action, FRAME_TOL)
        record("phi_closed_form_vs_frame",
               _vec_residual(phi_apply(pt, X), fb.phi(X)), FRAME_TOL)

    results = [IdentityResult(k, trials, worst[k], tol[k]) for k in worst]
    if raise_on_failure:
        for r in results:
            if not r.passed:
                raise PropertyViolationError(r.name, r.max_residual, r.tolerance)
    return results
