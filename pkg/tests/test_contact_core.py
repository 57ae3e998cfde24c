import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from paracontact.contact_core import (
    ContactPoint,
    GeneratingFunction,
    TangentVector,
    contact_form,
    contact_hamiltonian,
    flow_closed_form,
    flow_vector_rhs,
    gradient_check,
    h_decay_check,
    hamiltonian_vector_field,
    legendre_distance,
    legendre_point,
    legendre_tangent,
    nondegeneracy_volume,
)
from paracontact.errors import DomainError, PropertyViolationError
from paracontact.integrators import IntegratorConfig, rk4_solve
from paracontact.state_space import ObservableSystem

SQUARE = GeneratingFunction.quadratic([[1.0]])  # varpi(x) = x^2
finite = dict(allow_nan=False, allow_infinity=False)


def pt(x, y, z):
    return ContactPoint(np.atleast_1d(x), np.atleast_1d(y), z)


@st.composite
def points(draw, n=None, bound=3.0):
    n = draw(st.integers(1, 3)) if n is None else n
    arr = draw(hnp.arrays(float, 2 * n + 1, elements=st.floats(-bound, bound, **finite)))
    return ContactPoint.from_vector(arr)


@st.composite
def generating_functions(draw, n):
    if draw(st.booleans()):
        A = draw(hnp.arrays(float, (n, n), elements=st.floats(-2, 2, **finite)))
        b = draw(hnp.arrays(float, n, elements=st.floats(-2, 2, **finite)))
        return GeneratingFunction.quadratic(A, b, draw(st.floats(-2, 2)))
    J = draw(st.integers(2, 6))
    obs = draw(hnp.arrays(float, (n, J), elements=st.floats(-2, 2, **finite)))
    return GeneratingFunction.from_system(ObservableSystem.from_table(obs))


@st.composite
def flows(draw):
    p = draw(points())
    return draw(generating_functions(p.n)), p


def test_contact_form_examples():
    p = pt(0.3, 2.0, -1.0)
    assert contact_form(p, TangentVector([0.0], [5.0], 0.0)) == 0.0
    assert contact_form(p, TangentVector.reeb(1)) == 1.0
    assert contact_form(p, TangentVector([1.0], [0.0], 0.0)) == -2.0


def test_contact_hamiltonian_examples(spin):
    assert contact_hamiltonian(SQUARE, legendre_point(SQUARE, [1.7])) == 0.0
    assert contact_hamiltonian(GeneratingFunction.constant(2.5), pt(0.0, 0.0, 0.0)) == 2.5
    w = GeneratingFunction.from_system(spin)
    assert contact_hamiltonian(w, pt(0.0, 0.0, 0.0)) == pytest.approx(math.log(2), abs=1e-16)


def test_hamiltonian_vector_field_examples():
    X = hamiltonian_vector_field(SQUARE, pt(1.0, 0.0, 0.0))
    np.testing.assert_array_equal(X.to_vector(), [0.0, 2.0, 1.0])
    on = legendre_point(SQUARE, [0.4])
    assert np.all(hamiltonian_vector_field(SQUARE, on).to_vector() == 0.0)


@settings(max_examples=50, deadline=None)
@given(flows())
def test_vector_field_fixes_x(case):
    w, p = case
    assert np.all(hamiltonian_vector_field(w, p).dx == 0.0)


def test_legendre_point_examples(spin):
    np.testing.assert_array_equal(legendre_point(GeneratingFunction.constant(0.0), [0.2]).to_vector(),
                                  [0.2, 0.0, 0.0])
    np.testing.assert_allclose(legendre_point(SQUARE, [3.0]).to_vector(), [3.0, 6.0, 9.0])
    w = GeneratingFunction.from_system(spin)
    for th in (-1.2, 0.0, 0.8):
        p = legendre_point(w, [th])
        assert p.y[0] == pytest.approx(math.tanh(th), abs=1e-15)
        assert p.z == pytest.approx(math.log(2 * math.cosh(th)), abs=1e-15)


def test_flow_closed_form_examples():
    p0 = pt(0.5, -1.0, 2.0)
    assert flow_closed_form(SQUARE, p0, 0.0) is p0
    np.testing.assert_allclose(flow_closed_form(SQUARE, p0, 50.0).to_vector(),
                               legendre_point(SQUARE, [0.5]).to_vector(), atol=1e-12)
    with pytest.raises(DomainError):
        flow_closed_form(SQUARE, p0, -1.0)


def test_flow_rk4_cross_check(rng):
    w = GeneratingFunction.quadratic(rng.normal(size=(2, 2)), rng.normal(size=2))
    p0 = ContactPoint.from_vector(rng.normal(size=5))
    ts, ys = rk4_solve(flow_vector_rhs(w), p0.to_vector(), IntegratorConfig(1e-3, 5.0))
    closed = np.array([flow_closed_form(w, p0, t).to_vector() for t in ts])
    assert np.max(np.abs(ys - closed)) <= 1e-9


def test_h_decay_examples():
    p0 = pt(0.0, 0.0, -1.0)  # varpi(0) = 0, so h = 1
    h_t, pred = h_decay_check(SQUARE, p0, math.log(2))
    assert h_t == pytest.approx(0.5, abs=1e-15) and pred == pytest.approx(0.5, abs=1e-15)
    assert h_decay_check(SQUARE, legendre_point(SQUARE, [1.0]), 3.0) == (0.0, 0.0)


@settings(max_examples=100, deadline=None)
@given(flows(), st.floats(0, 10))
def test_h_decay_identity(case, t):
    w, p = case
    h_decay_check(w, p, t, tol=1e-12)


def test_h_decay_violation_raises(monkeypatch):
    import paracontact.contact_core as cc
    monkeypatch.setattr(cc, "flow_closed_form", lambda w, p, t: p)
    with pytest.raises(PropertyViolationError):
        cc.h_decay_check(SQUARE, pt(0.0, 0.0, -1.0), 1.0)


@settings(max_examples=50, deadline=None)
@given(flows())
def test_legendre_submanifold_is_invariant(case):
    w, p = case
    on = legendre_point(w, p.x)
    for t in (0.1, 1.0, 7.5):
        assert legendre_distance(w, flow_closed_form(w, on, t)) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(flows())
def test_legendre_submanifold_attracts(case):
    w, p = case
    d0 = legendre_distance(w, p)
    ds = [legendre_distance(w, flow_closed_form(w, p, t)) for t in np.linspace(0, 10, 21)]
    assert all(b <= a for a, b in zip(ds, ds[1:]))
    for t, d in zip(np.linspace(0, 10, 21), ds):
        assert d == pytest.approx(math.exp(-t) * d0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(flows())
def test_contact_form_pulls_back_to_zero(case):
    w, p = case
    for e in np.eye(p.n):
        assert abs(contact_form(legendre_point(w, p.x), legendre_tangent(w, p.x, e))) <= 1e-9


def test_fd_gradient_fallback_is_flagged(spin):
    w = GeneratingFunction(evaluate=lambda x: float(np.sum(x ** 3)))
    assert w.uses_fd_gradient
    np.testing.assert_allclose(w.gradient(np.array([1.0, 2.0])), [3.0, 12.0], atol=1e-6)
    assert not GeneratingFunction.from_system(spin).uses_fd_gradient


def test_gradient_matches_finite_differences(rng, spin):
    samples = rng.uniform(-2, 2, (10, 1))
    assert gradient_check(GeneratingFunction.from_system(spin), samples) <= 1e-6
    assert gradient_check(SQUARE, samples) <= 1e-6


# lambda ^ (d lambda)^n on (dx.., dy.., dz) is n! (-1)^{n(n-1)/2}: dz is the
# only surviving part of lambda, (d lambda)^n = n! dx1^dy1^...^dxn^dyn, and
# reordering to dx1..dxn dy1..dyn costs n(n-1)/2 transpositions.
@pytest.mark.parametrize("n,expected", [(1, 1.0), (2, -2.0), (3, -6.0)])
def test_nondegeneracy_volume(n, expected, rng):
    for _ in range(2):
        p = ContactPoint.from_vector(rng.normal(scale=3, size=2 * n + 1))
        assert nondegeneracy_volume(p, n) == pytest.approx(expected, abs=1e-12)


def test_degenerate_form_has_zero_volume(rng):
    dz = lambda p, v: v.dz  # noqa: E731
    for n in (1, 2):
        assert nondegeneracy_volume(ContactPoint.from_vector(rng.normal(size=2 * n + 1)), n, form=dz) == 0.0


def test_nondegeneracy_limited_to_small_n():
    with pytest.raises(ValueError):
        nondegeneracy_volume(ContactPoint(np.zeros(4), np.zeros(4), 0.0))


def test_tangent_arithmetic():
    u = TangentVector([1.0], [2.0], 3.0)
    np.testing.assert_array_equal((2 * u - u).to_vector(), u.to_vector())
    np.testing.assert_array_equal((-u).to_vector(), [-1.0, -2.0, -3.0])
    with pytest.raises(ValueError):
        TangentVector([1.0, 2.0], [1.0], 0.0)
