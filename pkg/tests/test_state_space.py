import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paracontact.errors import DimensionError, NonFiniteResultError, StrictPositivityError
from paracontact.state_space import (
    Distribution,
    ObservableSystem,
    ThetaParams,
    equilibrium_distribution,
    equilibrium_expectation,
    partition_function,
    theta_potential,
)

from conftest import systems_and_theta

E = math.e


def direct_sum(obs, theta):
    """Two-term (or J-term) summation without any stabilisation."""
    obs = np.atleast_2d(obs)
    return sum(math.exp(sum(theta[a] * obs[a, j] for a in range(obs.shape[0])))
               for j in range(obs.shape[1]))


def test_partition_function_examples(spin):
    assert partition_function(spin, [0.0]) == pytest.approx(2.0, abs=1e-15)
    assert partition_function(spin, [1.0]) == pytest.approx(direct_sum([[1, -1]], [1.0]), rel=1e-15)
    assert partition_function(spin, [1.0]) == pytest.approx(E + 1 / E, rel=1e-15)


@pytest.mark.parametrize("n,J", [(1, 3), (3, 5), (2, 4)])
def test_zero_observables_give_state_count(n, J):
    sys = ObservableSystem.from_table(np.zeros((n, J)))
    theta = np.linspace(-2, 2, n)
    assert partition_function(sys, theta) == pytest.approx(J, rel=1e-15)
    assert theta_potential(sys, theta) == pytest.approx(math.log(J), rel=1e-15)


def test_equilibrium_distribution_examples(spin):
    np.testing.assert_allclose(equilibrium_distribution(spin, [0.0]).probs, [0.5, 0.5], atol=1e-16)
    z = E + 1 / E
    np.testing.assert_allclose(equilibrium_distribution(spin, [1.0]).probs, [E / z, (1 / E) / z],
                               rtol=1e-15)
    uniform = ObservableSystem.from_table(np.zeros((1, 4)))
    np.testing.assert_allclose(equilibrium_distribution(uniform, [0.7]).probs, [0.25] * 4, atol=1e-16)


def test_theta_potential_examples(spin):
    assert theta_potential(spin, [0.0]) == pytest.approx(math.log(2), abs=1e-15)
    assert theta_potential(spin, [1.0]) == pytest.approx(math.log(E + 1 / E), abs=1e-15)


def test_equilibrium_expectation_examples(spin):
    assert equilibrium_expectation(spin, [0.0])[0] == pytest.approx(0.0, abs=1e-16)
    assert equilibrium_expectation(spin, [1.0])[0] == pytest.approx(math.tanh(1.0), abs=1e-15)


def central_difference(f, x, h=1e-6):
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


@settings(max_examples=60, deadline=None)
@given(systems_and_theta())
def test_expectation_is_gradient_of_potential(case):
    sys, theta = case
    fd = central_difference(lambda th: theta_potential(sys, th), theta)
    np.testing.assert_allclose(equilibrium_expectation(sys, theta), fd, atol=1e-6)


@settings(max_examples=100, deadline=None)
@given(systems_and_theta())
def test_equilibrium_sums_to_one(case):
    sys, theta = case
    p = equilibrium_distribution(sys, theta).probs
    assert abs(p.sum() - 1.0) <= 1e-12
    assert np.all(p > 0)


@settings(max_examples=60, deadline=None)
@given(systems_and_theta(), st.data())
def test_theta_potential_is_midpoint_convex(case, data):
    sys, theta0 = case
    theta1 = np.array(data.draw(st.lists(st.floats(-3, 3), min_size=sys.n, max_size=sys.n)))
    mid = 0.5 * (theta0 + theta1)
    lhs = theta_potential(sys, mid)
    rhs = 0.5 * (theta_potential(sys, theta0) + theta_potential(sys, theta1))
    assert lhs <= rhs + 1e-12 * max(1.0, abs(rhs))


@settings(max_examples=60, deadline=None)
@given(systems_and_theta(max_n=1), st.floats(-5, 5))
def test_shift_of_single_observable(case, c):
    sys, theta = case
    shifted = ObservableSystem(sys.states, sys.observables + c)
    assert theta_potential(shifted, theta) == pytest.approx(theta_potential(sys, theta) + theta[0] * c,
                                                            abs=1e-12 * max(1, abs(theta_potential(sys, theta))))
    np.testing.assert_allclose(equilibrium_distribution(shifted, theta).probs,
                               equilibrium_distribution(sys, theta).probs, atol=1e-12)


def test_large_theta_stays_finite():
    sys = ObservableSystem.from_table([[1.0, -1.0, 0.5]])
    assert theta_potential(sys, [500.0]) == pytest.approx(500.0, rel=1e-12)


def test_partition_function_overflow():
    sys = ObservableSystem.from_table([[1.0, -1.0]])
    with pytest.raises(NonFiniteResultError):
        partition_function(sys, [1000.0])


def test_equilibrium_underflow_is_rejected():
    sys = ObservableSystem.from_table([[1.0, -1.0]])
    with pytest.raises(StrictPositivityError):
        equilibrium_distribution(sys, [500.0])


def test_dimension_mismatch(spin):
    with pytest.raises(DimensionError):
        theta_potential(spin, [1.0, 2.0])


def test_type_invariants():
    with pytest.raises(DimensionError):
        ObservableSystem(["only"], [[1.0]])
    with pytest.raises(ValueError):
        ObservableSystem(["a", "b"], [[1.0, np.inf]])
    with pytest.raises(ValueError):
        Distribution([0.6, 0.6])
    with pytest.raises(ValueError):
        Distribution([1.5, -0.5])
    with pytest.raises(ValueError):
        ThetaParams([np.nan])
    assert len(ThetaParams([1.0, 2.0])) == 2


def test_theta_params_and_distribution_interoperate(spin):
    p = equilibrium_distribution(spin, ThetaParams([1.0]))
    assert np.asarray(p).shape == (2,)
    assert spin.index("down") == 1
