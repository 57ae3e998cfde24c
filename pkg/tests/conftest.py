import math

import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from paracontact.state_space import ObservableSystem

ACCEPTANCE_LINES = []


@pytest.fixture
def spin():
    """Two states with O = (+1, -1)."""
    return ObservableSystem(["up", "down"], [[1.0, -1.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@st.composite
def systems_and_theta(draw, max_states=64, max_n=8, obs_bound=5.0, theta_bound=3.0):
    J = draw(st.integers(2, max_states))
    n = draw(st.integers(1, max_n))
    finite = dict(allow_nan=False, allow_infinity=False)
    obs = draw(hnp.arrays(float, (n, J), elements=st.floats(-obs_bound, obs_bound, **finite)))
    theta = draw(hnp.arrays(float, n, elements=st.floats(-theta_bound, theta_bound, **finite)))
    return ObservableSystem.from_table(obs), theta


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


LN2 = math.log(2.0)
