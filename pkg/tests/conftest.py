import sys
import numpy as np
import pytest

from hosmdesign import LtiSystem
from hosmdesign.systems import integrator_chain, pendulum


@pytest.fixture
def pend():
    return pendulum()


@pytest.fixture
def chain3():
    return integrator_chain(3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_controllable(rng, n, max_cond=1e6):
    """Random (A, B) whose controllability matrix passes an SVD rank check."""
    while True:
        A = rng.uniform(-1, 1, (n, n))
        B = rng.uniform(-1, 1, n)
        P = np.column_stack([np.linalg.matrix_power(A, k) @ B for k in range(n)])
        if np.linalg.matrix_rank(P) == n and np.linalg.cond(P) < max_cond:
            return LtiSystem(A, B)


def expand_roots(roots):
    """Ascending real coefficients of prod (s - z), via numpy's descending np.poly."""
    return np.real(np.poly(roots))[::-1]


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance PASS/FAIL lines after the test report."""
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
