"""Reference plants."""

import numpy as np

from .lti import LtiSystem

# Linearized cart-pole: cart position/velocity, pole angle/angular velocity.
PENDULUM_A = (
    (0.0, 1.0, 0.0, 0.0),
    (0.0, 0.0, -1.56, 0.0),
    (0.0, 0.0, 0.0, 1.0),
    (0.0, 0.0, 46.87, 0.0),
)
PENDULUM_B = (0.0, 0.97, 0.0, -3.98)

# Published sliding rows for zeros at -5, keyed by relative degree (4 decimals).
PENDULUM_PUBLISHED_C = {
    1: (-3.2002, -1.9201, -4.5411, -0.7166),
    2: (-0.6400, -0.2560, -0.4062, -0.0621),
    3: (-0.1280, -0.0256, -0.0310, -0.0062),
}

# (s + 5)^(4 - r), ascending coefficients
PENDULUM_GAMMA = {
    1: (125.0, 75.0, 15.0, 1.0),
    2: (25.0, 10.0, 1.0),
    3: (5.0, 1.0),
}


def pendulum():
    return LtiSystem(PENDULUM_A, PENDULUM_B)


def integrator_chain(n):
    """``x1' = x2, ..., xn' = u + w``."""
    A = np.diag(np.ones(n - 1), 1)
    B = np.zeros(n)
    B[-1] = 1.0
    return LtiSystem(A, B)
