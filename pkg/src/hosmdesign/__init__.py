"""Sliding-variable design with prescribed relative degree and sliding dynamics.

Synthesize ``sigma = C x`` for single-input LTI plants by zero placement,
close the loop with sliding-mode laws of order 1-3, and measure how the
steady sliding errors scale with the sampling period or actuator lag.
"""

from .accuracy import AccuracyFit, default_grid, fit_power_law, least_squares_line, sweep_and_fit, sweep_errors
from .controllers import (
    ControllerSpec,
    SlidingController,
    quasi_continuous_2,
    quasi_continuous_3,
    relay_control,
    sign,
    sliding_coordinates,
    twisting_control,
)
from .design import (
    DesignReport,
    SlidingDesign,
    ackermann_utkin,
    design_from_zeros,
    design_sliding_variable,
    verify_design,
)
from .errors import (
    ConditioningError,
    DesignVerificationError,
    DimensionError,
    NumericalError,
    RelativeDegreeError,
    SingularMatrixError,
    UncontrollableError,
)
from .linalg import (
    Polynomial,
    characteristic_polynomial,
    controllability_matrix,
    eval_matrix_polynomial,
    poly_from_roots,
    polynomial_roots,
    solve_linear,
)
from .lti import (
    LtiSystem,
    NormalFormData,
    TransferFunction,
    augment_with_integrators,
    normal_form,
    relative_degree,
    to_controller_canonical,
    transfer_function,
)
from .simulation import SimConfig, Trajectory, simulate, steady_state_error
from .systems import integrator_chain, pendulum

__version__ = "0.1.0"
