"""Sliding-variable synthesis by zero placement.

Given a controllable single-input pair ``(A, B)`` and a monic polynomial
``gamma`` of degree ``n - r``, the row

    C = e P^-1 gamma(A),    e = [0, ..., 0, 1],   P = [B, AB, ..., A^(n-1) B]

makes ``sigma = C x`` have relative degree ``r`` and transfer-function
numerator ``gamma``, so the sliding-mode dynamics on
``sigma = sigma' = ... = sigma^(r-1) = 0`` have the roots of ``gamma`` as
eigenvalues.  The classical Ackermann-Utkin formula is the ``r = 1`` case.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DesignVerificationError, RelativeDegreeError, SingularMatrixError, UncontrollableError
from .linalg import Polynomial, as_row, eval_matrix_polynomial, poly_from_roots, polynomial_roots, solve_linear
from .lti import relative_degree, transfer_function

VERIFY_RTOL = 1e-6


@dataclass(frozen=True, eq=False)
class SlidingDesign:
    C: np.ndarray
    gamma: Polynomial
    target_r: int
    realized_r: int
    zeros: list
    numerator: Polynomial
    controllability_condition: float

    @property
    def n(self):
        return self.C.size


def _as_gamma(gamma):
    if isinstance(gamma, Polynomial):
        return gamma
    return Polynomial(gamma)


def design_sliding_variable(sys, gamma, rtol=VERIFY_RTOL):
    """Sliding row ``C`` with relative degree ``n - deg(gamma)`` and zeros at the roots of ``gamma``.

    Parameters
    ----------
    sys : LtiSystem
        Controllable single-input plant.
    gamma : Polynomial or sequence
        Monic target polynomial, ascending coefficients, degree ``0 .. n-1``.
    rtol : float
        Relative coefficient tolerance for the mandatory post-check that the
        realized numerator equals ``gamma``.

    Raises
    ------
    UncontrollableError
        ``P`` is numerically singular.
    ValueError
        ``gamma`` is not monic or has degree ``>= n``.
    DesignVerificationError
        The realized relative degree or numerator disagrees with the target.
    """
    gamma = _as_gamma(gamma)
    n = sys.n
    if gamma.is_zero or not gamma.is_monic():
        raise ValueError(f"gamma must be monic, leading coefficient is {gamma.leading}")
    if gamma.degree > n - 1:
        raise ValueError(f"gamma has degree {gamma.degree}, must be at most n-1 = {n - 1}")
    target_r = n - gamma.degree

    P = sys.controllability_matrix()
    e_last = np.zeros(n)
    e_last[-1] = 1.0
    try:
        # q = e P^-1  <=>  P^T q^T = e^T
        sol = solve_linear(P.T, e_last)
    except SingularMatrixError as exc:
        raise UncontrollableError(f"uncontrollable system: {exc}", pivot=exc.pivot) from exc
    C = sol.x @ eval_matrix_polynomial(gamma, sys.A)

    try:
        realized_r = relative_degree(sys, C)
    except RelativeDegreeError as exc:
        raise DesignVerificationError(
            f"designed C has no relative degree (cond(P) = {sol.condition:.3g})"
        ) from exc
    numerator = transfer_function(sys, C).numerator
    if realized_r != target_r:
        raise DesignVerificationError(
            f"realized relative degree {realized_r} != target {target_r} "
            f"(numerator {numerator}, cond(P) = {sol.condition:.3g})",
            numerator=numerator,
            realized_r=realized_r,
        )
    mismatch = gamma.relative_error(numerator)
    if mismatch > rtol:
        raise DesignVerificationError(
            f"realized numerator {numerator} differs from gamma {gamma} "
            f"(relative error {mismatch:.3g}, cond(P) = {sol.condition:.3g})",
            numerator=numerator,
            realized_r=realized_r,
        )
    C.setflags(write=False)
    return SlidingDesign(
        C=C,
        gamma=gamma,
        target_r=target_r,
        realized_r=realized_r,
        zeros=polynomial_roots(gamma),
        numerator=numerator,
        controllability_condition=sol.condition,
    )


def design_from_zeros(sys, zeros, rtol=VERIFY_RTOL):
    """:func:`design_sliding_variable` with ``gamma`` built from its roots."""
    return design_sliding_variable(sys, poly_from_roots(zeros), rtol=rtol)


def ackermann_utkin(sys, beta, rtol=VERIFY_RTOL):
    """Classical relative-degree-one design; ``beta`` must have degree ``n - 1``."""
    beta = _as_gamma(beta)
    if beta.degree != sys.n - 1:
        raise ValueError(f"beta must have degree n-1 = {sys.n - 1}, got {beta.degree}")
    return design_sliding_variable(sys, beta, rtol=rtol)


@dataclass(frozen=True)
class DesignReport:
    relative_degree: int | None
    numerator: Polynomial
    denominator: Polynomial
    zeros: list
    max_real_zero: float
    minimum_phase: bool
    mismatch: float
    notes: list = field(default_factory=list)

    @property
    def has_sliding_dynamics(self):
        return bool(self.zeros)


def verify_design(sys, C, gamma=None):
    """Diagnose a sliding row ``C`` without raising on degenerate input.

    ``mismatch`` is the relative coefficient error between ``gamma`` and the
    realized numerator, normalized to unit leading coefficient so a scaled
    ``C`` is not penalized; it is ``nan`` when no ``gamma`` is given.
    """
    C = as_row(C, sys.n)[0]
    notes = []
    tf = transfer_function(sys, C)
    try:
        r = relative_degree(sys, C)
    except RelativeDegreeError:
        r = None
        notes.append("no relative degree: sigma is decoupled from the input")
    num = tf.numerator
    zeros = [] if num.is_zero else polynomial_roots(num)
    if r is not None and not zeros:
        notes.append("relative degree equals n: no sliding dynamics")
    max_re = max((z.real for z in zeros), default=-np.inf)
    minimum_phase = r is not None and max_re < 0.0
    if gamma is None:
        mismatch = float("nan")
    else:
        gamma = _as_gamma(gamma)
        if num.is_zero:
            mismatch = float("inf")
        else:
            mismatch = gamma.relative_error(num * (1.0 / num.leading))
    return DesignReport(
        relative_degree=r,
        numerator=num,
        denominator=tf.denominator,
        zeros=zeros,
        max_real_zero=float(max_re),
        minimum_phase=bool(minimum_phase),
        mismatch=float(mismatch),
        notes=notes,
    )
