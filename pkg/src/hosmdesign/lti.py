"""Single-input LTI plants and their structural properties.

Covers relative degree, transfer functions, the controller (phase-variable)
canonical form, the Byrnes-Isidori normal form with its zero dynamics, and
input-side integrator augmentation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConditioningError, RelativeDegreeError, SingularMatrixError, UncontrollableError
from .linalg import (
    Polynomial,
    as_column,
    as_row,
    as_square,
    companion_matrix,
    controllability_matrix,
    faddeev_leverrier,
    solve_linear,
)

RELDEG_RTOL = 1e-9
NORMAL_FORM_MAX_COND = 1e8


@dataclass(frozen=True, eq=False)
class LtiSystem:
    """``x' = A x + B (u + w)`` with a single input.

    ``B`` is stored as an ``(n, 1)`` column.  Controllability is not checked
    here; the operations that need it raise :class:`UncontrollableError`.
    """

    A: np.ndarray
    B: np.ndarray

    def __init__(self, A, B):
        A = as_square(A, "A")
        B = as_column(B, A.shape[0], "B")
        A.setflags(write=False)
        B.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def b(self):
        """Input column as a flat vector."""
        return self.B[:, 0]

    def controllability_matrix(self):
        return controllability_matrix(self.A, self.B)

    def controllability_condition(self):
        try:
            return solve_linear(self.controllability_matrix(), np.eye(self.n)).condition
        except SingularMatrixError:
            return np.inf

    def is_controllable(self):
        return np.isfinite(self.controllability_condition())

    def transformed(self, S):
        """The similar system ``(S A S^-1, S B)``."""
        S = as_square(S, "S")
        Sinv = solve_linear(S, np.eye(self.n)).x
        return LtiSystem(S @ self.A @ Sinv, S @ self.B)

    def __repr__(self):
        return f"LtiSystem(n={self.n})"


@dataclass(frozen=True)
class TransferFunction:
    numerator: Polynomial
    denominator: Polynomial

    @property
    def relative_degree(self):
        return self.denominator.degree - self.numerator.degree

    def zeros(self):
        return self.numerator.roots() if not self.numerator.is_zero else []

    def poles(self):
        return self.denominator.roots()

    def __call__(self, s):
        return self.numerator(s) / self.denominator(s)

    def __str__(self):
        return f"({self.numerator}) / ({self.denominator})"


@dataclass(frozen=True)
class NormalFormData:
    """Coordinates ``[eta; xi] = T x`` and the blocks of the ``eta`` dynamics.

    ``eta' = A0 eta + B0 xi``; ``xi`` holds ``sigma`` and its first ``r-1``
    derivatives.
    """

    T: np.ndarray
    B_perp: np.ndarray
    A0: np.ndarray
    B0: np.ndarray
    r: int
    condition: float


def markov_parameters(sys, C, count=None):
    """``[C B, C A B, ..., C A^(count-1) B]`` together with their scale tolerances."""
    C = as_row(C, sys.n)[0]
    count = sys.n if count is None else count
    normA = np.linalg.norm(sys.A, 2)
    scale0 = np.linalg.norm(C) * np.linalg.norm(sys.b)
    vals, scales = [], []
    row = C
    for i in range(count):
        vals.append(float(row @ sys.b))
        scales.append(scale0 * normA**i)
        row = row @ sys.A
    return np.array(vals), np.array(scales)


def relative_degree(sys, C, rtol=RELDEG_RTOL):
    """Smallest ``r`` with ``|C A^(r-1) B|`` above a scale-relative threshold.

    The threshold for index ``r`` is ``rtol * |C| |A|^(r-1) |B|`` (2-norms).
    """
    vals, scales = markov_parameters(sys, C)
    for i, (v, s) in enumerate(zip(vals, scales)):
        if abs(v) > rtol * s:
            return i + 1
    raise RelativeDegreeError("no relative degree: C A^(i-1) B vanishes for every i <= n")


def transfer_function(sys, C, rtol=RELDEG_RTOL):
    """``C (sI - A)^-1 B`` from the Faddeev-LeVerrier adjugate sequence.

    Leading numerator coefficients that are roundoff relative to the scale
    they were computed at (``|C| |adj_k| |B|``) are dropped, using the same
    rule as :func:`relative_degree`.
    """
    C = as_row(C, sys.n)[0]
    den, adj = faddeev_leverrier(sys.A)
    n = sys.n
    num = np.zeros(n)
    tol = np.zeros(n)
    cb = np.linalg.norm(C) * np.linalg.norm(sys.b)
    for k, M in enumerate(adj):
        num[n - 1 - k] = C @ M @ sys.b
        tol[n - 1 - k] = rtol * cb * np.linalg.norm(M, 2)
    top = n - 1
    while top > 0 and abs(num[top]) <= tol[top]:
        top -= 1
    if top == 0 and abs(num[0]) <= tol[0]:
        return TransferFunction(Polynomial([0.0]), Polynomial(den))
    return TransferFunction(Polynomial(num[: top + 1]), Polynomial(den))


def canonical_pair(charpoly):
    """Controller canonical ``(A_hat, B_hat)`` for a monic characteristic polynomial."""
    A_hat = companion_matrix(charpoly)
    B_hat = np.zeros((charpoly.degree, 1))
    B_hat[-1, 0] = 1.0
    return A_hat, B_hat


def to_controller_canonical(sys):
    """Return ``(canonical_system, T)`` with ``A_hat = T^-1 A T`` and ``B_hat = T^-1 B``.

    ``T = P P_hat^-1`` where ``P`` and ``P_hat`` are the controllability
    matrices of the original and canonical pairs.
    """
    P = sys.controllability_matrix()
    try:
        solve_linear(P, np.eye(sys.n))
    except SingularMatrixError as exc:
        raise UncontrollableError(f"uncontrollable system: {exc}", pivot=exc.pivot) from exc
    coeffs, _ = faddeev_leverrier(sys.A)
    A_hat, B_hat = canonical_pair(Polynomial(coeffs))
    P_hat = controllability_matrix(A_hat, B_hat)
    # T P_hat = P  <=>  P_hat^T T^T = P^T
    T = solve_linear(P_hat.T, P.T).x.T
    return LtiSystem(A_hat, B_hat), T


def _left_null_rows(M):
    """Orthonormal rows spanning ``{v : v M = 0}``."""
    return scipy.linalg.null_space(M.T).T


def normal_form(sys, C, max_condition=NORMAL_FORM_MAX_COND):
    """Normal-form coordinates for output ``sigma = C x``.

    ``B_perp`` is an orthonormal basis of the part of the left null space of
    ``B`` orthogonal to ``C, CA, ..., CA^(r-2)``, so ``B_perp B = 0`` holds to
    machine precision and ``T`` is invertible whenever ``r`` is defined.
    """
    C = as_row(C, sys.n)[0]
    r = relative_degree(sys, C)
    n = sys.n
    rows = [C]
    for _ in range(r - 1):
        rows.append(rows[-1] @ sys.A)
    xi_rows = np.array(rows)

    N = scipy.linalg.null_space(sys.B.T)  # n x (n-1), orthonormal columns
    if r > 1:
        K = scipy.linalg.null_space(xi_rows[:-1] @ N)
    else:
        K = np.eye(n - 1)
    B_perp = (N @ K).T[: n - r]
    if B_perp.shape[0] != n - r:
        raise ConditioningError(
            f"could not complete the normal-form basis ({B_perp.shape[0]} of {n - r} rows)"
        )
    T = np.vstack([B_perp, xi_rows]) if n > r else xi_rows
    # rows C A^i can differ in scale by orders of magnitude; conditioning is
    # judged after row equilibration so that only genuine near-dependence fails
    row_norms = np.linalg.norm(T, axis=1)
    try:
        sol = solve_linear(T / row_norms[:, None], np.eye(n))
    except SingularMatrixError as exc:
        raise ConditioningError(f"normal-form transformation is singular: {exc}") from exc
    if sol.condition > max_condition:
        raise ConditioningError(
            f"normal-form transformation is ill-conditioned (cond {sol.condition:.3g} > {max_condition:.3g})"
        )
    T_inv = sol.x / row_norms[None, :]
    A_bar = T @ sys.A @ T_inv
    m = n - r
    return NormalFormData(
        T=T,
        B_perp=B_perp.reshape(m, n),
        A0=A_bar[:m, :m],
        B0=A_bar[:m, m:],
        r=r,
        condition=sol.condition,
    )


def augment_with_integrators(sys, k):
    """Cascade ``k`` integrators in front of the plant input.

    New state is ``[x, u, u', ..., u^(k-1)]`` and the new input is ``u^(k)``.
    """
    if int(k) != k or k < 1:
        raise ValueError(f"number of integrators must be a positive integer, got {k}")
    k = int(k)
    n = sys.n
    A = np.zeros((n + k, n + k))
    A[:n, :n] = sys.A
    A[:n, n] = sys.b
    for j in range(k - 1):
        A[n + j, n + j + 1] = 1.0
    B = np.zeros(n + k)
    B[-1] = 1.0
    return LtiSystem(A, B)


def pad_row(C, k):
    """Zero-pad a row vector with ``k`` trailing entries."""
    C = np.asarray(C, dtype=float).ravel()
    return np.concatenate([C, np.zeros(int(k))])
