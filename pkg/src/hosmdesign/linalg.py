"""Small dense linear algebra and real polynomials.

Matrices are plain ``numpy`` float arrays; every public function validates
shape and finiteness on entry.  Polynomials store coefficients in ascending
degree order, so ``Polynomial([5, 1])`` is ``s + 5``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

from .errors import (
    ConvergenceError,
    DimensionError,
    NonFiniteError,
    SingularMatrixError,
)

TRIM_TOL = 1e-12
PIVOT_TOL = 1e-12
CONJ_TOL = 1e-9
IMAG_TOL = 1e-10


def as_matrix(a, name="matrix", shape=None):
    """Return ``a`` as a finite 2-D float array.

    A 1-D input is read as a row vector.  ``shape`` entries of ``None`` are
    not checked.
    """
    m = np.array(a, dtype=float)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got {m.ndim}-D")
    if not np.all(np.isfinite(m)):
        raise NonFiniteError(f"{name} contains non-finite entries")
    if shape is not None:
        for axis, (want, got) in enumerate(zip(shape, m.shape)):
            if want is not None and want != got:
                raise DimensionError(
                    f"{name} has shape {m.shape}, expected {axis}-th dimension {want}"
                )
    return m


def as_square(a, name="matrix"):
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got {m.shape[0]}x{m.shape[1]}")
    return m


def as_column(b, n, name="B"):
    v = np.array(b, dtype=float)
    if v.ndim == 1:
        v = v.reshape(-1, 1)
    return as_matrix(v, name, shape=(n, 1))


def as_row(c, n, name="C"):
    v = np.array(c, dtype=float)
    if v.ndim <= 1:
        v = v.reshape(1, -1)
    return as_matrix(v, name, shape=(1, n))


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Real polynomial with ascending coefficients.

    Trailing coefficients smaller than ``1e-12`` times the largest magnitude
    are trimmed on construction.  The zero polynomial has ``coeffs == (0.0,)``
    and degree 0.
    """

    coeffs: tuple

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=float))
        if c.ndim != 1 or c.size == 0:
            raise DimensionError("polynomial coefficients must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(c)):
            raise NonFiniteError("polynomial coefficients contain non-finite entries")
        scale = np.max(np.abs(c))
        if scale == 0.0:
            c = np.zeros(1)
        else:
            keep = np.nonzero(np.abs(c) > TRIM_TOL * scale)[0]
            c = c[: keep[-1] + 1]
        object.__setattr__(self, "coeffs", tuple(float(x) for x in c))

    @classmethod
    def from_roots(cls, roots):
        return poly_from_roots(roots)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return self.coeffs == (0.0,)

    @property
    def leading(self):
        return self.coeffs[-1]

    def is_monic(self, tol=1e-12):
        return abs(self.leading - 1.0) <= tol

    def as_array(self):
        return np.array(self.coeffs)

    def roots(self):
        return polynomial_roots(self)

    def __call__(self, x):
        # Horner; works for scalars and arrays
        acc = 0.0 * np.asarray(x) + self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(np.asarray(self.coeffs) * float(other))
        return Polynomial(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Polynomial([1.0])
        for _ in range(int(k)):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def relative_error(self, other):
        """Max coefficient difference divided by the largest coefficient of ``self``."""
        if not isinstance(other, Polynomial):
            other = Polynomial(other)
        a, b = self.as_array(), other.as_array()
        size = max(a.size, b.size)
        a = np.pad(a, (0, size - a.size))
        b = np.pad(b, (0, size - b.size))
        scale = max(np.max(np.abs(a)), 1e-300)
        return float(np.max(np.abs(a - b)) / scale)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)})"

    def __str__(self):
        return format_polynomial(self)


def format_polynomial(p, var="s", digits=6):
    terms = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0.0 and p.degree > 0:
            continue
        mag = f"{abs(c):.{digits}g}"
        if k == 0:
            body = mag
        else:
            power = var if k == 1 else f"{var}^{k}"
            body = power if abs(c) == 1.0 else f"{mag}*{power}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def controllability_matrix(A, B):
    """Return ``[B, AB, ..., A^(n-1) B]``."""
    A = as_square(A, "A")
    n = A.shape[0]
    B = np.array(B, dtype=float)
    if B.ndim == 1:
        B = B.reshape(-1, 1)
    if B.shape != (n, 1):
        raise DimensionError(f"B has shape {B.shape}, expected ({n}, 1) to match A ({n}x{n})")
    B = as_matrix(B, "B")
    P = np.empty((n, n))
    col = B[:, 0]
    for k in range(n):
        P[:, k] = col
        col = A @ col
    return P


def eval_matrix_polynomial(p, A):
    """Evaluate ``p(A)`` by Horner's scheme."""
    A = as_square(A, "A")
    p = p if isinstance(p, Polynomial) else Polynomial(p)
    n = A.shape[0]
    eye = np.eye(n)
    out = p.coeffs[-1] * eye
    for c in reversed(p.coeffs[:-1]):
        out = out @ A + c * eye
    return out


def faddeev_leverrier(A):
    """Characteristic coefficients and adjugate sequence of ``A``.

    Returns ``(coeffs, adj)`` where ``coeffs`` is ascending and monic
    (length n+1) and ``adj[k]`` is the matrix coefficient of ``s^(n-1-k)``
    in ``adj(sI - A)``.
    """
    A = as_square(A, "A")
    n = A.shape[0]
    c = np.zeros(n + 1)
    c[n] = 1.0
    eye = np.eye(n)
    M = np.zeros((n, n))
    adj = []
    for k in range(1, n + 1):
        M = A @ M + c[n - k + 1] * eye
        adj.append(M)
        c[n - k] = -np.trace(A @ M) / k
    return c, adj


def characteristic_polynomial(A):
    """Monic ``det(sI - A)`` via the Faddeev-LeVerrier recursion."""
    coeffs, _ = faddeev_leverrier(A)
    return Polynomial(coeffs)


def companion_matrix(p):
    """Companion matrix of monic-normalized ``p`` (coefficients in the last row)."""
    c = np.asarray(p.coeffs) / p.leading
    d = p.degree
    M = np.zeros((d, d))
    M[:-1, 1:] = np.eye(d - 1)
    M[-1, :] = -c[:-1]
    return M


def polynomial_roots(p):
    """Roots of ``p`` sorted by real then imaginary part.

    Computed as eigenvalues of the companion matrix (LAPACK Hessenberg QR).
    """
    p = p if isinstance(p, Polynomial) else Polynomial(p)
    if p.is_zero:
        raise ValueError("the zero polynomial has no well-defined roots")
    if p.degree == 0:
        return []
    try:
        ev = scipy.linalg.eigvals(companion_matrix(p))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"companion eigenvalue iteration failed: {exc}") from exc
    out = [complex(z) for z in ev]
    return sorted(out, key=lambda z: (z.real, z.imag))


def poly_from_roots(roots):
    """Monic real polynomial with the given conjugate-closed root multiset."""
    roots = [complex(z) for z in roots]
    unmatched = list(roots)
    while unmatched:
        z = unmatched.pop()
        tol = CONJ_TOL * max(1.0, abs(z))
        if abs(z.imag) <= tol:
            continue
        dists = [abs(w - z.conjugate()) for w in unmatched]
        if not dists or min(dists) > tol:
            raise ValueError(f"root {z} has no complex-conjugate partner")
        unmatched.pop(int(np.argmin(dists)))
    c = np.array([1.0 + 0j])
    for z in roots:
        # multiply by (s - z), ascending order
        c = np.concatenate([[0.0], c]) - z * np.concatenate([c, [0.0]])
    scale = max(1.0, float(np.max(np.abs(c))))
    if np.max(np.abs(c.imag)) > IMAG_TOL * scale:
        raise ValueError("roots are not conjugate-closed to working precision")
    return Polynomial(c.real)


@dataclass(frozen=True)
class LinearSolution:
    x: np.ndarray
    condition: float


def solve_linear(M, rhs):
    """Solve ``M X = rhs`` by LU with partial pivoting.

    Returns a :class:`LinearSolution` holding ``X`` and a 1-norm condition
    estimate.  Raises :class:`SingularMatrixError` when a pivot falls below
    ``1e-12 * max|M|``.
    """
    M = as_square(M, "M")
    n = M.shape[0]
    rhs_arr = np.array(rhs, dtype=float)
    vector_rhs = rhs_arr.ndim == 1
    rhs_arr = as_matrix(rhs_arr.reshape(-1, 1) if vector_rhs else rhs_arr, "rhs")
    if rhs_arr.shape[0] != n:
        raise DimensionError(f"rhs has {rhs_arr.shape[0]} rows, M is {n}x{n}")
    scale = float(np.max(np.abs(M))) if M.size else 0.0
    if scale == 0.0:
        raise SingularMatrixError("matrix is identically zero", pivot=0)
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrixError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    small = np.nonzero(np.abs(np.diag(lu)) < PIVOT_TOL * scale)[0]
    if small.size:
        k = int(small[0])
        raise SingularMatrixError(f"matrix is numerically singular (pivot {k})", pivot=k)
    x = scipy.linalg.lu_solve((lu, piv), rhs_arr, check_finite=False)
    rcond, info = lapack.dgecon(lu, np.linalg.norm(M, 1), norm="1")
    condition = np.inf if rcond == 0.0 else 1.0 / rcond
    return LinearSolution(x[:, 0] if vector_rhs else x, float(condition))
