"""Sliding-mode feedback laws of order 1, 2 and 3.

Every law has the shape

    u = -(C A^r x + f(xi)) / (C A^(r-1) B),     xi = (sigma, sigma', ..., sigma^(r-1))

with ``sigma^(i) = C A^i x`` taken exactly from the state.  ``f`` is a relay
for ``r = 1``, the twisting law or the quasi-continuous law for ``r = 2``,
and the quasi-continuous law for ``r = 3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RelativeDegreeError
from .linalg import as_row
from .lti import RELDEG_RTOL, markov_parameters

LAWS = {"relay": (1,), "twisting": (2,), "quasi_continuous": (2, 3)}


def sign(v):
    """Sign with ``sign(0) == 0``."""
    if v > 0.0:
        return 1.0
    if v < 0.0:
        return -1.0
    return 0.0


@dataclass(frozen=True)
class ControllerSpec:
    """Which law closes the loop and with what gains.

    ``k1`` is used only by the twisting law, which needs ``k0 > k1 > 0``.
    ``drop_feedforward`` omits the ``C A^r x`` term, leaving it to the gain.
    """

    order: int
    law: str
    k0: float | None = None
    k1: float | None = None
    drop_feedforward: bool = False

    def __post_init__(self):
        if self.law not in LAWS:
            raise ValueError(f"unknown law {self.law!r}; expected one of {sorted(LAWS)}")
        if self.order not in LAWS[self.law]:
            raise ValueError(f"law {self.law!r} does not support order {self.order}")
        twisting = self.law == "twisting"
        if self.k0 is None:
            object.__setattr__(self, "k0", 5.0 if twisting else 10.0)
        if twisting and self.k1 is None:
            object.__setattr__(self, "k1", 2.0)
        if not self.k0 > 0:
            raise ValueError(f"k0 must be positive, got {self.k0}")
        if twisting:
            if not (self.k0 > self.k1 > 0):
                raise ValueError(f"twisting gains need k0 > k1 > 0, got k0={self.k0}, k1={self.k1}")

    @classmethod
    def relay(cls, k0=10.0, drop_feedforward=False):
        return cls(1, "relay", k0=k0, drop_feedforward=drop_feedforward)

    @classmethod
    def twisting(cls, k0=5.0, k1=2.0, drop_feedforward=False):
        return cls(2, "twisting", k0=k0, k1=k1, drop_feedforward=drop_feedforward)

    @classmethod
    def quasi_continuous(cls, order, k0=10.0, drop_feedforward=False):
        return cls(order, "quasi_continuous", k0=k0, drop_feedforward=drop_feedforward)


def sliding_coordinates(sys, C, x, r):
    """``[C x, C A x, ..., C A^(r-1) x]``."""
    row = as_row(C, sys.n)[0]
    x = np.asarray(x, dtype=float)
    out = []
    for _ in range(r):
        out.append(float(row @ x))
        row = row @ sys.A
    return out


# Nonlinear terms f(xi).  Each is bounded by k0 in magnitude.

def relay_term(xi, k0):
    return k0 * sign(xi[0])


def twisting_term(xi, k0, k1):
    return k0 * sign(xi[0]) + k1 * sign(xi[1])


def qc2_term(xi, k0):
    s, ds = xi[0], xi[1]
    root = math.sqrt(abs(s))
    den = abs(ds) + root
    if den == 0.0:
        return 0.0
    return k0 * (ds + root * sign(s)) / den


def qc3_term(xi, k0):
    s, ds, dds = xi[0], xi[1], xi[2]
    s23 = abs(s) ** (2.0 / 3.0)
    inner = abs(ds) + s23
    if inner == 0.0:
        # (ds + |s|^(2/3) sign s) vanishes with inner, the product with inner^(-1/2) -> 0
        num = dds
        den = abs(dds)
    else:
        root = math.sqrt(inner)
        num = dds + 2.0 * (ds + s23 * sign(s)) / root
        den = abs(dds) + 2.0 * root
    if den == 0.0:
        return 0.0
    return k0 * num / den


class SlidingController:
    """A :class:`ControllerSpec` bound to a plant and sliding row.

    Precomputes the rows ``C A^i`` and the high-frequency gain
    ``C A^(r-1) B`` so that evaluating ``u`` costs a few dot products.
    """

    def __init__(self, sys, C, spec, rtol=RELDEG_RTOL):
        C = as_row(C, sys.n)[0]
        r = spec.order
        vals, scales = markov_parameters(sys, C, count=r)
        for i in range(r - 1):
            if abs(vals[i]) > rtol * scales[i]:
                raise RelativeDegreeError(
                    f"{spec.law} law of order {r} needs relative degree {r}, "
                    f"but C A^{i} B = {vals[i]:.3g} is nonzero"
                )
        if abs(vals[r - 1]) <= rtol * scales[r - 1]:
            raise RelativeDegreeError(
                f"high-frequency gain C A^{r - 1} B = {vals[r - 1]:.3g} is numerically zero"
            )
        rows = [C]
        for _ in range(r):
            rows.append(rows[-1] @ sys.A)
        self.sys = sys
        self.spec = spec
        self.r = r
        self.C = C
        self.xi_rows = np.array(rows[:r])
        self.ff_row = rows[r]
        self.gain = float(vals[r - 1])

    def sliding_coordinates(self, x):
        return self.xi_rows @ x

    def nonlinear_term(self, xi):
        spec = self.spec
        if spec.law == "relay":
            return relay_term(xi, spec.k0)
        if spec.law == "twisting":
            return twisting_term(xi, spec.k0, spec.k1)
        if self.r == 2:
            return qc2_term(xi, spec.k0)
        return qc3_term(xi, spec.k0)

    def __call__(self, x):
        xi = (self.xi_rows @ x).tolist()
        ff = 0.0 if self.spec.drop_feedforward else float(self.ff_row @ x)
        return -(ff + self.nonlinear_term(xi)) / self.gain


def _evaluate(sys, C, x, spec):
    return SlidingController(sys, C, spec)(np.asarray(x, dtype=float))


def relay_control(sys, C, x, k0=10.0, drop_feedforward=False):
    """``u = -(C A x + k0 sign(sigma)) / (C B)``."""
    return _evaluate(sys, C, x, ControllerSpec.relay(k0, drop_feedforward))


def twisting_control(sys, C, x, k0=5.0, k1=2.0, drop_feedforward=False):
    """``u = -(C A^2 x + k0 sign(sigma) + k1 sign(sigma')) / (C A B)``."""
    return _evaluate(sys, C, x, ControllerSpec.twisting(k0, k1, drop_feedforward))


def quasi_continuous_2(sys, C, x, k0=10.0, drop_feedforward=False):
    return _evaluate(sys, C, x, ControllerSpec.quasi_continuous(2, k0, drop_feedforward))


def quasi_continuous_3(sys, C, x, k0=10.0, drop_feedforward=False):
    return _evaluate(sys, C, x, ControllerSpec.quasi_continuous(3, k0, drop_feedforward))
