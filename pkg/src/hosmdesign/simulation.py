"""Closed-loop simulation under sample-and-hold control.

The plant ``x' = A x + B (u + w(t))`` with ``w(t) = a sin(omega t)`` is
integrated by classical fourth-order Runge-Kutta with ``m`` equal steps per
hold interval.  The control is recomputed from the exact state at
``t_i = i * tau`` and held until ``t_{i+1}``.  An optional first-order
actuator ``mu v' = -v + u`` sits between the held control and the plant.

Between sampling instants the closed loop is linear with constant ``u``, so
``m`` RK4 steps collapse into one affine map per hold interval.  The map is
built from the RK4 stage formulas themselves, including the stage times at
which ``w`` is evaluated, so it reproduces step-by-step RK4 up to rounding.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .controllers import ControllerSpec, SlidingController
from .errors import RelativeDegreeError
from .linalg import as_row
from .lti import relative_degree


@dataclass(frozen=True)
class SimConfig:
    """Sampling, horizon, perturbation and actuator settings.

    ``h`` defaults to ``tau / 10`` and must divide ``tau``.  With an actuator
    lag ``mu`` the step is refined so that ``h <= mu / 10``.
    """

    tau: float = 1e-3
    t_end: float = 10.0
    x0: tuple = (1.0, 1.0, 1.0, 1.0)
    amplitude: float = 0.5
    omega: float = 10.0
    actuator_lag: float | None = None
    h: float | None = None
    transient_fraction: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "x0", tuple(float(v) for v in np.ravel(self.x0)))
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.t_end < 100 * self.tau * (1 - 1e-12):
            raise ValueError(f"t_end = {self.t_end} must be at least 100 * tau = {100 * self.tau}")
        if not (0.0 < self.transient_fraction < 0.9):
            raise ValueError(f"transient_fraction must lie in (0, 0.9), got {self.transient_fraction}")
        if self.actuator_lag is not None and not self.actuator_lag > 0:
            raise ValueError(f"actuator_lag must be positive, got {self.actuator_lag}")
        if self.h is not None:
            if not self.h > 0:
                raise ValueError(f"h must be positive, got {self.h}")
            ratio = self.tau / self.h
            if ratio < 10 * (1 - 1e-9):
                raise ValueError(f"h = {self.h} exceeds tau / 10 = {self.tau / 10}")
            if abs(ratio - round(ratio)) > 1e-9 * ratio:
                raise ValueError(f"h = {self.h} does not divide tau = {self.tau}")

    @property
    def substeps(self):
        """Number of RK4 steps per hold interval."""
        m = 10 if self.h is None else int(round(self.tau / self.h))
        if self.actuator_lag is not None:
            m = max(m, math.ceil(self.tau / (self.actuator_lag / 10) - 1e-9))
        return m

    @property
    def step(self):
        return self.tau / self.substeps

    @property
    def n_samples(self):
        return int(round(self.t_end / self.tau))

    def replace(self, **changes):
        fields = dict(
            tau=self.tau,
            t_end=self.t_end,
            x0=self.x0,
            amplitude=self.amplitude,
            omega=self.omega,
            actuator_lag=self.actuator_lag,
            h=self.h,
            transient_fraction=self.transient_fraction,
        )
        fields.update(changes)
        return SimConfig(**fields)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Signals at the sampling instants ``t_i = i * tau``.

    ``controls[i]`` is the value held on ``[t_i, t_{i+1})``; ``sigma[i, k]``
    is the ``k``-th derivative of the sliding variable at ``t_i``.
    """

    times: np.ndarray
    states: np.ndarray
    controls: np.ndarray
    sigma: np.ndarray
    perturbations: np.ndarray
    actuator: np.ndarray | None
    tau: float
    t_end: float
    transient_fraction: float

    @property
    def r(self):
        return self.sigma.shape[1]

    def tail(self):
        """Boolean mask of samples past the transient."""
        return self.times >= self.transient_fraction * self.t_end - 1e-12 * self.t_end

    def write_csv(self, path):
        """Write ``t,x1..xn,u,w,sigma0..sigma{r-1}`` at 17 significant digits."""
        n = self.states.shape[1]
        header = ["t"] + [f"x{k + 1}" for k in range(n)] + ["u", "w"] + [f"sigma{k}" for k in range(self.r)]
        table = np.column_stack([self.times, self.states, self.controls, self.perturbations, self.sigma])
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in table:
                writer.writerow([format(v, ".17g") for v in row])


def rk4_affine_step(F, h):
    """RK4 step for ``z' = F z + q(t)`` written as ``z+ = Phi z + G0 q0 + Gh qh + G1 q1``.

    ``q0, qh, q1`` are the forcing at the start, midpoint and end of the step.
    """
    n = F.shape[0]
    eye = np.eye(n)
    zero = np.zeros((n, n))

    def step(z, q0, qh, q1):
        k1 = F @ z + q0
        k2 = F @ (z + 0.5 * h * k1) + qh
        k3 = F @ (z + 0.5 * h * k2) + qh
        k4 = F @ (z + h * k3) + q1
        return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    Phi = step(eye, zero, zero, zero)
    G0 = step(zero, eye, zero, zero)
    Gh = step(zero, zero, eye, zero)
    G1 = step(zero, zero, zero, eye)
    return Phi, G0, Gh, G1


def hold_interval_map(F, g_u, g_w, h, m, amplitude, omega):
    """Compose ``m`` RK4 steps over one hold interval.

    Returns ``(M, hu, ks, kc)`` such that, for ``t_i`` the start of the
    interval, ``z(t_i + m h) = M z + hu u + ks sin(omega t_i) + kc cos(omega t_i)``.
    """
    Phi, G0, Gh, G1 = rk4_affine_step(F, h)
    n = F.shape[0]
    M = np.eye(n)
    hu = np.zeros(n)
    ks = np.zeros(n)
    kc = np.zeros(n)
    G_sum = (G0 + Gh + G1) @ g_u
    for j in range(m):
        # w(t_i + s) = a (sin(w t_i) cos(w s) + cos(w t_i) sin(w s))
        s0, sh, s1 = j * h, (j + 0.5) * h, (j + 1) * h
        cos_part = G0 * math.cos(omega * s0) + Gh * math.cos(omega * sh) + G1 * math.cos(omega * s1)
        sin_part = G0 * math.sin(omega * s0) + Gh * math.sin(omega * sh) + G1 * math.sin(omega * s1)
        M = Phi @ M
        hu = Phi @ hu + G_sum
        ks = Phi @ ks + amplitude * (cos_part @ g_w)
        kc = Phi @ kc + amplitude * (sin_part @ g_w)
    return M, hu, ks, kc


def _augmented(sys, mu):
    n = sys.n
    if mu is None:
        return sys.A.copy(), sys.b.copy(), sys.b.copy()
    F = np.zeros((n + 1, n + 1))
    F[:n, :n] = sys.A
    F[:n, n] = sys.b
    F[n, n] = -1.0 / mu
    g_u = np.zeros(n + 1)
    g_u[n] = 1.0 / mu
    g_w = np.zeros(n + 1)
    g_w[:n] = sys.b
    return F, g_u, g_w


def simulate(sys, C, controller, config):
    """Run the sampled closed loop and return a :class:`Trajectory`.

    ``controller`` is a :class:`ControllerSpec`; its order must equal the
    relative degree of ``sigma = C x``.
    """
    C = as_row(C, sys.n)[0]
    if not isinstance(controller, ControllerSpec):
        raise TypeError("controller must be a ControllerSpec")
    r = relative_degree(sys, C)
    if r != controller.order:
        raise RelativeDegreeError(
            f"controller order {controller.order} does not match relative degree {r}"
        )
    law = SlidingController(sys, C, controller)
    return simulate_feedback(sys, law, config, law.xi_rows)


def simulate_feedback(sys, feedback, config, output_rows=None):
    """Sampled closed loop with an arbitrary state feedback ``u = feedback(x)``.

    ``output_rows`` (``r x n``) defines the recorded ``sigma`` columns.
    """
    x0 = np.asarray(config.x0, dtype=float)
    if x0.shape != (sys.n,):
        raise ValueError(f"x0 has {x0.size} entries, system has {sys.n} states")
    rows = np.zeros((0, sys.n)) if output_rows is None else np.atleast_2d(output_rows)

    n = sys.n
    mu = config.actuator_lag
    F, g_u, g_w = _augmented(sys, mu)
    m = config.substeps
    M, hu, ks, kc = hold_interval_map(F, g_u, g_w, config.tau / m, m, config.amplitude, config.omega)

    N = config.n_samples
    times = np.arange(N + 1) * config.tau
    wt = config.omega * times
    sin_t = np.sin(wt)
    cos_t = np.cos(wt)
    z = np.zeros(F.shape[0])
    z[:n] = x0
    Z = np.empty((N + 1, F.shape[0]))
    U = np.empty(N + 1)
    for i in range(N + 1):
        u = feedback(z[:n])
        Z[i] = z
        U[i] = u
        if i < N:
            z = M @ z + hu * u + ks * sin_t[i] + kc * cos_t[i]

    states = Z[:, :n]
    return Trajectory(
        times=times,
        states=states,
        controls=U,
        sigma=states @ rows.T,
        perturbations=config.amplitude * sin_t,
        actuator=None if mu is None else Z[:, n],
        tau=config.tau,
        t_end=config.t_end,
        transient_fraction=config.transient_fraction,
    )


def steady_state_error(traj, i):
    """``max |sigma^(i)|`` over the samples past the transient."""
    if not 0 <= i < traj.r:
        raise ValueError(f"derivative order {i} outside 0..{traj.r - 1}")
    mask = traj.tail()
    if not mask.any():
        raise ValueError("trajectory has no samples after the transient")
    return float(np.max(np.abs(traj.sigma[mask, i])))
