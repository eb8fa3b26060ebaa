"""Accuracy-order estimation from sampling-period and actuator-lag sweeps.

Steady sliding errors obey ``|sigma^(i)| <= mu_i * p^(r-i)`` for a sampling
period or actuator time constant ``p``; a least-squares line through
``(log p, log error)`` estimates the order ``r - i`` (slope) and ``log mu_i``
(intercept).
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .simulation import Trajectory, simulate, steady_state_error

ZERO_CLAMP = 1e-300
PARAMETERS = ("sampling_period", "actuator_constant")


@dataclass(frozen=True)
class AccuracyFit:
    """Fitted log-log line for one derivative order."""

    derivative_order: int
    slope: float
    intercept: float
    residual: float
    points: tuple
    clamped: tuple = ()

    @property
    def mu(self):
        return float(np.exp(self.intercept))

    def predicted(self, p):
        return self.mu * p**self.slope


def least_squares_line(xs, ys):
    """Ordinary least-squares line; returns ``(slope, intercept, rms_residual)``."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("xs and ys must be 1-D sequences of equal length")
    if x.size < 2 or np.ptp(x) == 0.0:
        raise ValueError("least-squares line needs at least two distinct x values")
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    slope = float(dx @ (y - ym) / (dx @ dx))
    intercept = float(ym - slope * xm)
    resid = y - (slope * x + intercept)
    return slope, intercept, float(np.sqrt(np.mean(resid**2)))


def fit_power_law(params, errors, derivative_order=0):
    """Fit ``log(error) = intercept + slope * log(param)``.

    Exactly-zero errors are clamped to ``1e-300`` and their parameter values
    listed in ``clamped``.
    """
    p = np.asarray(params, dtype=float)
    e = np.asarray(errors, dtype=float)
    if p.size < 3:
        raise ValueError(f"need at least 3 points for a fit, got {p.size}")
    if np.any(p <= 0):
        raise ValueError("parameter values must be positive")
    order = np.argsort(p)
    p, e = p[order], e[order]
    clamped = tuple(float(v) for v in p[e <= 0.0])
    e_safe = np.where(e <= 0.0, ZERO_CLAMP, e)
    slope, intercept, residual = least_squares_line(np.log(p), np.log(e_safe))
    return AccuracyFit(
        derivative_order=derivative_order,
        slope=slope,
        intercept=intercept,
        residual=residual,
        points=tuple(zip(p.tolist(), e.tolist())),
        clamped=clamped,
    )


def default_grid(lo=1e-4, hi=1e-2, num=7):
    return np.logspace(np.log10(lo), np.log10(hi), num)


def sweep_config(base_config, parameter, value, sampling_ratio=10.0):
    """Config for one grid point.

    A sampling-period sweep sets ``tau``.  An actuator sweep sets the lag
    ``mu`` and samples at ``min(base tau, mu / sampling_ratio)`` so that the
    hold error stays well below the lag error.
    """
    if parameter == "sampling_period":
        return base_config.replace(tau=value)
    if parameter == "actuator_constant":
        return base_config.replace(actuator_lag=value, tau=min(base_config.tau, value / sampling_ratio))
    raise ValueError(f"unknown sweep parameter {parameter!r}; expected one of {PARAMETERS}")


def _at_point(parameter, value, exc):
    """Re-raise ``exc`` with the grid point prepended to its message."""
    msg = f"{parameter} = {value:g}: {exc}"
    try:
        wrapped = type(exc)(msg)
    except TypeError:
        wrapped = RuntimeError(msg)
    raise wrapped from exc


def _run_point(job):
    sys, C, controller, base_config, parameter, value, sampling_ratio, simulator = job
    try:
        config = sweep_config(base_config, parameter, value, sampling_ratio)
        traj = simulator(sys, C, controller, config)
    except Exception as exc:
        _at_point(parameter, value, exc)
    return [steady_state_error(traj, i) for i in range(controller.order)]


def sweep_errors(
    sys, C, controller, base_config, parameter, grid, sampling_ratio=10.0, workers=None, simulator=simulate
):
    """Steady errors for every grid value, shape ``(len(grid), r)``, grid sorted ascending.

    ``simulator`` replaces :func:`simulate` (same signature); it must be a
    module-level function when ``workers > 1``.
    """
    grid = np.sort(np.asarray(grid, dtype=float))
    if grid.size < 3:
        raise ValueError(f"sweep grid needs at least 3 values, got {grid.size}")
    if np.any(grid <= 0):
        raise ValueError("sweep grid values must be positive")
    if parameter not in PARAMETERS:
        raise ValueError(f"unknown sweep parameter {parameter!r}; expected one of {PARAMETERS}")
    jobs = [(sys, C, controller, base_config, parameter, v, sampling_ratio, simulator) for v in grid]
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_run_point, jobs))
    else:
        rows = [_run_point(job) for job in jobs]
    return grid, np.array(rows)


def sweep_and_fit(
    sys, C, controller, base_config, parameter, grid=None, sampling_ratio=10.0, workers=None, simulator=simulate
):
    """Simulate over ``grid`` and fit one log-log line per derivative order.

    Returns a list of :class:`AccuracyFit` sorted by derivative order.
    """
    grid = default_grid() if grid is None else grid
    values, errors = sweep_errors(
        sys, C, controller, base_config, parameter, grid, sampling_ratio, workers, simulator
    )
    return [fit_power_law(values, errors[:, i], i) for i in range(errors.shape[1])]


def write_fit_csv(path, fits):
    """Per-point errors followed by an ``i,slope,intercept,residual`` summary block."""
    r = len(fits)
    params = [p for p, _ in fits[0].points]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["parameter"] + [f"error_i{i}" for i in range(r)])
        for k, p in enumerate(params):
            writer.writerow([format(p, ".17g")] + [format(f.points[k][1], ".17g") for f in fits])
        writer.writerow([])
        writer.writerow(["i", "slope", "intercept", "residual"])
        for f in fits:
            writer.writerow([f.derivative_order] + [format(v, ".17g") for v in (f.slope, f.intercept, f.residual)])


def power_law_simulator(sys, C, controller, config, exponent=2.0, scale=3.0, parameter="sampling_period"):
    """Stand-in for :func:`simulate` whose steady errors are exactly ``scale * p^(exponent - i)``.

    ``p`` is the swept parameter read back from ``config``.  Used to check
    the sweep-and-fit pipeline against a known answer.
    """
    p = config.tau if parameter == "sampling_period" else config.actuator_lag
    r = controller.order
    times = np.array([0.0, config.t_end])
    levels = np.array([scale * p ** (exponent - i) for i in range(r)])
    n = sys.n
    return Trajectory(
        times=times,
        states=np.zeros((2, n)),
        controls=np.zeros(2),
        sigma=np.vstack([levels, levels]),
        perturbations=np.zeros(2),
        actuator=None,
        tau=config.tau,
        t_end=config.t_end,
        transient_fraction=config.transient_fraction,
    )
