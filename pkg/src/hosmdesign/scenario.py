"""JSON scenario files.

A scenario bundles a plant, a design target, a controller, simulation
settings and an optional sweep::

    {
      "name": "pendulum_r2",
      "system": {"A": [[...], ...], "B": [...]},
      "design": {"gamma": [25, 10, 1]},          # or {"zeros": [-5, -5]}
      "controller": {"law": "quasi_continuous", "k0": 10},
      "simulation": {"tau": 0.001, "t_end": 10, "x0": [1, 1, 1, 1]},
      "sweep": {"parameter": "sampling_period", "grid": [1e-4, ...]}
    }

``design`` may also carry an explicit row ``"C"``, which is then used as-is
and ``gamma``/``zeros`` only serve as the reference for verification.
Complex zeros are written as ``[re, im]`` pairs.  Everything is validated
before any computation; errors name the offending field path.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .accuracy import PARAMETERS, default_grid
from .controllers import LAWS, ControllerSpec
from .linalg import Polynomial, poly_from_roots
from .lti import LtiSystem
from .simulation import SimConfig

BUNDLED = ("pendulum_r1", "pendulum_r2", "pendulum_r3", "chain3_r1", "chain3_r2")

SIM_FIELDS = ("tau", "t_end", "x0", "amplitude", "omega", "actuator_lag", "h", "transient_fraction")


class ScenarioError(ValueError):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    system: LtiSystem
    gamma: Polynomial
    C: np.ndarray | None
    controller: dict
    simulation: SimConfig
    sweep_parameter: str | None
    sweep_grid: tuple | None

    def controller_spec(self, order):
        c = self.controller
        return ControllerSpec(
            order=c.get("order", order),
            law=c["law"],
            k0=c.get("k0"),
            k1=c.get("k1"),
            drop_feedforward=c.get("drop_feedforward", False),
        )


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(path, f"expected a number, got {json.dumps(value)}")
    if not math.isfinite(value):
        raise ScenarioError(path, "number must be finite")
    return float(value)


def _vector(value, path, length=None):
    if not isinstance(value, list) or not value:
        raise ScenarioError(path, "expected a non-empty array of numbers")
    out = [_number(v, f"{path}[{k}]") for k, v in enumerate(value)]
    if length is not None and len(out) != length:
        raise ScenarioError(path, f"expected {length} entries, got {len(out)}")
    return out


def _matrix(value, path):
    if not isinstance(value, list) or not value:
        raise ScenarioError(path, "expected an array of row arrays")
    rows = [_vector(row, f"{path}[{k}]") for k, row in enumerate(value)]
    n = len(rows)
    for k, row in enumerate(rows):
        if len(row) != n:
            raise ScenarioError(f"{path}[{k}]", f"row has {len(row)} entries, matrix must be {n}x{n}")
    return rows


def _zero(value, path):
    if isinstance(value, list):
        if len(value) != 2:
            raise ScenarioError(path, "complex zero must be a [re, im] pair")
        return complex(_number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]"))
    return complex(_number(value, path))


def _section(doc, key, required=True):
    if key not in doc:
        if required:
            raise ScenarioError(key, "missing section")
        return None
    if not isinstance(doc[key], dict):
        raise ScenarioError(key, "expected an object")
    return doc[key]


def _check_keys(section, allowed, path):
    for key in section:
        if key not in allowed:
            raise ScenarioError(f"{path}.{key}", f"unknown field (allowed: {', '.join(allowed)})")


def parse_scenario(doc, name="scenario"):
    """Validate a decoded JSON document and build a :class:`Scenario`."""
    if not isinstance(doc, dict):
        raise ScenarioError("$", "scenario must be a JSON object")
    _check_keys(doc, ("name", "system", "design", "controller", "simulation", "sweep"), "$")
    name = doc.get("name", name)

    sys_doc = _section(doc, "system")
    _check_keys(sys_doc, ("A", "B"), "system")
    if "A" not in sys_doc or "B" not in sys_doc:
        raise ScenarioError("system", "requires both A and B")
    A = _matrix(sys_doc["A"], "system.A")
    B = _vector(sys_doc["B"], "system.B", len(A))
    system = LtiSystem(A, B)
    n = system.n

    design = _section(doc, "design")
    _check_keys(design, ("gamma", "zeros", "C"), "design")
    if ("gamma" in design) == ("zeros" in design):
        raise ScenarioError("design", "exactly one of 'gamma' or 'zeros' must be given")
    if "gamma" in design:
        coeffs = _vector(design["gamma"], "design.gamma")
        gamma = Polynomial(coeffs)
        if gamma.is_zero or not gamma.is_monic():
            raise ScenarioError("design.gamma", "polynomial must be monic (last coefficient 1)")
    else:
        if not isinstance(design["zeros"], list):
            raise ScenarioError("design.zeros", "expected an array")
        zeros = [_zero(z, f"design.zeros[{k}]") for k, z in enumerate(design["zeros"])]
        try:
            gamma = poly_from_roots(zeros)
        except ValueError as exc:
            raise ScenarioError("design.zeros", str(exc)) from None
    if gamma.degree > n - 1:
        raise ScenarioError("design", f"target polynomial degree {gamma.degree} exceeds n-1 = {n - 1}")
    C = np.array(_vector(design["C"], "design.C", n)) if "C" in design else None

    ctrl = _section(doc, "controller", required=False) or {"law": "relay" if gamma.degree == n - 1 else "quasi_continuous"}
    _check_keys(ctrl, ("law", "order", "k0", "k1", "drop_feedforward"), "controller")
    law = ctrl.get("law")
    if law not in LAWS:
        raise ScenarioError("controller.law", f"expected one of {sorted(LAWS)}, got {json.dumps(law)}")
    r = n - gamma.degree
    order = ctrl.get("order", r)
    if order not in LAWS[law]:
        raise ScenarioError("controller", f"law {law!r} supports orders {LAWS[law]}, design has relative degree {order}")
    for key in ("k0", "k1"):
        if ctrl.get(key) is not None:
            _number(ctrl[key], f"controller.{key}")
    if not isinstance(ctrl.get("drop_feedforward", False), bool):
        raise ScenarioError("controller.drop_feedforward", "expected true or false")
    try:
        ControllerSpec(order=order, law=law, k0=ctrl.get("k0"), k1=ctrl.get("k1"),
                       drop_feedforward=ctrl.get("drop_feedforward", False))
    except ValueError as exc:
        raise ScenarioError("controller", str(exc)) from None

    sim = _section(doc, "simulation", required=False) or {}
    _check_keys(sim, SIM_FIELDS, "simulation")
    kwargs = {}
    for key in SIM_FIELDS:
        if key not in sim or sim[key] is None:
            continue
        if key == "x0":
            kwargs[key] = tuple(_vector(sim[key], "simulation.x0", n))
        else:
            kwargs[key] = _number(sim[key], f"simulation.{key}")
    kwargs.setdefault("x0", tuple([1.0] * n))
    try:
        simulation = SimConfig(**kwargs)
    except ValueError as exc:
        raise ScenarioError("simulation", str(exc)) from None

    sweep = _section(doc, "sweep", required=False)
    parameter = grid = None
    if sweep is not None:
        _check_keys(sweep, ("parameter", "grid"), "sweep")
        parameter = sweep.get("parameter", "sampling_period")
        if parameter not in PARAMETERS:
            raise ScenarioError("sweep.parameter", f"expected one of {PARAMETERS}, got {json.dumps(parameter)}")
        if "grid" in sweep:
            if not isinstance(sweep["grid"], list):
                raise ScenarioError("sweep.grid", "expected an array of positive numbers")
            grid = tuple(_number(v, f"sweep.grid[{k}]") for k, v in enumerate(sweep["grid"]))
            if len(grid) < 3:
                raise ScenarioError("sweep.grid", f"needs at least 3 values, got {len(grid)}")
            for k, v in enumerate(grid):
                if v <= 0:
                    raise ScenarioError(f"sweep.grid[{k}]", "must be positive")
        else:
            grid = tuple(default_grid().tolist())

    return Scenario(
        name=name,
        system=system,
        gamma=gamma,
        C=C,
        controller=dict(ctrl, order=order),
        simulation=simulation,
        sweep_parameter=parameter,
        sweep_grid=grid,
    )


def bundled_path(name):
    return resources.files("hosmdesign") / "scenarios" / f"{name}.json"


def load_scenario(path_or_name):
    """Load a scenario file, or a bundled scenario by name (e.g. ``pendulum_r1``)."""
    if str(path_or_name) in BUNDLED and not Path(path_or_name).exists():
        text = bundled_path(str(path_or_name)).read_text()
        default_name = str(path_or_name)
    else:
        path = Path(path_or_name)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ScenarioError(str(path), f"cannot read file ({exc.strerror})") from None
        default_name = path.stem
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("$", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_scenario(doc, default_name)
