"""Estimating the sliding accuracy order from sweeps.

With sampling period tau the steady errors scale like |sigma^(i)| ~ tau^(r-i).
A line through (log tau, log error) recovers the exponent.  The same happens
when the sampling is fast but the actuator has a first-order lag mu.
"""

from hosmdesign import ControllerSpec, SimConfig, default_grid, design_sliding_variable, sweep_and_fit
from hosmdesign.systems import PENDULUM_GAMMA, pendulum

sys = pendulum()
C = design_sliding_variable(sys, PENDULUM_GAMMA[3]).C
spec = ControllerSpec.quasi_continuous(3)
grid = default_grid()  # 7 points, 1e-4 .. 1e-2
print("grid:", [f"{v:.2e}" for v in grid])

for parameter in ("sampling_period", "actuator_constant"):
    fits = sweep_and_fit(sys, C, spec, SimConfig(), parameter, grid)
    print(parameter)
    for f in fits:
        print(f"  sigma^({f.derivative_order}): slope {f.slope:.3f} (expected {3 - f.derivative_order}), "
              f"mu {f.mu:.3g}, residual {f.residual:.3f}")
