"""Designing sliding variables for a linearized cart-pole.

Each design picks the zeros of sigma = C x.  Placing n - r zeros leaves
relative degree r, so the same plant gives a first-, second- or third-order
sliding variable depending on how many zeros we ask for.
"""

import numpy as np

from hosmdesign import design_sliding_variable, poly_from_roots
from hosmdesign.systems import pendulum

sys = pendulum()
print("open-loop poles:", np.round(np.linalg.eigvals(sys.A), 4))  # two at 0, one unstable

# %% zeros at -5, one design per relative degree
for r in (1, 2, 3):
    gamma = poly_from_roots([-5.0] * (4 - r))
    d = design_sliding_variable(sys, gamma)
    print(f"r={d.realized_r}  gamma = {gamma}")
    print("    C =", np.array2string(d.C, precision=6))
    print("    sliding-mode eigenvalues:", np.round(d.zeros, 6))

# %% complex zeros work too, as long as they come in conjugate pairs
d = design_sliding_variable(sys, poly_from_roots([-2 + 1j, -2 - 1j, -4]))
print("oscillatory sliding motion, C =", np.array2string(d.C, precision=6))

# the design row is normalized so that C A^(r-1) B = 1
print("C B =", float(d.C @ sys.b))
