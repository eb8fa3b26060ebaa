"""Checking a design: transfer function, zeros, and the reduced sliding dynamics."""

import numpy as np

from hosmdesign import design_sliding_variable, normal_form, transfer_function, verify_design
from hosmdesign.systems import PENDULUM_GAMMA, PENDULUM_PUBLISHED_C, pendulum

sys = pendulum()
d = design_sliding_variable(sys, PENDULUM_GAMMA[2])

tf = transfer_function(sys, d.C)
print("g(s) =", tf)
print("relative degree:", tf.relative_degree)

# %% the zero dynamics of the normal form carry the same eigenvalues
nf = normal_form(sys, d.C)
print("A0 =\n", np.round(nf.A0, 6))
print("eig(A0):", np.round(np.linalg.eigvals(nf.A0), 6))

# %% rounding matters: a 4-decimal copy of this row loses its relative degree
rep = verify_design(sys, PENDULUM_PUBLISHED_C[2], PENDULUM_GAMMA[2])
print("rounded row: relative degree", rep.relative_degree, "| minimum phase:", rep.minimum_phase)
print("numerator:", rep.numerator)
for note in rep.notes:
    print("note:", note)
