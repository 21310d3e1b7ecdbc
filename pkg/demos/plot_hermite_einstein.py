"""
Hermite-Einstein metrics on a line bundle over the torus
========================================================

For a line bundle the Hermite-Einstein equation is a Poisson problem for
the conformal factor of the fiber metric. It is solvable exactly when the
source has zero mean, and the solution is unique up to a constant.
"""

import numpy as np

from stromcheck.hesolver import GridField, ObstructionError, degree_check, grid, laplacian, solve_he

##############################################################################
# A single Fourier mode
# ---------------------
#
# With source cos(2 pi x), the exact solution is 2 cos(2 pi x) / (4 pi^2).

N = 64
source = GridField.from_function(lambda x, y: np.cos(2 * np.pi * x), N)
f, residual = solve_he(source)
x, _ = grid(N)
print("residual:", residual)
print("error vs exact:", np.abs(f.values - 2 * np.cos(2 * np.pi * x) / (4 * np.pi ** 2)).max())

##############################################################################
# The degree obstruction
# ----------------------
#
# A constant source has nonzero integral, which in the geometric picture is
# a mismatch between lambda and the degree of the bundle.

bad = GridField.from_modes([[1, 2, 0.5]], N, constant=0.2)
print("mean of source:", degree_check(bad))
try:
    solve_he(bad)
except ObstructionError as exc:
    print("obstructed:", exc)

##############################################################################
# Uniqueness up to a constant
# ---------------------------
#
# Shifting f by a constant does not change the Laplacian, and the solver
# always returns the zero-mean representative.

mixed = GridField.from_modes([[1, 0, 1.0], [2, -3, 0.4, 1.1], [0, 5, -0.3]], N)
g, _ = solve_he(mixed)
shifted = GridField(g.values + 1.7)
print("Laplacian unchanged by the shift:", np.abs(laplacian(shifted).values - laplacian(g).values).max())
print("mean of returned solution:", g.mean())
