"""Eigenspace data of the Laplacian and the invariant harmonic forms.

Dimensions follow a Gamma-product formula (matching degree-l harmonics of
the four-sphere at n = 1), eigenvalues shift to perfect squares, and every
point of the complex cotangent model yields an invariant harmonic
quadratic form, certified numerically.
"""

import numpy as np

from qpquant import spaces as sp
from qpquant import spectral as spl

print("n = 1 eigenspace dimensions:", [spl.dim_eigenspace(1, l) for l in range(8)])
print("n = 2 eigenspace dimensions:", [spl.dim_eigenspace(2, l) for l in range(5)])
print("eigenvalues (n=1):", [spl.eigenvalue(1, l) for l in range(5)])
print("sqrt(lambda + (2n+1)^2) = 2l+2n+1:",
      [spl.eigenvalue_sqrt_shift(1, l) for l in range(5)])
print("sphere-degree descent residuals:",
      [spl.sphere_descent_residual(1, l) for l in range(5)])

rng = np.random.default_rng(4)
am = sp.tau_h(sp.random_eh(1, 1.3, rng))
cert = spl.harmonicity_certificate(am)
print("\nharmonicity certificate of a random model point:", cert)
print("right-action invariance residual:",
      spl.sp1_invariance_residual(am.A, 2000, rng))

# the quadratic-form matrix is traceless with vanishing squared gradient
m = spl.quad_form_matrix(am.A)
print("trace:", abs(np.trace(m)), "  ||M^2||:", np.abs(m @ m).max())

# a spot check with the finite-difference Laplacian at degree 3
p = rng.standard_normal(8)
print("FD Laplacian of the cubed form:", abs(spl.laplacian_fd(am.A, 3, p)))

# eigenspace functions are spans of powers of the pairing
f = spl.random_hl_function(1, 2, 3, rng)
pts = rng.standard_normal((4, 2, 4))
pts /= np.linalg.norm(pts.reshape(4, 8), axis=1)[:, None, None]
print("\nsample values of a degree-2 eigenfunction:", np.round(f.eval_sphere(pts), 4))
