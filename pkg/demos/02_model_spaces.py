"""The four model spaces and the maps between them.

Covectors on the sphere map to cotangent data of the projective space
(alpha), and both have complex matrix models (tau_s, tau_h) intertwined by
the quadratic map beta.  On horizontal covectors the square commutes; off
the horizontal locus it provably does not.
"""

import numpy as np

from qpquant import spaces as sp
from qpquant.algebra import fro_norm

rng = np.random.default_rng(1)

# A horizontal covector: base point on the unit sphere of H^2, momentum
# orthogonal to the whole quaternionic fiber direction
pt = sp.random_es0(1, 1.0, rng)
print("base norm:", np.sum(pt.p ** 2), " momentum norm:", np.sum(pt.q ** 2))

cp = sp.alpha(pt)        # (P, Q): projector plus tangent
bt = sp.tau_s(pt)        # tuple of 2x2 blocks with sum(det) = 0
am = sp.tau_h(cp)        # nilpotent rank-2 matrix model

print("tr P =", cp.P[0, 0, 0] + cp.P[1, 1, 0])
print("sum det B_i =", np.sum(np.linalg.det(bt.B)))
print("||A^2|| =", np.abs(am.A @ am.A).max(), " rank A =",
      np.linalg.matrix_rank(am.A, tol=1e-8))

# The norm chain ties all four models together
nq2 = float(np.sum(pt.q ** 2))
print("\nnorm chain: ||B||^2 = 4|q|^2 :", bt.norm ** 2, "=", 4 * nq2)
print("            ||Q||^2 = 2|q|^2 :", cp.qnorm_j ** 2, "=", 2 * nq2)
print("            ||A||^2 = 2||Q||^4:", am.norm ** 2, "=", 2 * cp.qnorm_j ** 4)

# The commuting square, and its failure off the horizontal locus
lhs = sp.beta(bt).A
rhs = am.A
print("\n||beta(tau_s) - tau_h(alpha)|| / ||.|| =",
      np.abs(lhs - rhs).max() / fro_norm(rhs))

generic = sp.random_es_generic(1, rng)
dev = np.abs(sp.beta(sp.tau_s(generic)).A - sp.tau_h(sp.alpha(generic)).A).max()
print("same deviation for a non-horizontal covector:",
      dev / fro_norm(sp.tau_h(sp.alpha(generic)).A))

# Round trips and serialization
rec = sp.tau_s_inv(bt)
print("\ntau_s round trip error:", np.abs(rec.p - pt.p).max(),
      np.abs(rec.q - pt.q).max())
print("JSON record:", sp.point_to_json(pt)[:80], "...")
