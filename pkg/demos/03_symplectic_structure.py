"""Kaehler potentials, the canonical one-form identities, and the flow.

The radial potentials |B| and sqrt|A| generate the cotangent symplectic
forms through exact complex Hessians; the canonical one-form identities
hold at machine precision, and the Hamilton flow of the metric square root
is literally multiplication by a phase in the matrix model.
"""

import math

import numpy as np

from qpquant import geometry as geo
from qpquant import spaces as sp

rng = np.random.default_rng(2)
pt = sp.random_es0(1, 1.2, rng)
bt, am = sp.tau_s(pt), sp.tau_h(sp.alpha(pt))

# tangent bases computed as numerical kernels / pushforwards
u_s = geo.tangent_basis_et_s(bt)
u_h = geo.tangent_basis_et_h(pt)
print("tangent dims (complex):", u_s.shape[0], "sphere side;",
      u_h.shape[0], "projective side")

# one-form identities: i(del - delbar) potential = 2 theta (resp. 2^(3/4))
rs = max(geo.canonical_oneform_check("S", bt, v)
         for v in geo.real_basis_from_complex(u_s))
rh = max(geo.canonical_oneform_check("H", am, v)
         for v in geo.real_basis_from_complex(u_h))
print("one-form identity residuals:", rs, rh)

# the symplectic form is the exterior derivative of the canonical one-form
basis = geo.real_basis_from_complex(u_h)
fd = geo.dtheta_fd("H", am, basis[0], basis[1])
print("d(theta) vs Hessian form:", abs(fd - geo.omega_eval("H", am, basis[0], basis[1])))

# Hamilton equation for the generator X = -2iA of the phase flow
print("Hamilton residual:", max(geo.hamilton_check(am, y) for y in basis))

# the geodesic flow on unit covectors equals the phase scaling
ptu = sp.random_es0(1, 1.0, rng)
worst = 0.0
for t in np.arange(0.0, 3.15, 0.1):
    a_t, a_flow = geo.geodesic_flow_pair(ptu, float(t))
    worst = max(worst, np.abs(a_t - a_flow).max())
print("geodesic flow vs e^(-2it) A over [0, pi]:", worst)
a_pi, _ = geo.geodesic_flow_pair(ptu, math.pi)
print("classical period pi:", np.abs(a_pi - sp.tau_h(sp.alpha(ptu)).A).max())
