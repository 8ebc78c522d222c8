"""Tour of the quaternion layer: the multiplication table, conjugation,
the 2x2 complex embedding, and the Jordan algebra of hermitian matrices.
"""

import numpy as np

from qpquant import algebra as alg

# The four basis quaternions and a couple of table entries
e = np.eye(4)
print("e1 * e2 =", alg.qmul(e[1], e[2]), "(the e3 direction)")
print("e2 * e1 =", alg.qmul(e[2], e[1]), "(anti-commutes)")
print("(e1 + e2)(e1 - e2) =", alg.qmul(e[1] + e[2], e[1] - e[2]))

# Conjugation reverses products and computes the norm
x = np.array([0.5, -1.0, 2.0, 0.25])
print("\nx theta(x) =", alg.qmul(x, alg.qconj(x)), " |x|^2 =", alg.qnorm(x) ** 2)

# The embedding into 2x2 complex matrices is an algebra map
print("\nrho(e1) =\n", alg.rho(e[1]))
lhs = alg.rho(alg.qmul(e[1], e[2]))
rhs = alg.rho(e[1]) @ alg.rho(e[2])
print("rho(e1 e2) - rho(e1) rho(e2) =", np.abs(lhs - rhs).max())

# Hermitian quaternion matrices form a Jordan algebra; the trace form is
# associative with respect to the Jordan product
rng = np.random.default_rng(0)
X = rng.standard_normal((3, 3, 4))
X = 0.5 * (X + alg.theta_transpose(X))
Y = rng.standard_normal((3, 3, 4))
Y = 0.5 * (Y + alg.theta_transpose(Y))
Z = rng.standard_normal((3, 3, 4))
Z = 0.5 * (Z + alg.theta_transpose(Z))
print("\n<X o Y, Z> - <X, Y o Z> =",
      alg.inner_r(alg.jordan(X, Y), Z) - alg.inner_r(X, alg.jordan(Y, Z)))

# complexify is the single bridge between the quaternion and complex worlds
cx = alg.complexify(X)
print("||complexify(X)||^2 = 2 <X, X> :",
      alg.fro_norm(cx) ** 2, "=", 2 * float(np.sum(X * X)))
