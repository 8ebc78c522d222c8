"""Quaternion, quaternion-matrix, and complexified-matrix arithmetic.

Quaternions are stored as length-4 real (or complex, for the complexified
algebra) coefficient arrays against the basis e0..e3, with the products

    e1 e2 = e3,  e2 e3 = e1,  e3 e1 = e2,  ei^2 = -e0 (i > 0).

Quaternion matrices are ndarrays of shape (m, m, 4).  The single bridge to
the complex world is :func:`complexify`, the blockwise 2x2 embedding
``rho``; on the complex side the trace form and the theta-transpose are
implemented directly so that conventions cannot drift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "CQuaternion",
    "Quaternion",
    "cbilinear",
    "complexify",
    "complexify_inv",
    "einner",
    "fro_norm",
    "fro_norm_tuple",
    "hinner",
    "inner_r",
    "is_theta_hermitian",
    "jmat",
    "jordan",
    "qconj",
    "qmat_mul",
    "qmul",
    "qnorm",
    "quat_conj_c",
    "rho",
    "rho_inv",
    "rho_inv_real",
    "sharp",
    "theta_transpose",
    "qtrace",
]

# structure tensor: e_a e_b = sum_c QTABLE[a, b, c] e_c
QTABLE = np.zeros((4, 4, 4))
QTABLE[0, 0, 0] = QTABLE[0, 1, 1] = QTABLE[0, 2, 2] = QTABLE[0, 3, 3] = 1.0
QTABLE[1, 0, 1] = QTABLE[2, 0, 2] = QTABLE[3, 0, 3] = 1.0
QTABLE[1, 1, 0] = QTABLE[2, 2, 0] = QTABLE[3, 3, 0] = -1.0
QTABLE[1, 2, 3] = 1.0
QTABLE[1, 3, 2] = -1.0
QTABLE[2, 1, 3] = -1.0
QTABLE[2, 3, 1] = 1.0
QTABLE[3, 1, 2] = 1.0
QTABLE[3, 2, 1] = -1.0
QTABLE.flags.writeable = False

# rho(e_a) as 2x2 complex matrices
RHO_BASIS = np.zeros((4, 2, 2), dtype=complex)
RHO_BASIS[0] = np.eye(2)
RHO_BASIS[1] = np.diag([1j, -1j])
RHO_BASIS[2] = np.array([[0.0, 1.0], [-1.0, 0.0]])
RHO_BASIS[3] = np.array([[0.0, 1j], [1j, 0.0]])
RHO_BASIS.flags.writeable = False


def qmul(a, b):
    """Quaternion product on trailing length-4 axes; broadcasts."""
    return np.einsum("...a,...b,abc->...c", a, b, QTABLE)


def qconj(a):
    """theta(x): negate the e1, e2, e3 coefficients."""
    a = np.asarray(a)
    out = a.copy()
    out[..., 1:] = -out[..., 1:]
    return out


def qnorm(a):
    """|x| = sqrt(x theta(x)), entrywise over the trailing axis."""
    a = np.asarray(a)
    return np.sqrt((np.abs(a) ** 2).sum(axis=-1))


def einner(h, k):
    """Euclidean pairing (h, k)_E = sum of coefficientwise products."""
    return np.sum(np.asarray(h) * np.asarray(k), axis=(-1, -2) if np.ndim(h) > 1 else -1)


def hinner(h, k):
    """Quaternionic inner product <h, k> = sum_i theta(h_i) k_i on (m, 4) arrays."""
    return qmul(qconj(h), k).sum(axis=-2)


@dataclass(frozen=True)
class Quaternion:
    """Real quaternion x0 e0 + x1 e1 + x2 e2 + x3 e3."""

    x0: float
    x1: float
    x2: float
    x3: float

    @classmethod
    def from_array(cls, a):
        a = np.asarray(a, dtype=float)
        return cls(*a.tolist())

    def to_array(self):
        return np.array([self.x0, self.x1, self.x2, self.x3])

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion.from_array(qmul(self.to_array(), other.to_array()))
        return Quaternion(self.x0 * other, self.x1 * other, self.x2 * other, self.x3 * other)

    __rmul__ = __mul__

    def __add__(self, other):
        return Quaternion.from_array(self.to_array() + other.to_array())

    def __sub__(self, other):
        return Quaternion.from_array(self.to_array() - other.to_array())

    def conj(self):
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def norm(self):
        return float(np.linalg.norm(self.to_array()))


@dataclass(frozen=True)
class CQuaternion:
    """Element of the complexified quaternions, complex coefficients c0..c3."""

    c0: complex
    c1: complex
    c2: complex
    c3: complex

    @classmethod
    def from_array(cls, a):
        a = np.asarray(a, dtype=complex)
        return cls(*a.tolist())

    def to_array(self):
        return np.array([self.c0, self.c1, self.c2, self.c3], dtype=complex)

    def __mul__(self, other):
        return CQuaternion.from_array(qmul(self.to_array(), other.to_array()))

    def conj_theta(self):
        return CQuaternion(self.c0, -self.c1, -self.c2, -self.c3)


def rho(h):
    """2x2 complex matrix of a (complexified) quaternion; trailing axis 4."""
    return np.einsum("...a,aij->...ij", np.asarray(h, dtype=complex), RHO_BASIS)


def rho_inv(mat):
    """Exact inverse of rho on M(2, C)."""
    m = np.asarray(mat, dtype=complex)
    c0 = (m[..., 0, 0] + m[..., 1, 1]) / 2.0
    c1 = (m[..., 0, 0] - m[..., 1, 1]) / 2j
    c2 = (m[..., 0, 1] - m[..., 1, 0]) / 2.0
    c3 = (m[..., 0, 1] + m[..., 1, 0]) / 2j
    return np.stack([c0, c1, c2, c3], axis=-1)


def rho_inv_real(mat, tol=1e-10):
    """Inverse of rho expecting a real quaternion; rejects other matrices."""
    c = rho_inv(mat)
    if np.max(np.abs(c.imag)) > tol * max(1.0, np.max(np.abs(c))):
        raise ValueError("matrix is not in the image of the real quaternions")
    return c.real


def qmat_mul(x, y):
    """Product of quaternion matrices, shapes (..., m, k, 4) x (..., k, m, 4)."""
    return np.einsum("...ika,...kjb,abc->...ijc", x, y, QTABLE)


def theta_transpose(x):
    """theta-transpose X -> theta(X^t); fixed points are the Jordan algebra."""
    return qconj(np.swapaxes(np.asarray(x), -3, -2))


def is_theta_hermitian(x, tol=1e-12):
    x = np.asarray(x)
    return bool(np.max(np.abs(x - theta_transpose(x))) <= tol * max(1.0, np.max(np.abs(x))))


def jordan(x, y):
    """Jordan product (XY + YX)/2."""
    return 0.5 * (qmat_mul(x, y) + qmat_mul(y, x))


def qtrace(x):
    """Quaternion trace, a length-4 coefficient array."""
    return np.trace(np.asarray(x), axis1=-3, axis2=-2)


def inner_r(x, y):
    """<X, Y>_R = tr(X o Y); reduces to the flat pairing for hermitian pairs."""
    return float(qtrace(jordan(x, y))[..., 0])


def complexify(x):
    """Blockwise rho embedding M(m, H (x) C) -> M(2m, C)."""
    x = np.asarray(x, dtype=complex)
    m = x.shape[-3]
    blocks = rho(x)
    out = blocks.transpose(tuple(range(blocks.ndim - 4)) + (-4, -2, -3, -1))
    return out.reshape(x.shape[:-3] + (2 * m, 2 * m))


def complexify_inv(a):
    """Inverse of :func:`complexify`: (2m, 2m) -> (m, m, 4) complex."""
    a = np.asarray(a, dtype=complex)
    m = a.shape[-1] // 2
    blocks = a.reshape(a.shape[:-2] + (m, 2, m, 2)).transpose(
        tuple(range(a.ndim - 2)) + (-4, -2, -3, -1))
    return rho_inv(blocks)


def jmat(m):
    """Block-diagonal matrix of m copies of J = [[0, 1], [-1, 0]]."""
    j = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
    return np.kron(np.eye(m), j)


def sharp(a):
    """theta-transpose on the complex side: A -> J A^t J^(-1)."""
    a = np.asarray(a, dtype=complex)
    jj = jmat(a.shape[-1] // 2)
    return jj @ np.swapaxes(a, -1, -2) @ (-jj)


def quat_conj_c(a):
    """Quaternionic conjugation of a complexified matrix: J conj(A) J^(-1)."""
    a = np.asarray(a, dtype=complex)
    jj = jmat(a.shape[-1] // 2)
    return jj @ np.conj(a) @ (-jj)


def cbilinear(a, b):
    """Complex bilinear trace form <A, B>_C = tr(A B^sharp)/2.

    Restricts to the Euclidean pairing on real quaternion matrices and
    satisfies <A, quat_conj_c(A)>_C = tr(A A*)/2 = ||A||^2 / 2.
    """
    return 0.5 * np.trace(np.asarray(a, dtype=complex) @ sharp(b), axis1=-2, axis2=-1)


def fro_norm(a):
    """Frobenius norm ||A|| = sqrt(tr(A A*))."""
    return float(np.sqrt(np.sum(np.abs(a) ** 2)))


def fro_norm_tuple(bs):
    """Norm of a tuple of 2x2 blocks: sqrt(sum ||B_i||^2)."""
    return float(np.sqrt(np.sum(np.abs(bs) ** 2)))
