"""Laplacian eigenspace data on the quaternion projective space.

Closed-form dimensions and eigenvalues, the invariant harmonic quadratic
forms attached to points of the complex cotangent model, and their
numerical certificates (trace and null-gradient residuals, right-action
invariance, sphere eigenvalue descent).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import qconj, qmul, rho
from .numerics import log_gamma, sphere_uniform
from .spaces import AMatrix, hopf_project, in_amatrix_space

__all__ = [
    "HlFunction",
    "dim_eigenspace",
    "eigenvalue",
    "eigenvalue_sqrt_shift",
    "harmonicity_certificate",
    "laplacian_fd",
    "pair_projector_amatrix",
    "quad_form_matrix",
    "random_hl_function",
    "sp1_invariance_residual",
    "sphere_descent_residual",
]


def dim_eigenspace(n, l):
    """Dimension of the l-th Laplacian eigenspace, a positive integer.

    Evaluated through log-gamma; a result that fails to round cleanly to an
    integer signals a transcription bug and raises.
    """
    if n < 1 or l < 0:
        raise ValueError("need n >= 1 and l >= 0")
    logv = (np.log(2 * n) - np.log(2 * n + 1) + np.log(l + 1) - np.log(l + 2 * n)
            + np.log(2 * l + 2 * n + 1)
            + 2.0 * (log_gamma(l + 2 * n + 1) - log_gamma(2 * n + 1) - log_gamma(l + 2)))
    val = float(np.exp(logv))
    rounded = round(val)
    if abs(val - rounded) > 1e-6 * max(1.0, rounded):
        raise ArithmeticError(f"eigenspace dimension {val} does not round to an integer")
    return int(rounded)


def eigenvalue(n, l):
    """Laplacian eigenvalue 4 l (2n + 1 + l)."""
    if n < 1 or l < 0:
        raise ValueError("need n >= 1 and l >= 0")
    return 4.0 * l * (2 * n + 1 + l)


def eigenvalue_sqrt_shift(n, l):
    """sqrt(lambda_l + (2n+1)^2), equal to 2l + 2n + 1 exactly.

    Returned as the exact right-hand side; squaring reproduces
    lambda_l + (2n+1)^2 in floating point for all desk-scale inputs.
    """
    return float(2 * l + 2 * n + 1)


def sphere_descent_residual(n, l):
    """lambda_l minus the degree-2l sphere eigenvalue k(k + dim - 1), k = 2l."""
    k = 2 * l
    return eigenvalue(n, l) - k * (k + 4 * n + 2)


def pair_projector_amatrix(p, a):
    """<(p_i theta(p_j)), A>_C for batched sphere points p.

    Uses the factorization rho(P) = Phat Qhat with Phat the stacked 2x2
    blocks rho(p_i) and Qhat their adjugates, so the pairing is the 2x2
    trace tr(Qhat A Phat)/2 -- O(m^2) per point and fully vectorized.
    """
    p = np.asarray(p, dtype=float)
    batched = p.ndim == 3
    if not batched:
        p = p[None]
    rp = rho(p.astype(complex))                      # (N, m, 2, 2)
    n_, m = rp.shape[0], rp.shape[1]
    phat = rp.transpose(0, 1, 2, 3).reshape(n_, 2 * m, 2)
    adj = np.empty_like(rp)
    adj[..., 0, 0] = rp[..., 1, 1]
    adj[..., 1, 1] = rp[..., 0, 0]
    adj[..., 0, 1] = -rp[..., 0, 1]
    adj[..., 1, 0] = -rp[..., 1, 0]
    qhat = adj.transpose(0, 2, 1, 3).reshape(n_, 2, 2 * m)
    out = 0.5 * np.einsum("nab,bc,ncd->nad", qhat, np.asarray(a, dtype=complex), phat,
                          optimize=True).trace(axis1=-2, axis2=-1)
    return out if batched else out[0]


def quad_form_matrix(a):
    """Complex symmetric M with <(p_i theta(p_j)), A>_C = p^t M p, p in R^(4m)."""
    a = np.asarray(a, dtype=complex)
    m = a.shape[0] // 2
    dim = 4 * m
    basis = np.eye(dim).reshape(dim, m, 4)
    diag = pair_projector_amatrix(basis, a)
    mat = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        mat[i, i] = diag[i]
    for i in range(dim):
        sums = pair_projector_amatrix(basis[i][None] + basis[i + 1:], a)
        for k, j in enumerate(range(i + 1, dim)):
            mat[i, j] = mat[j, i] = 0.5 * (sums[k] - diag[i] - diag[j])
    return mat


def harmonicity_certificate(a, tol=None):
    """Trace and null-gradient residuals of the invariant quadratic form.

    Both vanish iff every power of the form is annihilated by the flat
    Laplacian: Delta(q^l) = l(l-1) q^(l-2) <grad q, grad q> + l q^(l-1) tr.
    """
    pt = a if isinstance(a, AMatrix) else AMatrix(a)
    if not in_amatrix_space(pt):
        raise ValueError("matrix fails the cotangent-model membership")
    m = quad_form_matrix(pt.A)
    scale = max(1.0, float(np.abs(m).max()))
    trace_residual = abs(np.trace(m)) / scale
    grad_residual = float(np.sqrt(np.sum(np.abs(m @ m) ** 2))) / scale ** 2
    return {"trace_residual": float(trace_residual),
            "null_gradient_residual": 4.0 * grad_residual}


def laplacian_fd(a, l, p, h=1e-4):
    """Finite-difference flat Laplacian of <P(p), A>^l at the point p."""
    a = np.asarray(a, dtype=complex)
    p = np.asarray(p, dtype=float).ravel()
    m = a.shape[0] // 2

    def f(x):
        return complex(pair_projector_amatrix(x.reshape(m, 4), a) ** l)

    total = 0.0 + 0.0j
    f0 = f(p)
    for i in range(p.size):
        e = np.zeros_like(p)
        e[i] = h
        total += f(p + e) + f(p - e) - 2.0 * f0
    return total / h ** 2


def sp1_invariance_residual(a, nsamples, rng):
    """max |q_A(p r) - q_A(p)| over random p and unit quaternions r."""
    a = np.asarray(a, dtype=complex)
    m = a.shape[0] // 2
    pts = sphere_uniform(4 * m - 1, rng, size=nsamples).reshape(nsamples, m, 4)
    rots = sphere_uniform(3, rng, size=nsamples)
    moved = qmul(pts, rots[:, None, :])
    base = pair_projector_amatrix(pts, a)
    turned = pair_projector_amatrix(moved, a)
    return float(np.abs(turned - base).max())


def mixed_term_noninvariance(p, q, a, r):
    """Comparator: <(p_i theta(q_j)), A> with only p rotated is not invariant."""
    a = np.asarray(a, dtype=complex)

    def mixed(pv, qv):
        from .algebra import complexify
        mat = qmul(pv[:, None, :].astype(complex), qconj(qv)[None, :, :].astype(complex))
        return 0.5 * np.trace(complexify(mat) @ a)

    pr = qmul(p, np.broadcast_to(r, p.shape))
    return abs(mixed(pr, q) - mixed(p, q))


@dataclass(frozen=True)
class HlFunction:
    """Eigenspace function represented as sum_k c_k <P, A_k>^l."""

    n: int
    l: int
    amats: tuple
    coeffs: tuple

    def eval_sphere(self, p):
        """Evaluate at sphere points p of shape (..., n+1, 4)."""
        vals = 0.0
        for c, a in zip(self.coeffs, self.amats):
            vals = vals + c * pair_projector_amatrix(p, a) ** self.l
        return vals

    def eval_projector(self, pts):
        return self.eval_sphere(pts)


def random_hl_function(n, l, k, rng, qnorm=1.0):
    """Random element of the l-th eigenspace as a k-term generator span."""
    from .spaces import random_eh, tau_h
    amats = []
    for _ in range(k):
        amats.append(tau_h(random_eh(n, np.sqrt(2.0) * qnorm, rng)).A)
    coeffs = rng.standard_normal(k) if l > 0 else np.abs(rng.standard_normal(k))
    return HlFunction(n=n, l=l, amats=tuple(amats), coeffs=tuple(coeffs.tolist()))
