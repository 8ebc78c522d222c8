"""Differential-geometric layer.

Tangent bases of the model manifolds are computed as numerical kernels of
constraint differentials (or pushforwards along the model maps); forms are
evaluated on those bases, never through coordinate charts.  The module
provides

* exact complex Hessians of the radial potentials and the symplectic forms
  they generate, with finite-difference cross checks,
* the canonical one-forms through the inverse model maps and the one-form
  potential identities,
* the holomorphic volume forms (via interior products and determinants),
  and the numerical recovery of the five volume-ratio constants,
* the geodesic flow / matrix-scaling equivalence and the fibration checks.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .algebra import (
    complexify,
    complexify_inv,
    fro_norm,
    jmat,
    jordan,
    qconj,
    qmat_mul,
    qmul,
    rho,
    rho_inv,
)
from .spaces import (
    AMatrix,
    BTuple,
    SphereCovector,
    alpha,
    hopf_project,
    random_es0,
    tau_h,
    tau_h_inv,
    tau_s,
    tau_s_inv,
)
from .numerics import vol_sphere

__all__ = [
    "beta_preimage",
    "canonical_oneform_check",
    "complex_hessian_radial",
    "d_beta_blocks",
    "det_theta_prime",
    "dtheta_fd",
    "fd_complex_hessian",
    "geodesic_flow_pair",
    "hamilton_check",
    "hopf_pushforward_check",
    "omega_closed_fd",
    "omega_eval",
    "oneform_potential",
    "pfaffian",
    "recover_a_h",
    "recover_a_s",
    "recover_b_s",
    "recover_constants",
    "sigma_eval",
    "sigma_h_eval",
    "sigma_s_eval",
    "tangent_basis_es0",
    "tangent_basis_et_h",
    "tangent_basis_et_s",
    "theta_h",
    "theta_s",
    "y_fields",
    "z_field",
]


# ------------------------------------------------------------ tangent bases

def tangent_basis_es0(pt):
    """Orthonormal real basis of the tangent space of the horizontal locus.

    Vectors are (pdot, qdot) pairs flattened to length 8(n+1); there are
    8n + 3 of them.
    """
    p, q = pt.p, pt.q
    m = p.shape[0]
    dim = 8 * m
    rows = [np.concatenate([p.ravel(), np.zeros(4 * m)])]

    def hmix(pdot, qdot):
        from .algebra import hinner
        return hinner(q, pdot) + hinner(qdot, p)

    eye = np.eye(dim)
    grad = np.empty((4, dim))
    for j in range(dim):
        pd = eye[j, :4 * m].reshape(m, 4)
        qd = eye[j, 4 * m:].reshape(m, 4)
        grad[:, j] = hmix(pd, qd)
    rows.extend(list(grad))
    cmat = np.array(rows)
    _, s, vt = np.linalg.svd(cmat)
    rank = int(np.sum(s > 1e-12 * s[0]))
    basis = vt[rank:]
    if basis.shape[0] != dim - 5:
        raise ArithmeticError("unexpected corank of the horizontal-locus constraints")
    return basis  # (8n+3, 8m)


def split_pq(vec, m):
    vec = np.asarray(vec)
    return vec[..., :4 * m].reshape(vec.shape[:-1] + (m, 4)), \
        vec[..., 4 * m:].reshape(vec.shape[:-1] + (m, 4))


def d_alpha(p, q, pdot, qdot):
    tp, tq = qconj(p), qconj(q)
    tpd, tqd = qconj(pdot), qconj(qdot)
    pdot_ = pdot[:, None, :]
    p_ = p[:, None, :]
    qdot_ = qdot[:, None, :]
    q_ = q[:, None, :]
    P_dot = qmul(pdot_, tp[None]) + qmul(p_, tpd[None])
    Q_dot = (qmul(pdot_, tq[None]) + qmul(p_, tqd[None])
             + qmul(qdot_, tp[None]) + qmul(q_, tpd[None]))
    return P_dot, Q_dot


def d_tau_h(P, Q, P_dot, Q_dot):
    nq2 = float(np.sum(Q * Q))
    nq = math.sqrt(nq2)
    dq = float(np.sum(Q * Q_dot))
    rp, rq = complexify(P), complexify(Q)
    rpd, rqd = complexify(P_dot), complexify(Q_dot)
    return (2.0 * dq * rp + nq2 * rpd - (rqd @ rq + rq @ rqd)
            + (1j / math.sqrt(2.0)) * ((dq / nq) * rq + nq * rqd))


def d_tau_s_coords(p, q, pdot, qdot):
    nq = math.sqrt(float(np.sum(q * q)))
    dnq = float(np.sum(q * qdot)) / nq
    h_dot = (dnq * p + nq * pdot).astype(complex) + 1j * qdot
    return blocks_to_coords(rho(h_dot))


def blocks_to_coords(blocks):
    """(m, 2, 2) blocks -> ambient coordinates (z..., w...)."""
    m = blocks.shape[0]
    z = blocks[:, :, 0].reshape(2 * m)
    w = blocks[:, :, 1].reshape(2 * m)
    return np.concatenate([z, w])


def coords_to_blocks(u):
    u = np.asarray(u, dtype=complex)
    m2 = u.shape[0] // 2
    return np.stack([u[:m2].reshape(m2 // 2, 2), u[m2:].reshape(m2 // 2, 2)], axis=-1)


def d_tau_s_inv(bt, w_coords):
    """(pdot, qdot) from a tangent at a B-model point, both as (m, 4) arrays."""
    c = rho_inv(bt.B if isinstance(bt, BTuple) else bt)
    a, b = c.real, c.imag
    nq = float(np.linalg.norm(b))
    cd = rho_inv(coords_to_blocks(w_coords))
    ad, bd = cd.real, cd.imag
    qdot = bd
    dnq = float(np.sum(b * bd)) / nq
    p = a / nq
    pdot = (ad - dnq * p) / nq
    return pdot, qdot


def d_tau_h_inv(am, w_mat):
    """(P_dot, Q_dot) from a matrix tangent at an A-model point."""
    a = am.A if isinstance(am, AMatrix) else np.asarray(am, dtype=complex)
    w = np.asarray(w_mat, dtype=complex)
    m = a.shape[0] // 2
    jj = jmat(m)
    cp = tau_h_inv(AMatrix(a))
    P, Q = cp.P, cp.Q
    nq = math.sqrt(float(np.sum(Q * Q)))
    wq = jj @ np.conj(w) @ (-jj)
    x_re = complexify_inv(0.5 * (w + wq)).real
    x_im = complexify_inv((w - wq) / 2j).real
    dq = float(np.sum(Q * x_im)) / (math.sqrt(2.0) * nq)
    Q_dot = (math.sqrt(2.0) * x_im - (dq / nq) * Q) / nq
    P_dot = (x_re - 2.0 * dq * P + 2.0 * jordan(Q_dot, Q)) / nq ** 2
    return P_dot, Q_dot


def tangent_basis_et_s(bt):
    """Complex orthonormal tangent basis of the B-model at bt (4n+3 vectors)."""
    u = bt.coords
    m2 = u.shape[0] // 2
    z, w = u[:m2], u[m2:]
    grad = np.empty_like(u)
    grad[0:m2:2] = w[1::2]
    grad[1:m2:2] = -w[0::2]
    grad[m2::2] = -z[1::2]
    grad[m2 + 1::2] = z[0::2]
    _, s, vt = np.linalg.svd(grad[None, :])
    basis = np.conj(vt[1:])
    return basis  # rows orthonormal, dD(row) = 0


def tangent_basis_et_h(seed_pt):
    """Complex orthonormal tangent basis (4n matrices) of the A-model.

    ``seed_pt`` is a horizontal covector point whose image provides the base
    point; the basis spans the pushforward of the horizontal-locus tangents.
    """
    p, q = seed_pt.p, seed_pt.q
    m = p.shape[0]
    cp = alpha(seed_pt)
    es_basis = tangent_basis_es0(seed_pt)
    pushed = []
    for vec in es_basis:
        pdot, qdot = split_pq(vec, m)
        P_dot, Q_dot = d_alpha(p, q, pdot, qdot)
        pushed.append(d_tau_h(cp.P, cp.Q, P_dot, Q_dot).ravel())
    mat = np.array(pushed)
    _, s, vt = np.linalg.svd(mat)
    rank = int(np.sum(s > 1e-10 * s[0]))
    if rank != 4 * (m - 1):
        raise ArithmeticError(f"tangent rank {rank}, expected {4 * (m - 1)}")
    # rows of vt span the row space of `mat`; they are an orthonormal basis
    return vt[:rank].reshape(rank, 2 * m, 2 * m)


def real_basis_from_complex(ubasis):
    """Real basis (u_1, i u_1, u_2, i u_2, ...) of the underlying real space."""
    out = []
    for u in ubasis:
        out.append(u)
        out.append(1j * u)
    return np.array(out)


# ------------------------------------------------- potentials and 2-forms

def complex_hessian_radial(u, mode):
    """Full matrix of d^2 f / d conj(z_k) d z_j for radial potentials.

    mode 'norm':       f = (sum |z|^2)^(1/2)
    mode 'sqrt_norm':  f = (sum |z|^2)^(1/4)
    """
    z = np.asarray(u, dtype=complex).ravel()
    r = np.linalg.norm(z)
    if r == 0:
        raise ZeroDivisionError("radial potential is singular at the origin")
    outer = np.conj(z)[:, None] * z[None, :]
    if mode == "norm":
        return np.eye(z.size) / (2 * r) - outer / (4 * r ** 3)
    if mode == "sqrt_norm":
        return np.eye(z.size) / (4 * r ** 1.5) - 3.0 * outer / (16 * r ** 3.5)
    raise ValueError(f"unknown mode {mode!r}")


def fd_complex_hessian(u, mode, h=1e-5):
    """Finite-difference oracle for :func:`complex_hessian_radial`."""
    z = np.asarray(u, dtype=complex).ravel()

    def f(x):
        r = np.linalg.norm(x)
        return r if mode == "norm" else math.sqrt(r)

    def dz_j(x, j):
        e = np.zeros_like(z)
        e[j] = 1.0
        re = (f(x + h * e) - f(x - h * e)) / (2 * h)
        im = (f(x + 1j * h * e) - f(x - 1j * h * e)) / (2 * h)
        return 0.5 * (re - 1j * im)

    n = z.size
    out = np.empty((n, n), dtype=complex)
    for k in range(n):
        e = np.zeros_like(z)
        e[k] = 1.0
        for j in range(n):
            dre = (dz_j(z + h * e, j) - dz_j(z - h * e, j)) / (2 * h)
            dim_ = (dz_j(z + 1j * h * e, j) - dz_j(z - 1j * h * e, j)) / (2 * h)
            out[j, k] = 0.5 * (dre + 1j * dim_)
    return out


def _hessian_pair(z, v, w, mode):
    """s = sum_jk H_jk conj(v_k) w_j for the radial Hessians, in O(N)."""
    r = np.linalg.norm(z)
    wv = np.sum(w * np.conj(v))
    wz = np.sum(w * np.conj(z))
    zv = np.sum(z * np.conj(v))
    if mode == "norm":
        return wv / (2 * r) - wz * zv / (4 * r ** 3)
    return wv / (4 * r ** 1.5) - 3.0 * wz * zv / (16 * r ** 3.5)


_MODEL = {"S": ("norm", 1.0), "H": ("sqrt_norm", 2.0 ** 0.25)}


def _model_coords(model, point):
    if model == "S":
        return point.coords if isinstance(point, BTuple) else np.asarray(point, dtype=complex).ravel()
    a = point.A if isinstance(point, AMatrix) else np.asarray(point, dtype=complex)
    return a.ravel()


def omega_eval(model, point, v, w):
    """Symplectic form on two (real) ambient tangents at a model point.

    Tangents are given in ambient coordinates (tuple coordinates for the
    sphere model, matrix entries for the cotangent model).
    """
    mode, pref = _MODEL[model]
    z = _model_coords(model, point)
    v = np.asarray(v, dtype=complex).ravel()
    w = np.asarray(w, dtype=complex).ravel()
    s = _hessian_pair(z, v, w, mode)
    return -2.0 * pref * float(np.imag(s))


def oneform_potential(model, point, w):
    """i (del - delbar) of the model potential, evaluated on a real tangent."""
    mode, _ = _MODEL[model]
    z = _model_coords(model, point)
    w = np.asarray(w, dtype=complex).ravel()
    r = np.linalg.norm(z)
    wz = np.sum(w * np.conj(z))
    d = wz / (2 * r) if mode == "norm" else wz / (4 * r ** 1.5)
    return -2.0 * float(np.imag(d))


def theta_s(bt, w_coords):
    """Canonical one-form of the sphere cotangent bundle, via the inverse map."""
    if not isinstance(bt, BTuple):
        bt = BTuple(coords_to_blocks(np.asarray(bt, dtype=complex).ravel()))
    q = rho_inv(bt.B).imag
    pdot, _ = d_tau_s_inv(bt, w_coords)
    return float(np.sum(q * pdot))


def theta_h(am, w_mat):
    """Canonical one-form of the projective-space cotangent bundle."""
    cp = tau_h_inv(am if isinstance(am, AMatrix) else AMatrix(am))
    P_dot, _ = d_tau_h_inv(am, w_mat)
    return 0.5 * float(np.sum(cp.Q * P_dot))


def canonical_oneform_check(model, point, w):
    """Absolute residual of the one-form potential identity."""
    if model == "S":
        lhs = oneform_potential("S", point, w)
        rhs = 2.0 * theta_s(point, np.asarray(w).ravel())
    else:
        lhs = oneform_potential("H", point, w)
        rhs = 2.0 ** 0.75 * theta_h(point, np.asarray(w, dtype=complex))
    return abs(lhs - rhs)


def hamilton_check(am, y_mat):
    """Residual of omega(Y, X) = Y(h) for the flow generator X = -2iA."""
    a = am.A if isinstance(am, AMatrix) else np.asarray(am, dtype=complex)
    x_flow = -2j * a
    lhs = omega_eval("H", AMatrix(a), y_mat, x_flow)
    z = a.ravel()
    r = np.linalg.norm(z)
    w = np.asarray(y_mat, dtype=complex).ravel()
    dh = 2.0 ** -0.75 * 2.0 * np.real(np.sum(w * np.conj(z)) / (4 * r ** 1.5))
    return abs(lhs - dh)


def _theta_raw(model, point_coords, w):
    """Membership-free extension of the canonical one-form (for FD use)."""
    if model == "S":
        bt = BTuple(coords_to_blocks(point_coords))
        c = rho_inv(bt.B)
        b = c.imag
        nq = float(np.linalg.norm(b))
        cd = rho_inv(coords_to_blocks(w))
        ad, bd = cd.real, cd.imag
        dnq = float(np.sum(b * bd)) / nq
        p = c.real / nq
        pdot = (ad - dnq * p) / nq
        return float(np.sum(b * pdot))
    a = np.asarray(point_coords, dtype=complex)
    m = a.shape[0] // 2
    jj = jmat(m)
    aq = jj @ np.conj(a) @ (-jj)
    x_im = complexify_inv((a - aq) / 2j).real
    nrm = fro_norm(a)
    nq = math.sqrt(nrm / math.sqrt(2.0))
    Q = math.sqrt(2.0) * x_im / nq
    w = np.asarray(w, dtype=complex)
    wq = jj @ np.conj(w) @ (-jj)
    wx_re = complexify_inv(0.5 * (w + wq)).real
    wx_im = complexify_inv((w - wq) / 2j).real
    dq = float(np.sum(Q * wx_im)) / (math.sqrt(2.0) * nq)
    Q_dot = (math.sqrt(2.0) * wx_im - (dq / nq) * Q) / nq
    x_re = complexify_inv(0.5 * (a + aq)).real
    P = (x_re + qmat_mul(Q, Q)) / nq ** 2
    P_dot = (wx_re - 2.0 * dq * P + 2.0 * jordan(Q_dot, Q)) / nq ** 2
    return 0.5 * float(np.sum(Q * P_dot))


def dtheta_fd(model, point, v, w, h=1e-5):
    """Finite-difference exterior derivative of the canonical one-form."""
    if model == "S":
        x0 = point.coords if isinstance(point, BTuple) else np.asarray(point)
    else:
        x0 = point.A if isinstance(point, AMatrix) else np.asarray(point)
    v = np.asarray(v, dtype=complex).reshape(x0.shape)
    w = np.asarray(w, dtype=complex).reshape(x0.shape)
    tv = (_theta_raw(model, x0 + h * v, w) - _theta_raw(model, x0 - h * v, w)) / (2 * h)
    tw = (_theta_raw(model, x0 + h * w, v) - _theta_raw(model, x0 - h * w, v)) / (2 * h)
    return tv - tw


def omega_closed_fd(model, point, v, w, x, h=1e-5):
    """Finite-difference exterior derivative of omega on a tangent triple."""
    if model == "S":
        x0 = point.coords if isinstance(point, BTuple) else np.asarray(point)
        mk = lambda c: BTuple(coords_to_blocks(c))
    else:
        x0 = point.A if isinstance(point, AMatrix) else np.asarray(point)
        mk = lambda c: AMatrix(c)
    vecs = [np.asarray(t, dtype=complex).reshape(x0.shape) for t in (v, w, x)]
    total = 0.0
    for sign, (a, b, c) in zip((1.0, -1.0, 1.0), ((0, 1, 2), (1, 0, 2), (2, 0, 1))):
        d = (omega_eval(model, mk(x0 + h * vecs[a]), vecs[b], vecs[c])
             - omega_eval(model, mk(x0 - h * vecs[a]), vecs[b], vecs[c])) / (2 * h)
        total += sign * d
    return abs(total)


# ----------------------------------------------- holomorphic volume forms

def z_field(bt):
    """The dual gradient field trivializing dD, in ambient coordinates."""
    u = bt.coords
    m2 = u.shape[0] // 2
    z, w = u[:m2], u[m2:]
    grad = np.empty_like(u)
    grad[0:m2:2] = w[1::2]
    grad[1:m2:2] = -w[0::2]
    grad[m2::2] = -z[1::2]
    grad[m2 + 1::2] = z[0::2]
    return np.conj(grad) / (bt.norm ** 2)


def y_fields(bt):
    """Right-action generator fields for the su(2) basis, as coordinates."""
    gens = (np.array([[1j, 0.0], [0.0, -1j]]),
            np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex),
            np.array([[0.0, 1j], [1j, 0.0]]))
    return [blocks_to_coords(bt.B @ g) for g in gens]


def sigma_s_eval(bt, cols):
    """Holomorphic (4n+3)-form: interior product of Z with the coordinate
    volume, normalized by (2i)^(-(2n+2)); columns are coordinate tangents."""
    u = bt.coords
    mdim = u.shape[0]
    n = mdim // 4 - 1
    mat = np.column_stack([z_field(bt)] + [np.asarray(c, dtype=complex).ravel() for c in cols])
    if mat.shape != (mdim, mdim):
        raise ValueError("need exactly 4n+3 tangent columns")
    return np.linalg.det(mat) / (2j) ** (2 * n + 2)


def sigma_eval(bt, cols):
    """The SL(2,C)-basic 4n-form: sigma_S with the three Y fields inserted."""
    return sigma_s_eval(bt, y_fields(bt) + [np.asarray(c, dtype=complex).ravel() for c in cols])


def beta_preimage(am):
    """A B-model point over a given A-model point (an SL(2,C) gauge choice)."""
    cp = tau_h_inv(am if isinstance(am, AMatrix) else AMatrix(am))
    P, Q = cp.P, cp.Q
    j = int(np.argmax(P[np.arange(P.shape[0]), np.arange(P.shape[0]), 0]))
    pj = math.sqrt(max(P[j, j, 0], 0.0))
    if pj < 1e-8:
        raise ArithmeticError("projector has no dominant diagonal entry")
    p = P[:, j] / pj
    q = qmat_vec(Q, p)
    pt = SphereCovector(p, q)
    bt = tau_s(pt)
    resid = fro_norm(beta_blocks(bt.B) - (am.A if isinstance(am, AMatrix) else am))
    if resid > 1e-8 * max(1.0, fro_norm(am.A if isinstance(am, AMatrix) else am)):
        raise ArithmeticError("preimage reconstruction failed")
    return bt


def qmat_vec(X, v):
    """Quaternion matrix times quaternion vector: (X v)_i = sum_j X_ij v_j."""
    return qmul(X, v[None, :, :]).sum(axis=1)


def beta_blocks(b):
    """Blockwise beta for a raw (m, 2, 2) array."""
    m = b.shape[0]
    adj = np.empty_like(b)
    adj[..., 0, 0] = b[..., 1, 1]
    adj[..., 1, 1] = b[..., 0, 0]
    adj[..., 0, 1] = -b[..., 0, 1]
    adj[..., 1, 0] = -b[..., 1, 0]
    return np.einsum("iab,jbc->iajc", b, adj).reshape(2 * m, 2 * m)


def d_beta_blocks(b, v):
    """Differential of beta at B applied to a block tangent V."""
    adjb = np.empty_like(b)
    adjb[..., 0, 0] = b[..., 1, 1]
    adjb[..., 1, 1] = b[..., 0, 0]
    adjb[..., 0, 1] = -b[..., 0, 1]
    adjb[..., 1, 0] = -b[..., 1, 0]
    adjv = np.empty_like(v)
    adjv[..., 0, 0] = v[..., 1, 1]
    adjv[..., 1, 1] = v[..., 0, 0]
    adjv[..., 0, 1] = -v[..., 0, 1]
    adjv[..., 1, 0] = -v[..., 1, 0]
    m = b.shape[0]
    term1 = np.einsum("iab,jbc->iajc", v, adjb).reshape(2 * m, 2 * m)
    term2 = np.einsum("iab,jbc->iajc", b, adjv).reshape(2 * m, 2 * m)
    return term1 + term2


def sigma_h_eval(am, cols, bt=None):
    """The descended holomorphic 4n-form on matrix tangents at an A-point.

    Solves d(beta) v = w on the B-model tangent space for each column and
    evaluates the basic form there; the result is gauge independent.
    """
    am = am if isinstance(am, AMatrix) else AMatrix(am)
    if bt is None:
        bt = beta_preimage(am)
    ubasis = tangent_basis_et_s(bt)
    dmat = np.column_stack([d_beta_blocks(bt.B, coords_to_blocks(u)).ravel() for u in ubasis])
    vcols = []
    for w in cols:
        wflat = np.asarray(w, dtype=complex).ravel()
        coef, res, *_ = np.linalg.lstsq(dmat, wflat, rcond=None)
        resid = np.linalg.norm(dmat @ coef - wflat)
        if resid > 1e-8 * max(1.0, np.linalg.norm(wflat)):
            raise ArithmeticError("column is not tangent to the A-model image")
        vcols.append(ubasis.T @ coef)
    return sigma_eval(bt, vcols)


def det_theta_prime(bt):
    """det of the holomorphic parts of the pulled-back dual one-forms on the
    right-action generators; constant = 1/8 exactly on the horizontal locus."""
    c = rho_inv(bt.B)
    b = c.imag
    nq = float(np.linalg.norm(b))
    p = c.real / nq

    def theta_i(w_coords):
        pdot, _ = d_tau_s_inv(bt, w_coords)
        out = np.empty(3)
        for k in (1, 2, 3):
            e = np.zeros(4)
            e[k] = 1.0
            out[k - 1] = float(np.sum(qmul(p, np.broadcast_to(e, p.shape)) * pdot))
        return out

    ys = y_fields(bt)
    mat = np.empty((3, 3), dtype=complex)
    for jcol, y in enumerate(ys):
        th = theta_i(y)
        th_i = theta_i(1j * np.asarray(y))
        mat[:, jcol] = 0.5 * (th - 1j * th_i)
    return np.linalg.det(mat)


# ------------------------------------------------------ pfaffian and wedges

def pfaffian(mat):
    """Pfaffian of an even skew-symmetric matrix by elimination with pivoting."""
    a = np.array(mat, dtype=complex)
    n = a.shape[0]
    if n % 2:
        return 0.0
    val = 1.0 + 0.0j
    for k in range(0, n - 1, 2):
        col = np.abs(a[k + 1:, k])
        piv = int(np.argmax(col)) + k + 1
        if col.max() == 0.0:
            return 0.0
        if piv != k + 1:
            a[[k + 1, piv]] = a[[piv, k + 1]]
            a[:, [k + 1, piv]] = a[:, [piv, k + 1]]
            val = -val
        val *= a[k, k + 1]
        if k + 2 < n:
            r = a[k, k + 2:] / a[k, k + 1]
            s = a[k + 1, k + 2:]
            a[k + 2:, k + 2:] += np.outer(s, r) - np.outer(r, s)
    if abs(val.imag) < 1e-12 * max(1.0, abs(val.real)):
        return float(val.real)
    return val


def _subset_signs(mdim, k):
    subs, signs, comps = [], [], []
    for s in itertools.combinations(range(mdim), k):
        comp = tuple(i for i in range(mdim) if i not in s)
        perm = list(s) + list(comp)
        inv = sum(1 for i in range(mdim) for j in range(i + 1, mdim) if perm[i] > perm[j])
        subs.append(s)
        comps.append(comp)
        signs.append(-1.0 if inv % 2 else 1.0)
    return subs, comps, signs


def wedge_top_eval(f_of_tuple, g_of_tuple, basis, k):
    """(f ^ g)(basis) for a k-form f and an (m-k)-form g on an m-basis."""
    mdim = len(basis)
    subs, comps, signs = _subset_signs(mdim, k)
    total = 0.0
    for s, c, sg in zip(subs, comps, signs):
        fv = f_of_tuple([basis[i] for i in s])
        if fv == 0.0:
            continue
        total += sg * fv * g_of_tuple([basis[i] for i in c])
    return total


# ----------------------------------------------------- constants recovery

# Relates the implemented sphere orientation (outward normal first in the
# ambient determinant) to the volume-form conventions under which the
# five-constant corollary identity holds with b_S = +i.  The ratio
# recovering a_S carries no orientation freedom and pins every other sign;
# this one global flip is determined once from the n = 1 evaluation and
# applies to b_S and (through the corollary) b_H together.
VS_ORIENTATION_SIGN = -1.0


def _omega_gram(model, point, basis):
    mdim = len(basis)
    w = np.zeros((mdim, mdim))
    for i in range(mdim):
        for j in range(i + 1, mdim):
            w[i, j] = omega_eval(model, point, basis[i], basis[j])
            w[j, i] = -w[i, j]
    return w


def _pair_matrix_det(ubasis, rbasis):
    """det [[<u_j, b_k>], [conj <u_j, b_k>]] for a complex frame and the
    induced real basis; evaluates u*^top wedge conj(u*)^top on the basis."""
    gam = np.array([[np.sum(np.conj(u) * np.asarray(b, dtype=complex).ravel())
                     for b in rbasis] for u in (x.ravel() for x in ubasis)])
    return np.linalg.det(np.vstack([gam, np.conj(gam)]))


def recover_a_s(bt):
    """sigma_S wedge conj(sigma_S) / Liouville, divided by |B|^(4n+1)."""
    ubasis = tangent_basis_et_s(bt)
    rbasis = real_basis_from_complex(ubasis)
    c_sigma = sigma_s_eval(bt, list(ubasis))
    lhs = c_sigma * np.conj(c_sigma) * _pair_matrix_det(ubasis, rbasis)
    w = _omega_gram("S", bt, list(rbasis))
    omega_top = -pfaffian(w)  # Liouville sign convention of the sphere side
    return complex(lhs / omega_top / bt.norm ** (4 * bt.n + 1))


def recover_b_s(bt):
    """pullback(v_S) wedge conj(sigma_S) / Liouville, times |B|.

    Both factor forms are precomputed on each basis vector and the wedge is
    expanded over complementary index subsets with batched determinants.
    """
    ubasis = tangent_basis_et_s(bt)
    rbasis = list(real_basis_from_complex(ubasis))
    mdim = len(rbasis)
    k = mdim // 2
    n = bt.n
    c = rho_inv(bt.B)
    p = c.real / float(np.linalg.norm(c.imag))

    pdots = []
    for v in rbasis:
        pdot, _ = d_tau_s_inv(bt, v)
        pdots.append(pdot.ravel())
    pdots = np.array(pdots)                       # (mdim, 4m) real
    zvec = z_field(bt)
    cols_c = np.array([np.asarray(v, dtype=complex).ravel() for v in rbasis])

    subs, comps, signs = _subset_signs(mdim, k)
    nsub = len(subs)
    vol_mats = np.empty((nsub, k + 1, k + 1))
    sig_mats = np.empty((nsub, k + 1, k + 1), dtype=complex)
    for idx, (s, comp) in enumerate(zip(subs, comps)):
        vol_mats[idx] = np.column_stack([p.ravel()] + [pdots[i] for i in s])
        sig_mats[idx] = np.column_stack([zvec] + [cols_c[i] for i in comp])
    vol_vals = np.linalg.det(vol_mats)
    sig_vals = np.conj(np.linalg.det(sig_mats) / (2j) ** (2 * n + 2))
    lhs = np.sum(np.asarray(signs) * vol_vals * sig_vals)
    w = _omega_gram("S", bt, rbasis)
    omega_top = -pfaffian(w)
    return complex(lhs / omega_top * bt.norm)


def recover_a_h(seed_pt):
    """sigma_H wedge conj(sigma_H) / Liouville, divided by |A|^(2n+2)."""
    am = tau_h(alpha(seed_pt))
    bt = tau_s(seed_pt)
    ubasis = tangent_basis_et_h(seed_pt)
    rbasis = real_basis_from_complex(ubasis)
    c_sigma = sigma_h_eval(am, list(ubasis), bt=bt)
    lhs = c_sigma * np.conj(c_sigma) * _pair_matrix_det(ubasis, rbasis)
    w = _omega_gram("H", am, [b.ravel() for b in rbasis])
    omega_top = pfaffian(w)
    return complex(lhs / omega_top / am.norm ** (2 * am.n + 2))


def recover_constants(n, rng, npoints=6, det_points=100):
    """Numerically recover the five pairing constants.

    a_S, b_S, det(theta'(Y)) at n = 1 only (top-degree wedge economics);
    a_H for the requested n; b_H by the corollary substitution.  Returns a
    dict with values and observed spreads.
    """
    out = {}
    if n == 1:
        vals_as, vals_bs = [], []
        for _ in range(npoints):
            pt = random_es0(1, float(rng.uniform(0.5, 1.8)), rng)
            bt = tau_s(pt)
            vals_as.append(recover_a_s(bt))
            vals_bs.append(VS_ORIENTATION_SIGN * recover_b_s(bt))
        out["a_S"] = complex(np.mean(vals_as))
        out["a_S_spread"] = float(np.max(np.abs(np.array(vals_as) - out["a_S"])))
        out["b_S"] = complex(np.mean(vals_bs))
        out["b_S_spread"] = float(np.max(np.abs(np.array(vals_bs) - out["b_S"])))
        out["orientation_sign"] = VS_ORIENTATION_SIGN
    dets = []
    for _ in range(det_points):
        pt = random_es0(n, float(rng.uniform(0.4, 2.2)), rng)
        dets.append(det_theta_prime(tau_s(pt)))
    dets = np.array(dets)
    out["det_theta"] = complex(np.mean(dets))
    out["det_theta_spread"] = float(np.max(np.abs(dets - out["det_theta"])))
    vals_ah = []
    for _ in range(npoints):
        pt = random_es0(n, float(rng.uniform(0.5, 1.8)), rng)
        vals_ah.append(recover_a_h(pt))
    out["a_H"] = complex(np.mean(vals_ah))
    out["a_H_spread"] = float(np.max(np.abs(np.array(vals_ah) - out["a_H"])))
    if n == 1:
        out["b_H"] = complex((1.0 / math.sqrt(2.0)) ** (2 * n + 1) * out["a_H"] * out["b_S"]
                             / (2.0 * math.pi ** 2 * out["a_S"] * out["det_theta"]))
    return out


# -------------------------------------------------- flow and fibration

def geodesic_flow_pair(pt, t):
    """(A along the sphere geodesic at time t, e^(-2it) A at time 0)."""
    p, q = pt.p, pt.q
    nq = float(np.sqrt(np.sum(q * q)))
    if abs(nq - 1.0) > 1e-10:
        raise ValueError("flow comparison needs a unit-speed covector")
    pt_t = SphereCovector(p * math.cos(t) + q * math.sin(t),
                          q * math.cos(t) - p * math.sin(t))
    a_t = tau_h(alpha(pt_t)).A
    a_0 = tau_h(alpha(pt)).A
    return a_t, np.exp(-2j * t) * a_0


def hopf_vertical_fields(p):
    """V_j(p) = p e_j for j = 1, 2, 3: unit tangents along the fiber."""
    out = []
    for k in (1, 2, 3):
        e = np.zeros(4)
        e[k] = 1.0
        out.append(qmul(p, np.broadcast_to(e, p.shape)))
    return out

def hopf_pushforward_check(n, nsamples, rng):
    """Pointwise eta/V duality and the volume ratio of the fibration."""
    from .numerics import sphere_uniform
    from .quantization import vol_pnh
    m = n + 1
    worst = 0.0
    for _ in range(nsamples):
        p = sphere_uniform(4 * m - 1, rng).reshape(m, 4)
        vs = hopf_vertical_fields(p)
        for i, vi in enumerate(vs):
            if abs(float(np.sum(vi * p))) > worst:
                worst = abs(float(np.sum(vi * p)))
            for j, vj in enumerate(vs):
                target = 1.0 if i == j else 0.0
                resid = abs(float(np.sum(vi * vj)) - target)
                worst = max(worst, resid)
    vol_resid = abs(vol_sphere(4 * n + 3) - 2.0 * math.pi ** 2 * vol_pnh(n))
    return {"duality_residual": worst, "volume_residual": vol_resid}
