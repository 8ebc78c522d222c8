"""Model spaces, the maps between them, memberships, and samplers.

Points of the four models:

* ``SphereCovector`` -- (p, q) with p on the unit sphere of H^(n+1) and q an
  ambient (co)tangent direction.
* ``CotangentPointH`` -- (P, Q): a rank-one projector P in the quaternionic
  Jordan algebra together with a tangent Q, P o Q = Q/2.
* ``BTuple`` -- (n+1)-tuple of 2x2 complex blocks with sum(det B_i) = 0.
* ``AMatrix`` -- (2n+2)x(2n+2) complex matrix, theta-transpose symmetric,
  rank 2, A^2 = 0.

The maps alpha, beta, tau_s, tau_h (and the inverses of the tau's) move
points between these models; ``beta(tau_s(x)) == tau_h(alpha(x))`` exactly
on the horizontal locus and provably not elsewhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .algebra import (
    complexify,
    complexify_inv,
    einner,
    fro_norm,
    fro_norm_tuple,
    hinner,
    jmat,
    jordan,
    qconj,
    qmat_mul,
    qmul,
    qnorm,
    qtrace,
    rho,
    rho_inv,
)
from .numerics import sphere_uniform

__all__ = [
    "AMatrix",
    "BTuple",
    "CotangentPointH",
    "SphereCovector",
    "alpha",
    "beta",
    "hopf_project",
    "in_amatrix_space",
    "in_btuple_space",
    "in_btuple_space0",
    "in_cotangent_h",
    "in_sphere_covector",
    "in_sphere_covector0",
    "metric_g_h",
    "point_from_json",
    "point_to_json",
    "random_eh",
    "random_es0",
    "random_es_generic",
    "random_sl2",
    "random_sphere",
    "tau_h",
    "tau_h_inv",
    "tau_s",
    "tau_s_inv",
]

EQ_TOL = 1e-10
RANK_TOL = 1e-8


def _freeze(a):
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class SphereCovector:
    """(p, q) pair of (n+1, 4) real coefficient arrays."""

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", _freeze(np.asarray(self.p, dtype=float)))
        object.__setattr__(self, "q", _freeze(np.asarray(self.q, dtype=float)))

    @property
    def n(self):
        return self.p.shape[0] - 1


@dataclass(frozen=True)
class CotangentPointH:
    """(P, Q) pair of (n+1, n+1, 4) quaternion-coefficient arrays."""

    P: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "P", _freeze(np.asarray(self.P, dtype=float)))
        object.__setattr__(self, "Q", _freeze(np.asarray(self.Q, dtype=float)))

    @property
    def n(self):
        return self.P.shape[0] - 1

    @property
    def qnorm_j(self):
        """Jordan-algebra norm ||Q|| = sqrt(tr(Q o Q))."""
        return float(np.sqrt(np.sum(self.Q ** 2)))


@dataclass(frozen=True)
class BTuple:
    """Tuple (B_0 ... B_n) stored as an (n+1, 2, 2) complex array."""

    B: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "B", _freeze(np.asarray(self.B, dtype=complex)))

    @property
    def n(self):
        return self.B.shape[0] - 1

    @property
    def zw(self):
        """Column vectors z, w of length 2n+2: B_i = [[z_2i, w_2i], [z_2i+1, w_2i+1]]."""
        m = self.B.shape[0]
        z = self.B[:, :, 0].reshape(2 * m)
        w = self.B[:, :, 1].reshape(2 * m)
        return z, w

    @property
    def coords(self):
        """Ambient coordinate vector (z_0..z_{2n+1}, w_0..w_{2n+1})."""
        z, w = self.zw
        return np.concatenate([z, w])

    @classmethod
    def from_coords(cls, u):
        u = np.asarray(u, dtype=complex)
        m2 = u.shape[0] // 2
        z, w = u[:m2], u[m2:]
        b = np.stack([z.reshape(m2 // 2, 2), w.reshape(m2 // 2, 2)], axis=-1)
        return cls(b)

    @property
    def norm(self):
        return fro_norm_tuple(self.B)


@dataclass(frozen=True)
class AMatrix:
    """(2n+2)x(2n+2) complex matrix point."""

    A: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", _freeze(np.asarray(self.A, dtype=complex)))

    @property
    def n(self):
        return self.A.shape[0] // 2 - 1

    @property
    def norm(self):
        return fro_norm(self.A)


# ---------------------------------------------------------------- memberships

def in_sphere_covector(pt, tol=EQ_TOL):
    """(p,p)_E = 1, (p,q)_E = 0, and q + p (q,p)_H != 0."""
    p, q = pt.p, pt.q
    if abs(einner(p, p) - 1.0) > tol or abs(einner(p, q)) > tol:
        return False
    qp = hinner(q, p)
    shifted = q + qmul(p, qp[None, :])
    return qnorm(shifted).max() > tol


def in_sphere_covector0(pt, tol=EQ_TOL):
    """(p,p)_E = 1, q != 0, (q,p)_H = 0 componentwise."""
    p, q = pt.p, pt.q
    if abs(einner(p, p) - 1.0) > tol:
        return False
    if np.sqrt(np.sum(q ** 2)) <= tol:
        return False
    return np.max(np.abs(hinner(q, p))) <= tol


def in_cotangent_h(pt, tol=EQ_TOL):
    """tr P = 1, P o P = P, P o Q = Q/2, Q != 0, Q^3 = ||Q||^2 Q / 2."""
    P, Q = pt.P, pt.Q
    scale = max(1.0, float(np.max(np.abs(Q))) ** 3)
    if abs(qtrace(P)[0] - 1.0) > tol:
        return False
    if np.max(np.abs(jordan(P, P) - P)) > tol:
        return False
    if np.max(np.abs(jordan(P, Q) - 0.5 * Q)) > tol * max(1.0, np.max(np.abs(Q))):
        return False
    nq2 = np.sum(Q ** 2)
    if nq2 <= tol:
        return False
    q3 = qmat_mul(qmat_mul(Q, Q), Q)
    return bool(np.max(np.abs(q3 - 0.5 * nq2 * Q)) <= tol * scale)


def in_btuple_space(pt, tol=EQ_TOL):
    """sum(det B_i) = 0 and z, w linearly independent."""
    z, w = pt.zw
    d = np.sum(np.linalg.det(pt.B))
    if abs(d) > tol * max(1.0, pt.norm ** 2):
        return False
    s = np.linalg.svd(np.stack([z, w], axis=1), compute_uv=False)
    return s[-1] > RANK_TOL * max(s[0], 1e-300)


def in_btuple_space0(pt, tol=EQ_TOL):
    """Horizontal locus: sum B_i^* B_i is a multiple of the identity.

    Equivalently conj(z).w = 0 and ||z|| = ||w||, three real conditions;
    this is the image of the horizontal covectors under the B-model map and
    it is invariant under the right SU(2) action.
    """
    if not in_btuple_space(pt, tol):
        return False
    z, w = pt.zw
    cross = np.sum(np.conj(z) * w)
    balance = np.sum(np.abs(z) ** 2) - np.sum(np.abs(w) ** 2)
    scale = max(1.0, pt.norm ** 2)
    return abs(cross) <= tol * scale and abs(balance) <= tol * scale


def in_amatrix_space(pt, tol=EQ_TOL, rank_tol=RANK_TOL):
    """J A = A^t J, numerical rank 2, A^2 = 0."""
    a = pt.A
    m = a.shape[0] // 2
    jj = jmat(m)
    scale = max(1.0, fro_norm(a))
    if np.max(np.abs(jj @ a - a.T @ jj)) > tol * scale:
        return False
    if np.max(np.abs(a @ a)) > tol * scale ** 2:
        return False
    s = np.linalg.svd(a, compute_uv=False)
    return (s[1] > rank_tol * s[0]) and (s[2] <= rank_tol * s[0] if len(s) > 2 else True)


# --------------------------------------------------------------------- maps

def hopf_project(p):
    """P = (p_i theta(p_j)), the rank-one projector of a unit vector."""
    p = np.asarray(p, dtype=float)
    return qmul(p[:, None, :], qconj(p)[None, :, :])


def metric_g_h(q1, q2):
    """Riemannian pairing of two tangents at a common projector: tr(Q1 o Q2)/2."""
    return 0.5 * float(np.sum(np.asarray(q1) * np.asarray(q2)))


def alpha(pt, tol=EQ_TOL):
    """(p, q) -> (P, Q) with P = (p_i theta(p_j)), Q = (p_i theta(q_j) + q_i theta(p_j))."""
    if not in_sphere_covector(pt, tol):
        raise ValueError("point is not in the sphere covector space")
    p, q = pt.p, pt.q
    tp, tq = qconj(p), qconj(q)
    P = qmul(p[:, None, :], tp[None, :, :])
    Q = qmul(p[:, None, :], tq[None, :, :]) + qmul(q[:, None, :], tp[None, :, :])
    return CotangentPointH(P, Q)


def tau_s(pt, tol=EQ_TOL):
    """(p, q) -> B_i = rho(|q| p_i + q_i i); ||B||^2 = 4 |q|^2."""
    if not in_sphere_covector(pt, tol):
        raise ValueError("point is not in the sphere covector space")
    nq = float(np.sqrt(np.sum(pt.q ** 2)))
    h = nq * pt.p.astype(complex) + 1j * pt.q
    return BTuple(rho(h))


def tau_h(pt, tol=EQ_TOL):
    """(P, Q) -> A = ||Q||^2 rho(P) - rho(Q)^2 + i ||Q|| rho(Q) / sqrt(2)."""
    if not in_cotangent_h(pt, tol):
        raise ValueError("point is not in the cotangent-bundle model")
    nq = pt.qnorm_j
    rp = complexify(pt.P)
    rq = complexify(pt.Q)
    return AMatrix(nq ** 2 * rp - rq @ rq + (1j / np.sqrt(2.0)) * nq * rq)


def _adj2(b):
    """Adjugate of 2x2 blocks: [[d, -b], [-c, a]]; equals -J B^t J."""
    out = np.empty_like(b)
    out[..., 0, 0] = b[..., 1, 1]
    out[..., 1, 1] = b[..., 0, 0]
    out[..., 0, 1] = -b[..., 0, 1]
    out[..., 1, 0] = -b[..., 1, 0]
    return out


def beta(pt, tol=EQ_TOL):
    """B -> A with blocks A_ij = -B_i J B_j^t J = B_i adj(B_j)."""
    if not in_btuple_space(pt, tol):
        raise ValueError("tuple is not in the B-model space")
    b = pt.B
    m = b.shape[0]
    adj = _adj2(b)
    a = np.einsum("iab,jbc->iajc", b, adj).reshape(2 * m, 2 * m)
    return AMatrix(a)


def tau_s_inv(pt, tol=EQ_TOL, boundary_tol=1e-8):
    """Recover (p, q) from B via the real/imaginary quaternion split.

    Rejects tuples whose recovered point sits within ``boundary_tol`` of the
    boundary where the sphere-covector membership degenerates.
    """
    if not in_btuple_space(pt, tol):
        raise ValueError("tuple is not in the B-model space")
    c = rho_inv(pt.B)
    a, b = c.real, c.imag
    nq = float(np.linalg.norm(b))
    if nq <= boundary_tol:
        raise ValueError("tuple has vanishing covector part")
    q = b
    p = a / nq
    out = SphereCovector(p, q)
    qp = hinner(q, p)
    shifted = q + qmul(p, qp[None, :])
    if qnorm(shifted).max() <= boundary_tol * nq:
        raise ValueError("recovered point is too close to the degenerate boundary")
    if not in_sphere_covector(out, max(tol, 1e-9)):
        raise ValueError("recovered point fails sphere-covector membership")
    return out


def tau_h_inv(pt, tol=EQ_TOL):
    """Recover (P, Q) from A using the quaternionic real/imaginary parts."""
    if not in_amatrix_space(pt, tol):
        raise ValueError("matrix is not in the A-model space")
    a = pt.A
    m = a.shape[0] // 2
    jj = jmat(m)
    aq = jj @ np.conj(a) @ (-jj)
    x_re = complexify_inv(0.5 * (a + aq))
    x_im = complexify_inv((a - aq) / 2j)
    if max(np.max(np.abs(x_re.imag)), np.max(np.abs(x_im.imag))) > 1e-9 * max(1.0, fro_norm(a)):
        raise ValueError("matrix has no quaternionic hermitian split")
    x_re, x_im = x_re.real, x_im.real
    nq = (fro_norm(a) / np.sqrt(2.0)) ** 0.5
    Q = np.sqrt(2.0) * x_im / nq
    P = (x_re + qmat_mul(Q, Q)) / nq ** 2
    return CotangentPointH(P, Q)


# ------------------------------------------------------------------ samplers

def random_sphere(dim, rng):
    """One uniform point on S^dim."""
    return sphere_uniform(dim, rng)


def _sp1_orbit_frame(p):
    """Unit vectors p, p e1, p e2, p e3 spanning the quaternionic line of p."""
    dirs = [p]
    for k in (1, 2, 3):
        e = np.zeros(4)
        e[k] = 1.0
        dirs.append(qmul(p, np.broadcast_to(e, p.shape)))
    return dirs


def random_es0(n, qnorm_val, rng, max_tries=64):
    """Horizontal covector sample: (q, p)_H = 0 exactly, |q| = qnorm_val."""
    m = n + 1
    for _ in range(max_tries):
        p = sphere_uniform(4 * m - 1, rng).reshape(m, 4)
        q = rng.standard_normal((m, 4))
        for d in _sp1_orbit_frame(p):
            q = q - np.sum(q * d) * d
        nq = np.sqrt(np.sum(q ** 2))
        if nq > 1e-8:
            return SphereCovector(p, q * (qnorm_val / nq))
    raise RuntimeError("degenerate draws while sampling the horizontal space")


def random_es_generic(n, rng, vertical_mix=0.7, max_tries=64):
    """Sample of the full covector space with (q, p)_H genuinely nonzero."""
    m = n + 1
    for _ in range(max_tries):
        base = random_es0(n, 1.0, rng)
        p = base.p
        vert = np.zeros((m, 4))
        coeffs = rng.standard_normal(3)
        for c, d in zip(coeffs, _sp1_orbit_frame(p)[1:]):
            vert += c * d
        q = base.q + vertical_mix * vert
        q -= np.sum(q * p) * p  # keep (p, q)_E = 0
        pt = SphereCovector(p, q)
        if in_sphere_covector(pt) and np.max(np.abs(hinner(q, p))) > 1e-3:
            return pt
    raise RuntimeError("failed to draw a generic non-horizontal covector")


def random_eh(n, qnorm_j, rng):
    """Random cotangent point with Jordan norm ||Q|| = qnorm_j."""
    pt = random_es0(n, qnorm_j / np.sqrt(2.0), rng)
    return alpha(pt)


def random_sl2(rng):
    """Haar-ish sample of SL(2, C) via a normalized complexified quaternion."""
    while True:
        r = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        g = rho(r)
        d = np.linalg.det(g)
        if abs(d) > 1e-6:
            return g / np.sqrt(d)


# -------------------------------------------------------------- serialization

def _c2pair(arr):
    flat = np.asarray(arr, dtype=complex).ravel()
    return [[float(v.real), float(v.imag)] for v in flat]


def _pair2c(data):
    return np.array([complex(re, im) for re, im in data])


def point_to_json(pt):
    """Serialize a model point to the portable JSON record."""
    if isinstance(pt, SphereCovector):
        return json.dumps({"space": "E_S", "n": pt.n,
                           "data": _c2pair(np.concatenate([pt.p.ravel(), pt.q.ravel()]))})
    if isinstance(pt, CotangentPointH):
        return json.dumps({"space": "E_H", "n": pt.n,
                           "data": _c2pair(np.concatenate([pt.P.ravel(), pt.Q.ravel()]))})
    if isinstance(pt, BTuple):
        return json.dumps({"space": "Et_S", "n": pt.n, "data": _c2pair(pt.B)})
    if isinstance(pt, AMatrix):
        return json.dumps({"space": "Et_H", "n": pt.n, "data": _c2pair(pt.A)})
    raise TypeError(f"unknown point type {type(pt)!r}")


def point_from_json(text):
    rec = json.loads(text)
    n = int(rec["n"])
    m = n + 1
    flat = _pair2c(rec["data"])
    space = rec["space"]
    if space == "E_S":
        half = flat.shape[0] // 2
        return SphereCovector(flat[:half].real.reshape(m, 4), flat[half:].real.reshape(m, 4))
    if space == "E_H":
        half = flat.shape[0] // 2
        return CotangentPointH(flat[:half].real.reshape(m, m, 4), flat[half:].real.reshape(m, m, 4))
    if space == "Et_S":
        return BTuple(flat.reshape(m, 2, 2))
    if space == "Et_H":
        return AMatrix(flat.reshape(2 * m, 2 * m))
    raise ValueError(f"unknown space tag {space!r}")
