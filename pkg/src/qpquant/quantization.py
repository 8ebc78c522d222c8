"""Quantization constants, the pairing operators, and the reproducing kernel.

Every closed-form constant is a Gamma product assembled in log space, and
every one of them is paired with an independent oracle: a 1-D or 2-D
quadrature, or an angular Monte Carlo estimate with the radial direction
integrated exactly (all radial factors are Gamma integrals).

The volume-form constants recovered in :mod:`qpquant.geometry` enter the
weights only through fixed scalars; they are pinned here as module
constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .algebra import qconj, qmul, rho
from .numerics import MCConfig, MCEstimate, log_gamma, mc_mean, sphere_uniform
from .spectral import dim_eigenspace, pair_projector_amatrix
from .numerics import vol_sphere

__all__ = [
    "A_H_CONST",
    "A_S_CONST",
    "B_H_CONST",
    "B_S_CONST",
    "DET_THETA_CONST",
    "ConstantsRow",
    "a_coeff",
    "a_coeff_quadrature",
    "a_coeff_semianalytic",
    "b_coeff",
    "b_coeff_mc",
    "b_coeff_semianalytic",
    "c_coeff",
    "c_coeff_quadrature",
    "c_over_a_expr",
    "c_over_a_limit",
    "constants_table",
    "flow_commutation_operator_check",
    "flow_commutation_scalar",
    "kernel_diag",
    "kernel_norm_bound_check",
    "kernel_reproduce_check",
    "log_kernel_term",
    "moment_s7",
    "moment_s7_mc",
    "orthogonality_check",
    "pairing_gg_mc",
    "sphere_moment_integrand",
    "t_apply",
    "t_apply_eigenfunction",
    "t_norm",
    "t_norm_gamma_part",
    "t_norm_limit",
    "t_norm_prefactor",
    "t_tilde_apply_eigenfunction",
    "vol_pnh",
    "weight_pair_fg",
    "weight_pair_gg",
    "weight_sphere",
]

LOG2 = math.log(2.0)
LOGPI = math.log(math.pi)

# volume-form ratio constants (see geometry.recover_constants for the
# numerical recovery): sigma wedge conj(sigma) and pullback-volume ratios
A_S_CONST = -1j
B_S_CONST = 1j
DET_THETA_CONST = 0.125
B_H_CONST = -1.0 / (math.sqrt(2.0) * math.pi ** 2)


def A_H_CONST(n):
    """Holomorphic-volume ratio constant on the cotangent model, 2^(n-2)."""
    return 2.0 ** (n - 2)


def vol_pnh(n):
    """Riemannian volume of the quaternion projective space, pi^2n/(2n+1)!."""
    return math.exp(2 * n * LOGPI - log_gamma(2 * n + 2))


# ------------------------------------------------------------------ weights

def weight_pair_gg(norm_a, n):
    """Holomorphic-side pairing weight e^(-2 2^(1/4) pi sqrt|A|) sqrt|a_H| |A|^(n+1)."""
    norm_a = np.asarray(norm_a, dtype=float)
    return (np.exp(-2.0 * 2.0 ** 0.25 * math.pi * np.sqrt(norm_a))
            * math.sqrt(A_H_CONST(n)) * norm_a ** (n + 1))


def weight_pair_fg(norm_a):
    """Mixed pairing weight e^(-2^(1/4) pi sqrt|A|) sqrt|b_H| |A|^(1/2)."""
    norm_a = np.asarray(norm_a, dtype=float)
    return (np.exp(-(2.0 ** 0.25) * math.pi * np.sqrt(norm_a))
            * math.sqrt(abs(B_H_CONST)) * np.sqrt(norm_a))


def weight_sphere(norm_b):
    """Sphere-side pairing weight e^(-pi |B|) sqrt|b_S| |B|^(-1/2)."""
    norm_b = np.asarray(norm_b, dtype=float)
    return np.exp(-math.pi * norm_b) * math.sqrt(abs(B_S_CONST)) / np.sqrt(norm_b)


# ------------------------------------------------------- closed-form pieces

def log_moment_s7(l):
    """log of the degree-2l moment integral over the seven-sphere."""
    return 4 * LOGPI + log_gamma(l + 1) + log_gamma(1.5) - LOG2 - log_gamma(l + 2.5)


def moment_s7(l):
    """Moment of ((|y0|^2-|y1|^2)^2 + 4 (y0.y1)^2)^l over S^7; pi^4/3 at l = 0."""
    return math.exp(log_moment_s7(l))


def log_i_coeff(n, l):
    """log I_l: normalized projective-space moment of |<P, A>|^(2l)."""
    if n < 1 or l < 0:
        raise ValueError("need n >= 1 and l >= 0")
    return (-3 * l * LOG2 - LOG2 - 2 * LOGPI + (2 * n - 2) * LOGPI
            + log_gamma(2 * l + 4) - log_gamma(2 * l + 2 * n + 2) + log_moment_s7(l))


def i_coeff(n, l):
    return math.exp(log_i_coeff(n, l))


def sphere_moment_integrand(pts, m):
    """((|p0|^2 - |p1|^2)^2 + 4 (p0, p1)_E^2) for flat sphere samples."""
    p0 = pts[:, 0:4]
    p1 = pts[:, 4:8]
    del m
    a = (p0 ** 2).sum(1) - (p1 ** 2).sum(1)
    b = (p0 * p1).sum(1)
    return a * a + 4.0 * b * b


def i_coeff_mc(n, l, config):
    """MC oracle for I_l via uniform sphere samples."""
    m = n + 1

    def batch(rng, size):
        pts = sphere_uniform(4 * m - 1, rng, size=size)
        return sphere_moment_integrand(pts, m) ** l

    est = mc_mean(batch, config)
    scale = vol_pnh(n) * (2.0 * math.sqrt(2.0)) ** (-2 * l)
    return MCEstimate(value=est.value * scale, stderr=est.stderr * scale,
                      samples=est.samples, seed=est.seed)


def moment_s7_mc(l, config):
    """MC oracle for the S^7 moment itself."""
    def batch(rng, size):
        pts = sphere_uniform(7, rng, size=size)
        return sphere_moment_integrand(pts, 2) ** l

    est = mc_mean(batch, config)
    scale = vol_sphere(7)
    return MCEstimate(value=est.value * scale, stderr=est.stderr * scale,
                      samples=est.samples, seed=est.seed)


def log_b_coeff(n, l):
    """log b_l, the squared-norm ratio of the eigenspace embedding.

    Gamma-product form of the assembled fiber integral (the defining
    integral fixes the normalization; see b_coeff_mc).
    """
    if n < 1 or l < 0:
        raise ValueError("need n >= 1 and l >= 0")
    return (0.5 * math.log(A_H_CONST(n)) - 0.5 * n * LOG2 + (-4 * l - 3) * LOGPI
            - 2.0 * math.log(2 * l + 2 * n + 1)
            + 2 * log_gamma(l + 1) + 2 * log_gamma(l + 2)
            - log_gamma(l + n + 0.5) - log_gamma(l + n + 1)
            - log_gamma(l + 2 * n) - log_gamma(l + 2 * n + 1)
            + log_gamma(l + (6 * n + 2) / 4.0) + log_gamma(l + (6 * n + 3) / 4.0)
            + log_gamma(l + (6 * n + 4) / 4.0) + log_gamma(l + (6 * n + 5) / 4.0))


def b_coeff(n, l):
    return math.exp(log_b_coeff(n, l))


def log_radial_gg(n, k):
    """log of the radial fiber integral against the holomorphic-side weight
    for integrands of fiber homogeneity 2k (in the flat fiber coordinate)."""
    return (0.5 * math.log(A_H_CONST(n)) + 1.5 * (n + 1) * LOG2
            + log_gamma(6 * n + 2 * k + 2) - (6 * n + 2 * k + 2) * math.log(4 * math.pi))


def b_coeff_semianalytic(n, l):
    """b_l assembled from I_l, the radial Gamma factor, volumes, and dim H_l."""
    logv = (log_i_coeff(n, l) + 3.0 * l * LOG2 + log_radial_gg(n, 2 * l)
            + math.log(vol_sphere(4 * n - 1)) + math.log(vol_pnh(n))
            - math.log(dim_eigenspace(n, l)))
    return math.exp(logv)


def _project_off_orbit(p, q):
    """Remove the components of q along p, p e1, p e2, p e3 (in place-free)."""
    dirs = [p]
    for k in (1, 2, 3):
        e = np.zeros(4)
        e[k] = 1.0
        dirs.append(qmul(p, np.broadcast_to(e, p.shape)))
    for d in dirs:
        q = q - np.sum(q * d, axis=(-2, -1), keepdims=True) * d
    return q


def _unit_fiber_directions(p, rng, size):
    """Uniform unit horizontal covectors over (a batch of) base points p."""
    if p.ndim == 2:
        p = np.broadcast_to(p, (size,) + p.shape)
    q = rng.standard_normal(p.shape)
    q = _project_off_orbit(p, q)
    nrm = np.sqrt((q ** 2).sum(axis=(-2, -1), keepdims=True))
    return q / nrm


def _amatrix_unit_fiber(p, q):
    """tau_h(alpha(p, q)) for batched unit horizontal covectors, |q| = 1."""
    from .algebra import complexify
    tp, tq = qconj(p), qconj(q)
    pnew = p[..., :, None, :]
    qnew = q[..., :, None, :]
    P = qmul(pnew, tp[..., None, :, :])
    Q = qmul(pnew, tq[..., None, :, :]) + qmul(qnew, tp[..., None, :, :])
    rp = complexify(P)
    rq = complexify(Q)
    # ||Q|| = sqrt(2) |q| = sqrt(2): A = 2 rho(P) - rho(Q)^2 + i rho(Q)
    return 2.0 * rp - rq @ rq + 1j * rq


def _pair_batched(p, a):
    """<(p_i theta(p_j)), A>_C with both arguments batched."""
    rp = rho(np.asarray(p, dtype=complex))
    nbatch, m = rp.shape[0], rp.shape[1]
    phat = rp.reshape(nbatch, 2 * m, 2)
    adj = np.empty_like(rp)
    adj[..., 0, 0] = rp[..., 1, 1]
    adj[..., 1, 1] = rp[..., 0, 0]
    adj[..., 0, 1] = -rp[..., 0, 1]
    adj[..., 1, 0] = -rp[..., 1, 0]
    qhat = adj.transpose(0, 2, 1, 3).reshape(nbatch, 2, 2 * m)
    return 0.5 * np.einsum("nab,nbc,nca->n", qhat, a, phat, optimize=True)


def b_coeff_mc(n, l, config):
    """MC of the defining integral of b_l; radial direction exact."""
    m = n + 1
    dim = dim_eigenspace(n, l)

    def batch(rng, size):
        pts = sphere_uniform(4 * m - 1, rng, size=size).reshape(size, m, 4)
        base = sphere_uniform(4 * m - 1, rng, size=size).reshape(size, m, 4)
        direc = _unit_fiber_directions(base, rng, size)
        ahat = _amatrix_unit_fiber(base, direc)
        return np.abs(_pair_cross(pts, ahat)) ** (2 * l)

    est = mc_mean(batch, config)
    scale = math.exp(log_radial_gg(n, 2 * l)) * vol_pnh(n) ** 2 * vol_sphere(4 * n - 1) / dim
    return MCEstimate(value=est.value * scale, stderr=est.stderr * scale,
                      samples=est.samples, seed=est.seed)


def _pair_cross(p, a):
    """<(p_i theta(p_j)), A_k>_C for batched p against batched A."""
    rp = rho(np.asarray(p, dtype=complex))
    nbatch, m = rp.shape[0], rp.shape[1]
    phat = rp.reshape(nbatch, 2 * m, 2)
    adj = np.empty_like(rp)
    adj[..., 0, 0] = rp[..., 1, 1]
    adj[..., 1, 1] = rp[..., 0, 0]
    adj[..., 0, 1] = -rp[..., 0, 1]
    adj[..., 1, 0] = -rp[..., 1, 0]
    qhat = adj.transpose(0, 2, 1, 3).reshape(nbatch, 2, 2 * m)
    return 0.5 * np.einsum("nab,nbc,nca->n", qhat, a, phat, optimize=True)


def log_a_coeff(n, l):
    """log a_l: the eigenvalue of the mixed-pairing operator composition."""
    if n < 1 or l < 0:
        raise ValueError("need n >= 1 and l >= 0")
    return (0.5 * math.log(abs(B_H_CONST)) + 0.75 * LOG2 - (2 * l + 1.5) * LOGPI
            + log_gamma(l + 1) + log_gamma(l + 2) + log_gamma(l + 2 * n + 0.5)
            - math.log(2 * l + 2 * n + 1) - log_gamma(l + 2 * n))


def a_coeff(n, l):
    return math.exp(log_a_coeff(n, l))


def a_coeff_semianalytic(n, l):
    """a_l from the diagonal fiber integral: Gamma factor x volumes / dim."""
    logv = (0.75 * LOG2 + log_gamma(2 * l + 4 * n + 1)
            - (2 * l + 4 * n + 1) * math.log(2 * math.pi)
            + math.log(vol_sphere(4 * n - 1)) + math.log(vol_pnh(n))
            + 0.5 * math.log(abs(B_H_CONST)) - math.log(dim_eigenspace(n, l)))
    return math.exp(logv)


def a_coeff_quadrature(n, l, tol=1e-12):
    """a_l with the radial factor done by adaptive quadrature, as an oracle."""
    val, _ = integrate.quad(lambda t: t ** (2 * l + 4 * n) * math.exp(-2 * math.pi * t),
                            0.0, np.inf, epsabs=0.0, epsrel=tol, limit=200)
    return (2.0 * math.sqrt(2.0)) ** 0.5 * val * vol_sphere(4 * n - 1) * vol_pnh(n) \
        * math.sqrt(abs(B_H_CONST)) / dim_eigenspace(n, l)


def log_c_coeff(n, l):
    """log c_l: the eigenvalue of the sphere-descended operator composition."""
    if n < 1 or l < 0:
        raise ValueError("need n >= 1 and l >= 0")
    return (0.5 * math.log(abs(B_S_CONST)) + math.log(vol_pnh(n))
            - math.log(dim_eigenspace(n, l))
            + 0.5 * LOGPI - math.log(4.0) + math.log(vol_sphere(2)) + math.log(vol_sphere(4 * n - 1))
            - math.log(l + 2 * n + 0.5) + log_gamma(l + 2 * n) - log_gamma(l + 2 * n + 0.5)
            - 0.5 * LOG2 + log_gamma(2 * l + 4 * n + 2.5)
            - (2 * l + 4 * n + 2.5) * math.log(2 * math.pi))


def c_coeff(n, l):
    return math.exp(log_c_coeff(n, l))


def c_coeff_quadrature(n, l, tol=1e-11):
    """c_l via adaptive 2-D quadrature of the cotangent-fiber integral.

    Radius x polar-angle reduction of the R^(4n+3) integral of
    (|x|^2 - r3^2)^l e^(-2 pi |x|) (2|x|)^(-1/2).
    """
    def inner(phi, r):
        return (r ** (2 * l + 4 * n + 2) * math.sin(phi) ** (2 * l + 4 * n - 1)
                * math.cos(phi) ** 2 * math.exp(-2 * math.pi * r) / math.sqrt(2.0 * r))

    val, _ = integrate.dblquad(inner, 0.0, 40.0, 0.0, math.pi / 2.0,
                               epsabs=1e-16, epsrel=tol)
    lfactor = val * vol_sphere(2) * vol_sphere(4 * n - 1) * math.sqrt(abs(B_S_CONST))
    return lfactor * vol_pnh(n) / dim_eigenspace(n, l)


def log_c_over_a_expr(n, l):
    """The displayed closed form of c_l/a_l; tends to pi/2."""
    x = l + 2 * n
    return (0.5 * (math.log(abs(B_S_CONST)) - math.log(abs(B_H_CONST))) - 1.25 * LOG2
            + math.log(x + 0.25) + math.log(x + 0.75) - math.log(x) - math.log(x + 0.5)
            + log_gamma(x + 0.25) + log_gamma(x + 0.75) - 2.0 * log_gamma(x + 0.5))


def c_over_a_expr(n, l):
    return math.exp(log_c_over_a_expr(n, l))


def c_over_a(n, l):
    """Ratio c_l/a_l evaluated in log space (safe for very large l)."""
    return math.exp(log_c_coeff(n, l) - log_a_coeff(n, l))


def c_over_a_limit():
    """Prefactor limit sqrt(|b_S|/|b_H|) 2^(-5/4) = pi/2 exactly."""
    return math.sqrt(abs(B_S_CONST) / abs(B_H_CONST)) * 2.0 ** (-1.25)


# ------------------------------------------------------------ operator norm

def t_norm(n, l):
    """Norm of the quantization operator on the degree-l subspace, a_l/sqrt(b_l)."""
    return math.exp(log_a_coeff(n, l) - 0.5 * log_b_coeff(n, l))


def t_norm_gamma_part(n, l):
    """The Gamma-ratio factor of the closed operator-norm expression; -> 1."""
    s = (log_gamma(l + n + 0.5) + log_gamma(l + n + 1)
         + log_gamma(l + 2 * n) + log_gamma(l + 2 * n + 1)
         - log_gamma(l + (6 * n + 2) / 4.0) - log_gamma(l + (6 * n + 3) / 4.0)
         - log_gamma(l + (6 * n + 4) / 4.0) - log_gamma(l + (6 * n + 5) / 4.0))
    return math.exp(log_gamma(l + 2 * n + 0.5) - log_gamma(l + 2 * n) + 0.5 * s)


def t_norm_prefactor(n, quarter_power_shift=3):
    """sqrt|b_H| / |a_H|^(1/4) x 2^((n + shift)/4).

    With shift 3 this equals a_l/sqrt(b_l) / gamma_part identically (the
    defining-integral normalization) and evaluates to 2/pi for every n;
    with shift 1 it is the printed variant sqrt(2)/pi.
    """
    return (math.sqrt(abs(B_H_CONST)) / A_H_CONST(n) ** 0.25
            * 2.0 ** ((n + quarter_power_shift) / 4.0))


def t_norm_limit(n, l=10 ** 6):
    """Numerical l -> infinity limit of the operator norm (log-gamma route)."""
    return t_norm(n, l)


# ------------------------------------------------------- operators T, T~

def _t_apply_scale(n, degree):
    """Angular-MC scale for the mixed-weight fiber integral at homogeneity 2*degree."""
    return (vol_sphere(4 * n - 1) * 2.0 ** 0.75 * math.sqrt(abs(B_H_CONST))
            * math.exp(log_gamma(2 * degree + 4 * n + 1)
                       - (2 * degree + 4 * n + 1) * math.log(2 * math.pi)))


def t_apply(g, p_prime, n, config, homogeneous_degree=None, growth_bound=None,
            radial_tol=1e-10):
    """Quantization operator T applied to a function g of the matrix model,
    evaluated over the cotangent fiber of the base point with lift p_prime.

    ``g`` takes a batch (N, 2n+2, 2n+2) of matrices and returns (N,) values.
    Declare either polynomial fiber homogeneity (degree in A) or a growth
    bound for the adaptive radial quadrature.
    """
    p_prime = np.asarray(p_prime, dtype=float)

    if homogeneous_degree is not None:
        def batch(rng, size):
            direc = _unit_fiber_directions(p_prime, rng, size)
            ahat = _amatrix_unit_fiber(np.broadcast_to(p_prime, direc.shape), direc)
            return g(ahat)

        est = mc_mean(batch, config)
        scale = _t_apply_scale(n, homogeneous_degree)
        return MCEstimate(value=est.value * scale, stderr=est.stderr * scale,
                          samples=est.samples, seed=est.seed)

    if growth_bound is None:
        raise ValueError("declare homogeneous_degree or a polynomial growth_bound")

    def batch(rng, size):
        direc = _unit_fiber_directions(p_prime, rng, size)
        ahat = _amatrix_unit_fiber(np.broadcast_to(p_prime, direc.shape), direc)
        out = np.empty(size, dtype=complex)
        for k in range(size):
            fn = lambda r: complex(g((r ** 2 * ahat[k])[None])[0])
            re, _ = integrate.quad(lambda r: (fn(r) * r ** (4 * n)
                                              * math.exp(-2 * math.pi * r)).real,
                                   0.0, np.inf, epsabs=1e-14, epsrel=radial_tol, limit=200)
            im, _ = integrate.quad(lambda r: (fn(r) * r ** (4 * n)
                                              * math.exp(-2 * math.pi * r)).imag,
                                   0.0, np.inf, epsabs=1e-14, epsrel=radial_tol, limit=200)
            out[k] = re + 1j * im
        return out

    est = mc_mean(batch, config)
    scale = vol_sphere(4 * n - 1) * 2.0 ** 0.75 * math.sqrt(abs(B_H_CONST))
    return MCEstimate(value=est.value * scale, stderr=est.stderr * scale,
                      samples=est.samples, seed=est.seed)


def t_apply_eigenfunction(phi, p_prime, config, flow_t=None):
    """T applied to the eigenspace embedding of phi, at the base point of p_prime.

    Evaluates the double integral (base x fiber) as a single joint MC with
    the radial direction exact.  With ``flow_t`` the integrand is composed
    with the classical flow A -> e^(-2it) A and the half-density phase
    e^(-it(2n+1)) is attached.
    """
    n, l = phi.n, phi.l
    m = n + 1
    p_prime = np.asarray(p_prime, dtype=float)
    phase = 1.0 + 0.0j
    if flow_t is not None:
        phase = np.exp(-1j * flow_t * (2 * n + 1))

    def batch(rng, size):
        pts = sphere_uniform(4 * m - 1, rng, size=size).reshape(size, m, 4)
        direc = _unit_fiber_directions(p_prime, rng, size)
        ahat = _amatrix_unit_fiber(np.broadcast_to(p_prime, direc.shape), direc)
        if flow_t is not None:
            ahat = np.exp(-2j * flow_t) * ahat
        pair = _pair_cross(pts, ahat) ** l
        return phi.eval_sphere(pts) * pair

    est = mc_mean(batch, config)
    scale = _t_apply_scale(n, l) * vol_pnh(n)
    return MCEstimate(value=est.value * scale * phase, stderr=est.stderr * abs(scale),
                      samples=est.samples, seed=est.seed)


def _unit_sphere_covectors(p, rng, size):
    """Uniform unit covectors in the full cotangent sphere at p."""
    pflat = np.broadcast_to(p, (size,) + p.shape)
    q = rng.standard_normal(pflat.shape)
    q = q - np.sum(q * pflat, axis=(-2, -1), keepdims=True) * pflat
    nrm = np.sqrt((q ** 2).sum(axis=(-2, -1), keepdims=True))
    return q / nrm


def _beta_tau_s_unit(p, q):
    """beta(tau_s(p, q)) for batched unit covectors q at base p."""
    c = p.astype(complex) + 1j * q  # |q| = 1
    blocks = rho(c)
    nbatch, m = blocks.shape[0], blocks.shape[1]
    bstack = blocks.reshape(nbatch, 2 * m, 2)
    adj = np.empty_like(blocks)
    adj[..., 0, 0] = blocks[..., 1, 1]
    adj[..., 1, 1] = blocks[..., 0, 0]
    adj[..., 0, 1] = -blocks[..., 0, 1]
    adj[..., 1, 0] = -blocks[..., 1, 0]
    arow = adj.transpose(0, 2, 1, 3).reshape(nbatch, 2, 2 * m)
    return bstack @ arow


def t_tilde_apply_eigenfunction(phi, p_prime, config):
    """The sphere-descended operator applied to the eigenspace embedding."""
    n, l = phi.n, phi.l
    m = n + 1
    p_prime = np.asarray(p_prime, dtype=float)

    def batch(rng, size):
        pts = sphere_uniform(4 * m - 1, rng, size=size).reshape(size, m, 4)
        xi = _unit_sphere_covectors(p_prime, rng, size)
        amats = _beta_tau_s_unit(np.broadcast_to(p_prime, xi.shape), xi)
        pair = _pair_cross(pts, amats) ** l
        return phi.eval_sphere(pts) * pair

    est = mc_mean(batch, config)
    scale = (vol_pnh(n) * vol_sphere(4 * n + 2) * math.sqrt(abs(B_S_CONST))
             * 2.0 ** -0.5 * math.exp(log_gamma(2 * l + 4 * n + 2.5)
                                      - (2 * l + 4 * n + 2.5) * math.log(2 * math.pi)))
    return MCEstimate(value=est.value * scale, stderr=est.stderr * scale,
                      samples=est.samples, seed=est.seed)


# ----------------------------------------------------------- flow identity

def flow_commutation_scalar(n, l, t):
    """|e^(-it(2l+2n+1)) - e^(-it sqrt(lambda_l + (2n+1)^2))|, exactly zero."""
    from .spectral import eigenvalue
    lhs = np.exp(-1j * t * (2 * l + 2 * n + 1))
    rhs = np.exp(-1j * t * math.sqrt(eigenvalue(n, l) + (2 * n + 1) ** 2))
    return abs(lhs - rhs)


def flow_commutation_operator_check(phi, p_prime, t, config):
    """Residual of T(sigma_t^* f) = e^(-it(2l+2n+1)) T(f) at one base point."""
    n, l = phi.n, phi.l
    flowed = t_apply_eigenfunction(phi, p_prime, config, flow_t=t)
    plain = t_apply_eigenfunction(phi, p_prime, config)
    target = np.exp(-1j * t * (2 * l + 2 * n + 1)) * plain.value
    denom = max(abs(target), 1e-12)
    resid = abs(flowed.value - target) / denom
    stderr = (flowed.stderr + plain.stderr) / denom
    return resid, stderr


# ------------------------------------------------------------------ kernel

def log_kernel_term(n, l, norm_a):
    """log of the diagonal kernel term I_l |A|^(2l) / b_l."""
    return log_i_coeff(n, l) + 2 * l * math.log(norm_a) - log_b_coeff(n, l)


def kernel_diag(n, norm_a, lmax, tail_tol=1e-12):
    """Diagonal of the reproducing kernel with a certified tail bound.

    Returns (value, tail_bound); raises if the truncation is too small for
    the requested tolerance.
    """
    if norm_a <= 0:
        raise ValueError("need a positive matrix norm")
    terms = [math.exp(log_kernel_term(n, l, norm_a)) for l in range(lmax + 1)]
    nxt = math.exp(log_kernel_term(n, lmax + 1, norm_a))
    ratio = nxt / terms[-1]
    ratio2 = math.exp(log_kernel_term(n, lmax + 2, norm_a)) / nxt
    if ratio >= 0.5 or ratio2 >= ratio:
        raise ValueError("truncation too small: term ratios not yet contracting")
    tail = nxt / (1.0 - ratio)
    value = math.fsum(terms)
    if tail > tail_tol * value:
        raise ValueError(f"truncation {lmax} leaves tail {tail:.3e} above tolerance")
    return value, tail


def pairing_gg_mc(fa_hat, fb_hat, homogeneity, n, config):
    """MC of the weighted holomorphic pairing <f, g> for fiber-homogeneous
    integrand fa(A) conj(fb(A)) of total flat-coordinate homogeneity 2k.

    ``fa_hat``/``fb_hat`` take batched unit-fiber matrices.
    """
    m = n + 1

    def batch(rng, size):
        base = sphere_uniform(4 * m - 1, rng, size=size).reshape(size, m, 4)
        direc = _unit_fiber_directions(base, rng, size)
        ahat = _amatrix_unit_fiber(base, direc)
        return fa_hat(ahat) * np.conj(fb_hat(ahat))

    est = mc_mean(batch, config)
    scale = math.exp(log_radial_gg(n, homogeneity)) * vol_pnh(n) * vol_sphere(4 * n - 1)
    return MCEstimate(value=est.value * scale, stderr=est.stderr * scale,
                      samples=est.samples, seed=est.seed)


def orthogonality_check(n, l, lp, config, rng):
    """Pairing between degree-l and degree-l' generators; -> 0 for l != l'."""
    from .spaces import random_eh, tau_h
    a1 = tau_h(random_eh(n, math.sqrt(2.0), rng)).A
    a2 = tau_h(random_eh(n, math.sqrt(2.0), rng)).A
    m = n + 1

    def batch(rng_, size):
        base = sphere_uniform(4 * m - 1, rng_, size=size).reshape(size, m, 4)
        direc = _unit_fiber_directions(base, rng_, size)
        ahat = _amatrix_unit_fiber(base, direc)
        za = _cpair(ahat, a1)
        zb = _cpair(ahat, a2)
        return za ** l * np.conj(zb ** lp)

    est = mc_mean(batch, config)
    scale = math.exp(log_radial_gg(n, l + lp)) * vol_pnh(n) * vol_sphere(4 * n - 1)
    return MCEstimate(value=est.value * scale, stderr=est.stderr * scale,
                      samples=est.samples, seed=est.seed)


def _cpair(abatch, afixed):
    """<A_k, M>_C = tr(A_k sharp(M))/2 for the theta-symmetric fixed M."""
    return 0.5 * np.einsum("nab,ba->n", abatch, np.asarray(afixed, dtype=complex),
                           optimize=True)


def kernel_reproduce_check(c0, phi1_amats, phi1_coeffs, a_prime, n, config):
    """Verify f(A') = <f, R(., A')> for f = c0 + sum c_k <., A_k> by joint MC.

    Returns (f_value, reconstruction MCEstimate).
    """
    a_prime = np.asarray(a_prime, dtype=complex)
    m = n + 1
    amats = [np.asarray(a, dtype=complex) for a in phi1_amats]
    coeffs = list(phi1_coeffs)

    def f_eval(abatch):
        out = np.full(abatch.shape[0], complex(c0))
        for c, amat in zip(coeffs, amats):
            out = out + c * _cpair(abatch, amat)
        return out

    f_at_aprime = complex(c0) + sum(c * 0.5 * np.trace(a_prime @ amat)
                                    for c, amat in zip(coeffs, amats))

    logb = [log_b_coeff(n, 0), log_b_coeff(n, 1)]

    def batch(rng, size):
        pts = sphere_uniform(4 * m - 1, rng, size=size).reshape(size, m, 4)
        base = sphere_uniform(4 * m - 1, rng, size=size).reshape(size, m, 4)
        direc = _unit_fiber_directions(base, rng, size)
        ahat = _amatrix_unit_fiber(base, direc)
        pair_hat = _pair_cross(pts, ahat)          # <P, Ahat>
        pair_pr = pair_projector_amatrix(pts, a_prime)   # <P, A'>
        f_hat = f_eval(ahat)                        # f on the unit fiber
        fconst = complex(c0)
        fquad = f_hat - fconst                      # the homogeneity-2 part
        out = 0.0
        # l = 0 term: (1/b_0) [ const part at homog 0 + linear part at homog 2 ]
        out = out + math.exp(-logb[0]) * (fconst * math.exp(log_radial_gg(n, 0))
                                          + fquad * math.exp(log_radial_gg(n, 1)))
        # l = 1 term: conj<P, A> <P, A'> against both parts of f
        core = np.conj(pair_hat) * pair_pr
        out = out + math.exp(-logb[1]) * (fconst * core * math.exp(log_radial_gg(n, 1))
                                          + fquad * core * math.exp(log_radial_gg(n, 2)))
        return out

    est = mc_mean(batch, config)
    scale = vol_pnh(n) ** 2 * vol_sphere(4 * n - 1)
    return f_at_aprime, MCEstimate(value=est.value * scale, stderr=est.stderr * scale,
                                   samples=est.samples, seed=est.seed)


def kernel_norm_bound_check(c0, phi1_amats, phi1_coeffs, a_prime, n, config):
    """Check |f(A')| <= sqrt(R(A', A')) ||f|| for f = c0 + linear part."""
    a_prime = np.asarray(a_prime, dtype=complex)
    amats = [np.asarray(a, dtype=complex) for a in phi1_amats]
    coeffs = list(phi1_coeffs)
    f_at_aprime = complex(c0) + sum(c * 0.5 * np.trace(a_prime @ amat)
                                    for c, amat in zip(coeffs, amats))
    norm_a = float(np.sqrt(np.sum(np.abs(a_prime) ** 2)))
    diag, _ = kernel_diag(n, norm_a, lmax=30)

    def f1_hat(abatch):
        out = np.zeros(abatch.shape[0], dtype=complex)
        for c, amat in zip(coeffs, amats):
            out = out + c * _cpair(abatch, amat)
        return out

    norm1_sq = pairing_gg_mc(f1_hat, f1_hat, 2, n, config)
    norm0_sq = abs(c0) ** 2 * b_coeff(n, 0) / vol_pnh(n)
    fnorm_sq = norm0_sq + norm1_sq.value.real
    bound = math.sqrt(diag) * math.sqrt(max(fnorm_sq, 0.0))
    return abs(f_at_aprime), bound, 3.0 * math.sqrt(diag) * norm1_sq.stderr


# ------------------------------------------------------------------- table

@dataclass(frozen=True)
class ConstantsRow:
    """One row of the quantization-constants table."""

    n: int
    l: int
    i_coeff: float
    b_coeff: float
    a_coeff: float
    c_coeff: float
    t_norm: float
    ratio_c_over_a: float

    def as_dict(self):
        return {"n": self.n, "l": self.l, "I_l": self.i_coeff, "b_l": self.b_coeff,
                "a_l": self.a_coeff, "c_l": self.c_coeff, "T_norm": self.t_norm,
                "c_over_a": self.ratio_c_over_a}


def constants_table(n, l_values):
    rows = []
    for l in l_values:
        rows.append(ConstantsRow(
            n=n, l=l,
            i_coeff=i_coeff(n, l),
            b_coeff=b_coeff(n, l),
            a_coeff=a_coeff(n, l),
            c_coeff=c_coeff(n, l),
            t_norm=t_norm(n, l),
            ratio_c_over_a=c_coeff(n, l) / a_coeff(n, l),
        ))
    return rows
