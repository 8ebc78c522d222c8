"""Closed-form constants vs oracles, operators, flow identity, kernel."""

import math

import numpy as np
import pytest

from qpquant import quantization as qz
from qpquant import spaces as sp
from qpquant import spectral as spl
from qpquant.numerics import MCConfig


def test_weights_reduce_on_the_fiber():
    # |q| = 1 gives |A| = 2 sqrt(2): mixed-weight exponent is exactly -2 pi
    norm_a = 2.0 * math.sqrt(2.0)
    w = qz.weight_pair_fg(norm_a)
    expect = math.exp(-2 * math.pi) * math.sqrt(abs(qz.B_H_CONST)) * math.sqrt(norm_a)
    assert abs(w - expect) < 1e-15
    assert abs(2.0 ** 0.25 * math.pi * math.sqrt(norm_a) - 2.0 * math.pi) < 1e-12
    # wholesale weights vanish at the zero section
    assert qz.weight_pair_gg(1e-30, 1) < 1e-30
    assert qz.weight_sphere(4.0) == pytest.approx(
        math.exp(-4 * math.pi) / 2.0)


def test_i_coeff_closed_values():
    assert abs(qz.i_coeff(1, 0) - math.pi ** 2 / 6.0) < 1e-14
    assert abs(qz.moment_s7(0) - math.pi ** 4 / 3.0) < 1e-13
    assert abs(qz.moment_s7(1) - 2.0 * math.pi ** 4 / 15.0) < 1e-13
    # I_0 equals the total volume for every n
    for n in (1, 2, 3):
        assert abs(qz.i_coeff(n, 0) - qz.vol_pnh(n)) < 1e-14


def test_i_coeff_mc_agreement():
    for n in (1, 2):
        for l in (1, 3):
            est = qz.i_coeff_mc(n, l, MCConfig(samples=200_000, seed=13 + l))
            assert est.within(qz.i_coeff(n, l), nsigma=3.5)
    est = qz.moment_s7_mc(1, MCConfig(samples=200_000, seed=5))
    assert est.within(qz.moment_s7(1), nsigma=3.5)


def test_b_coeff_two_assemblies_and_mc():
    for n in (1, 2):
        for l in range(4):
            c = qz.b_coeff(n, l)
            s = qz.b_coeff_semianalytic(n, l)
            assert abs(c - s) <= 1e-8 * c
            assert c > 0
    for l in (0, 1):
        est = qz.b_coeff_mc(1, l, MCConfig(samples=150_000, seed=7))
        assert est.stderr <= 0.01 * est.value + 1e-30
        assert est.within(qz.b_coeff(1, l), nsigma=3.0, floor=1e-12 * est.value)


def test_b_coeff_growth_rate():
    l = 10_000
    ratio = math.exp(qz.log_b_coeff(1, l) - qz.log_b_coeff(1, l + 1))
    assert abs(ratio * l ** 4 / math.pi ** 4 - 1.0) <= 1e-2


def test_a_coeff_quadrature_and_fiber_value():
    for n in (1, 2):
        for l in range(6):
            c = qz.a_coeff(n, l)
            q = qz.a_coeff_quadrature(n, l)
            s = qz.a_coeff_semianalytic(n, l)
            assert abs(c - q) <= 1e-8 * c
            assert abs(c - s) <= 1e-12 * c
            assert c > 0
    # the diagonal pairing value <P0, A> = |Q|^2/2 -> 1 at |Q|^2 = 2
    pt = sp.SphereCovector(np.eye(1, 8).reshape(2, 4) * 0 + np.array(
        [[1, 0, 0, 0], [0, 0, 0, 0.]]), np.array([[0, 0, 0, 0], [1.0, 0, 0, 0]]))
    cp = sp.alpha(pt)
    am = sp.tau_h(cp)
    val = spl.pair_projector_amatrix(pt.p, am.A)
    assert abs(val - 0.5 * cp.qnorm_j ** 2) < 1e-12
    assert abs(val - 1.0) < 1e-12


def test_c_coeff_quadrature():
    for n in (1, 2):
        for l in range(4):
            c = qz.c_coeff(n, l)
            q = qz.c_coeff_quadrature(n, l)
            assert abs(c - q) <= 1e-8 * c
            assert c > 0


def test_c_over_a_closed_expression_and_limit():
    for n in (1, 2):
        for l in range(0, 51, 5):
            r = math.exp(qz.log_c_coeff(n, l) - qz.log_a_coeff(n, l))
            assert abs(r - qz.c_over_a_expr(n, l)) <= 1e-10 * r
    assert abs(qz.c_over_a(1, 10 ** 6) - math.pi / 2.0) <= 1e-3
    assert abs(qz.c_over_a_limit() - math.pi / 2.0) <= 1e-15


def test_t_norm_identity_and_limits():
    # the defining-integral normalization: prefactor 2^((n+3)/4) variant
    for n in (1, 2, 3, 4):
        for l in range(0, 51, 10):
            lhs = qz.t_norm(n, l)
            rhs = qz.t_norm_prefactor(n) * qz.t_norm_gamma_part(n, l)
            assert abs(lhs - rhs) <= 1e-10 * lhs
        assert abs(qz.t_norm_prefactor(n) - 2.0 / math.pi) <= 1e-15
        # the printed variant evaluates to sqrt(2)/pi for every n
        assert abs(qz.t_norm_prefactor(n, 1) - math.sqrt(2.0) / math.pi) <= 1e-15
    assert abs(qz.t_norm_limit(1) - 2.0 / math.pi) <= 1e-3


def test_t_norm_monotone_convergence():
    vals = [qz.t_norm(1, l) for l in range(51)]
    diffs = np.diff(vals)
    assert np.all(diffs < 0) or np.all(diffs > 0)
    assert abs(vals[-1] - 2.0 / math.pi) < abs(vals[0] - 2.0 / math.pi)


def test_constants_positive_and_monotone_ratios():
    for n in (1, 2):
        for l in range(4):
            row = qz.constants_table(n, [l])[0]
            assert row.b_coeff > 0 and row.a_coeff > 0 and row.c_coeff > 0
            assert row.i_coeff > 0
    ratios = [qz.c_over_a(1, l) for l in range(0, 30)]
    assert np.all(np.diff(ratios) < 0)  # decreases toward pi/2


def test_operator_identity_t(rng):
    for l in (0, 1):
        phi = spl.random_hl_function(1, l, 2, rng)
        pprime = sp.random_es0(1, 1.0, rng).p
        target = qz.a_coeff(1, l) * complex(phi.eval_sphere(pprime[None])[0])
        est = qz.t_apply_eigenfunction(phi, pprime, MCConfig(samples=300_000, seed=60 + l))
        assert abs(est.value - target) <= 0.02 * abs(target)


def test_operator_identity_t_tilde(rng):
    for l in (0, 1):
        phi = spl.random_hl_function(1, l, 2, rng)
        pprime = sp.random_es0(1, 1.0, rng).p
        target = qz.c_coeff(1, l) * complex(phi.eval_sphere(pprime[None])[0])
        est = qz.t_tilde_apply_eigenfunction(phi, pprime, MCConfig(samples=300_000, seed=70 + l))
        assert abs(est.value - target) <= 0.02 * abs(target)


def test_t_apply_generic_constant(rng):
    # T(1) is independent of the base point and equals a_0/vol
    cfg = MCConfig(samples=2000, seed=3)
    vals = []
    for _ in range(2):
        p = sp.random_es0(1, 1.0, rng).p
        vals.append(qz.t_apply(lambda a: np.ones(a.shape[0]), p, 1, cfg,
                               homogeneous_degree=0).value)
    assert abs(vals[0] - vals[1]) < 1e-12
    assert abs(vals[0] - qz.a_coeff(1, 0) / qz.vol_pnh(1)) < 1e-12
    # adaptive radial route agrees on a homogeneous integrand
    est = qz.t_apply(lambda a: np.einsum("naa->n", a), p, 1,
                     MCConfig(samples=200, seed=9), growth_bound=2)
    ref = qz.t_apply(lambda a: np.einsum("naa->n", a), p, 1,
                     MCConfig(samples=200, seed=9), homogeneous_degree=1)
    assert abs(est.value - ref.value) <= 1e-6 * max(1.0, abs(ref.value))
    with pytest.raises(ValueError):
        qz.t_apply(lambda a: np.ones(a.shape[0]), p, 1, cfg)


def test_flow_commutation(rng):
    assert qz.flow_commutation_scalar(1, 1, 0.7) == 0.0
    assert qz.flow_commutation_scalar(2, 3, 2.1) == 0.0
    # quantum period 2 pi, classical period pi gives phase -1
    ph_2pi = np.exp(-1j * 2 * math.pi * (2 * 1 + 2 * 1 + 1))
    ph_pi = np.exp(-1j * math.pi * (2 * 1 + 2 * 1 + 1))
    assert abs(ph_2pi - 1.0) < 1e-12
    assert abs(ph_pi + 1.0) < 1e-12
    for l in (0, 1):
        phi = spl.random_hl_function(1, l, 2, rng)
        p = sp.random_es0(1, 1.0, rng).p
        resid, stderr = qz.flow_commutation_operator_check(
            phi, p, 0.7, MCConfig(samples=50_000, seed=80 + l))
        assert resid <= max(3.0 * stderr, 1e-10)


def test_kernel_terms_and_diag(rng):
    # superexponential decay of the diagonal terms
    norm_a = 2.0 * math.sqrt(2.0)
    ratios = [math.exp(qz.log_kernel_term(1, l + 1, norm_a)
                       - qz.log_kernel_term(1, l, norm_a)) for l in range(8)]
    assert all(r2 < r1 for r1, r2 in zip(ratios, ratios[1:]))
    val, tail = qz.kernel_diag(1, norm_a, lmax=25)
    val2, _ = qz.kernel_diag(1, norm_a, lmax=30)
    assert abs(val - val2) <= 1e-10 * val
    assert tail <= 1e-12 * val
    with pytest.raises(ValueError):
        qz.kernel_diag(1, 50.0, lmax=2)


def test_kernel_reproduction(rng):
    a1 = sp.tau_h(sp.random_eh(1, math.sqrt(2.0), rng)).A
    aprime = sp.tau_h(sp.random_eh(1, math.sqrt(2.0), rng)).A
    fval, rec = qz.kernel_reproduce_check(0.7, [a1], [0.4 - 0.3j], aprime, 1,
                                          MCConfig(samples=300_000, seed=91))
    assert abs(rec.value - fval) <= 3.0 * rec.stderr + 1e-12


def test_kernel_norm_bound(rng):
    for k in range(3):
        a1 = sp.tau_h(sp.random_eh(1, math.sqrt(2.0), rng)).A
        aprime = sp.tau_h(sp.random_eh(1, float(rng.uniform(1.0, 2.0)), rng)).A
        lhs, bound, slack = qz.kernel_norm_bound_check(
            0.5, [a1], [0.8j], aprime, 1, MCConfig(samples=100_000, seed=101 + k))
        assert lhs <= bound + slack


def test_orthogonality_of_degrees(rng):
    est = qz.orthogonality_check(1, 0, 1, MCConfig(samples=200_000, seed=111), rng)
    assert abs(est.value) <= 3.0 * est.stderr
    est2 = qz.orthogonality_check(1, 1, 2, MCConfig(samples=200_000, seed=112), rng)
    assert abs(est2.value) <= 3.0 * est2.stderr
