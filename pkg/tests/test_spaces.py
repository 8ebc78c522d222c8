"""Model spaces: maps, memberships, norm chain, diagram, serialization."""

import numpy as np
import pytest

from qpquant import spaces as sp
from qpquant.algebra import fro_norm, hinner, qmat_mul


def canonical_point(n=1):
    m = n + 1
    p = np.zeros((m, 4))
    q = np.zeros((m, 4))
    p[0, 0] = 1.0
    q[1, 0] = 1.0
    return sp.SphereCovector(p, q)


def test_alpha_at_canonical_point():
    pt = canonical_point()
    cp = sp.alpha(pt)
    P, Q = cp.P, cp.Q
    assert np.isclose(P[0, 0, 0], 1.0) and np.abs(P).sum() == pytest.approx(1.0)
    assert np.isclose(Q[0, 1, 0], 1.0) and np.isclose(Q[1, 0, 0], 1.0)
    assert np.isclose(cp.qnorm_j ** 2, 2.0)  # tr(Q o Q) = 2 |q|^2
    assert sp.in_cotangent_h(cp)


def test_alpha_rejects_degenerate():
    pt = canonical_point()
    with pytest.raises(ValueError):
        sp.alpha(sp.SphereCovector(pt.p, np.zeros_like(pt.q)))


def test_tau_s_at_canonical_point():
    bt = sp.tau_s(canonical_point())
    assert np.allclose(bt.B[0], np.eye(2))
    assert np.allclose(bt.B[1], 1j * np.eye(2))
    assert np.isclose(bt.norm ** 2, 4.0)
    assert sp.in_btuple_space0(bt)


def test_tau_h_at_canonical_point():
    am = sp.tau_h(sp.alpha(canonical_point()))
    expected = np.zeros((4, 4), dtype=complex)
    expected[:2, :2] = np.eye(2)
    expected[:2, 2:] = 1j * np.eye(2)
    expected[2:, :2] = 1j * np.eye(2)
    expected[2:, 2:] = -np.eye(2)
    assert np.allclose(am.A, expected)
    assert np.isclose(am.norm ** 2, 8.0)
    assert np.abs(am.A @ am.A).max() < 1e-12
    assert sp.in_amatrix_space(am)


def test_beta_matches_tau_h_alpha_on_horizontal(rng):
    for n in (1, 2):
        for _ in range(60):
            pt = sp.random_es0(n, float(rng.uniform(0.3, 2.5)), rng)
            lhs = sp.beta(sp.tau_s(pt)).A
            rhs = sp.tau_h(sp.alpha(pt)).A
            assert np.abs(lhs - rhs).max() <= 1e-10 * fro_norm(rhs)


def test_beta_and_tau_h_alpha_differ_off_horizontal(rng):
    pt = sp.random_es_generic(1, rng)
    lhs = sp.beta(sp.tau_s(pt)).A
    rhs = sp.tau_h(sp.alpha(pt)).A
    assert np.abs(lhs - rhs).max() / fro_norm(rhs) > 1e-3


def test_tau_s_equivariance_under_sp1(rng):
    pt = sp.random_es0(1, 1.3, rng)
    r = sp.random_sphere(3, rng)  # unit quaternion
    from qpquant.algebra import qmul
    pr = qmul(pt.p, np.broadcast_to(r, pt.p.shape))
    qr = qmul(pt.q, np.broadcast_to(r, pt.q.shape))
    lhs = sp.tau_s(sp.SphereCovector(pr, qr)).B
    g = sp.rho(np.asarray(r, dtype=complex)) if hasattr(sp, "rho") else None
    from qpquant.algebra import rho
    rhs = sp.tau_s(pt).B @ rho(np.asarray(r, dtype=complex))
    assert np.abs(lhs - rhs).max() < 1e-12 * np.abs(rhs).max()


def test_beta_is_sl2_invariant(rng):
    pt = sp.random_es0(1, 0.8, rng)
    bt = sp.tau_s(pt)
    for _ in range(20):
        g = sp.random_sl2(rng)
        moved = sp.BTuple(bt.B @ g)
        assert np.abs(sp.beta(moved).A - sp.beta(bt).A).max() < 1e-10 * fro_norm(sp.beta(bt).A)


def test_norm_chain(rng):
    for _ in range(200):
        n = int(rng.integers(1, 3))
        t = float(rng.uniform(0.2, 3.0))
        pt = sp.random_es0(n, t, rng)
        bt = sp.tau_s(pt)
        cp = sp.alpha(pt)
        am = sp.tau_h(cp)
        nq2 = float(np.sum(pt.q ** 2))
        assert np.isclose(bt.norm ** 2, 4 * nq2, rtol=1e-12)
        assert np.isclose(cp.qnorm_j ** 2, 2 * nq2, rtol=1e-12)
        assert np.isclose(am.norm ** 2, 2 * cp.qnorm_j ** 4, rtol=1e-12)
        assert np.isclose(am.norm, bt.norm ** 2 / np.sqrt(2.0), rtol=1e-12)
        # Q^3 = ||Q||^2 Q / 2
        q3 = qmat_mul(qmat_mul(cp.Q, cp.Q), cp.Q)
        assert np.abs(q3 - 0.5 * cp.qnorm_j ** 2 * cp.Q).max() < 1e-12 * cp.qnorm_j ** 3
        # metric through the fibration: g_H(Q, Q) = |q|^2
        assert np.isclose(sp.metric_g_h(cp.Q, cp.Q), nq2, rtol=1e-12)


def test_memberships_reject_perturbations(rng):
    pt = sp.random_es0(1, 1.0, rng)
    bt, cp = sp.tau_s(pt), sp.alpha(pt)
    am = sp.tau_h(cp)
    assert sp.in_sphere_covector0(pt) and sp.in_btuple_space0(bt)
    assert sp.in_cotangent_h(cp) and sp.in_amatrix_space(am)

    bad_p = pt.p.copy()
    bad_p[0, 0] += 1e-3
    assert not sp.in_sphere_covector0(sp.SphereCovector(bad_p, pt.q))
    bad_q = pt.q + 1e-3 * pt.p
    assert not sp.in_sphere_covector0(sp.SphereCovector(pt.p, bad_q))

    bad_b = bt.B.copy()
    bad_b[0, 0, 0] += 1e-3
    assert not sp.in_btuple_space(sp.BTuple(bad_b))

    bad_Q = cp.Q.copy()
    bad_Q[0, 0, 1] += 1e-3
    assert not sp.in_cotangent_h(sp.CotangentPointH(cp.P, bad_Q))

    bad_a = am.A.copy()
    bad_a[0, 1] += 1e-3
    assert not sp.in_amatrix_space(sp.AMatrix(bad_a))


def test_tau_s_inverse_round_trip(rng):
    pt = canonical_point()
    rec = sp.tau_s_inv(sp.BTuple(np.stack([np.eye(2), 1j * np.eye(2)]).astype(complex)))
    assert np.allclose(rec.p, pt.p) and np.allclose(rec.q, pt.q)
    for _ in range(300):
        n = int(rng.integers(1, 3))
        src = sp.random_es0(n, float(rng.uniform(0.2, 2.0)), rng)
        rec = sp.tau_s_inv(sp.tau_s(src))
        assert np.abs(rec.p - src.p).max() < 1e-12
        assert np.abs(rec.q - src.q).max() < 1e-12
    with pytest.raises(ValueError):
        sp.tau_s_inv(sp.BTuple(np.zeros((2, 2, 2), dtype=complex)))


def test_tau_h_inverse_round_trip(rng):
    for _ in range(100):
        src = sp.alpha(sp.random_es0(1, float(rng.uniform(0.3, 2.0)), rng))
        rec = sp.tau_h_inv(sp.tau_h(src))
        assert np.abs(rec.P - src.P).max() < 1e-11
        assert np.abs(rec.Q - src.Q).max() < 1e-11


def test_sampler_constraints(rng):
    pt = sp.random_es0(1, 1.0, rng)
    assert abs(float(np.sum(pt.p ** 2)) - 1.0) < 1e-14
    assert np.max(np.abs(hinner(pt.q, pt.p))) < 1e-14
    cp = sp.alpha(pt)
    assert sp.in_cotangent_h(cp)


def test_sphere_sampler_moments(rng):
    from qpquant.numerics import sphere_uniform
    pts = sphere_uniform(7, rng, size=200_000)
    mean = pts.mean(axis=0)
    se = pts.std(axis=0) / np.sqrt(len(pts))
    assert np.all(np.abs(mean) <= 3.5 * se + 1e-12)
    second = (pts[:, 0] ** 2).mean()
    se2 = (pts[:, 0] ** 2).std() / np.sqrt(len(pts))
    assert abs(second - 1.0 / 8.0) <= 3.5 * se2
    assert np.abs(np.linalg.norm(pts, axis=1) - 1.0).max() < 1e-12


def test_json_round_trip(rng):
    pt = sp.random_es0(2, 0.9, rng)
    for obj in (pt, sp.alpha(pt), sp.tau_s(pt), sp.tau_h(sp.alpha(pt))):
        rec = sp.point_from_json(sp.point_to_json(obj))
        for field in obj.__dataclass_fields__:
            assert np.allclose(getattr(obj, field), getattr(rec, field))
