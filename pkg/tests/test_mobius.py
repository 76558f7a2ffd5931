import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from alphasphere import (
    DegenerateMatrixError,
    GRAD_LOG_CHI_L2_REGIME_CONSTANT,
    MobiusElement,
    SpherePoint,
    StereoPoint,
    chi,
    chi_values,
    grad_log_chi,
    grad_log_chi_l2_bound,
    mobius_apply,
    mobius_svd,
    norm_grad_log_chi_L2,
    sphere_to_stereo,
    stereo_to_sphere,
)


finite_c = st.complex_numbers(min_magnitude=0.0, max_magnitude=5.0,
                              allow_nan=False, allow_infinity=False)


def su2(z1, z2):
    n = math.sqrt(abs(z1) ** 2 + abs(z2) ** 2)
    z1, z2 = z1 / n, z2 / n
    return MobiusElement(z1, -z2.conjugate(), z2, z1.conjugate())


def random_element(rng, lam_max=10.0):
    lam = math.exp(rng.uniform(0.0, math.log(lam_max)))
    u = su2(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
    v = su2(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)))
    return u @ MobiusElement.dilation(lam) @ v


# ---------------------------------------------------------------- charts

def test_stereo_to_sphere_named_points():
    assert stereo_to_sphere(StereoPoint(0.0, 0.0)) == SpherePoint(0.0, 0.0, -1.0)
    p = stereo_to_sphere(StereoPoint(1.0, 0.0))
    assert abs(p.x - 1.0) < 1e-15 and abs(p.y) < 1e-15 and abs(p.z) < 1e-15
    assert stereo_to_sphere(StereoPoint.infinity()) == SpherePoint(0.0, 0.0, 1.0)


def test_sphere_to_stereo_named_points():
    assert sphere_to_stereo(SpherePoint(0.0, 0.0, -1.0)).zeta == 0.0
    assert abs(sphere_to_stereo(SpherePoint(1.0, 0.0, 0.0)).zeta - 1.0) < 1e-15
    assert sphere_to_stereo(SpherePoint(0.0, 0.0, 1.0)).at_infinity


def test_round_trip_on_random_points():
    rng = np.random.default_rng(0)
    v = rng.normal(size=(1000, 3))
    v /= np.linalg.norm(v, axis=1)[:, None]
    for x, y, z in v:
        q = SpherePoint(float(x), float(y), float(z))
        back = stereo_to_sphere(sphere_to_stereo(q))
        assert abs(back.x - q.x) < 1e-12
        assert abs(back.y - q.y) < 1e-12
        assert abs(back.z - q.z) < 1e-12


def test_sphere_point_rejects_off_sphere():
    with pytest.raises(ValueError):
        SpherePoint(1.0, 1.0, 1.0)


# ---------------------------------------------------------------- action

def test_apply_identity_and_dilation():
    p = StereoPoint(0.3, -0.7)
    assert mobius_apply(MobiusElement.identity(), p).zeta == p.zeta
    lam = 3.7
    out = mobius_apply(MobiusElement.dilation(lam), p)
    assert abs(out.zeta - lam * p.zeta) < 1e-14


def test_apply_pole_and_infinity():
    m = MobiusElement(0.0, 1.0, -1.0, 0.0)  # zeta -> -1/zeta
    assert mobius_apply(m, StereoPoint(0.0, 0.0)).at_infinity
    out = mobius_apply(m, StereoPoint.infinity())
    assert abs(out.zeta - 0.0) < 1e-15
    assert mobius_apply(MobiusElement.dilation(2.0), StereoPoint.infinity()).at_infinity


@settings(max_examples=80, deadline=None)
@given(finite_c, finite_c, finite_c, finite_c)
def test_group_law(w1, w2, w3, w4):
    rng = np.random.default_rng(abs(hash((w1, w2, w3, w4))) % 2 ** 31)
    m1 = random_element(rng)
    m2 = random_element(rng)
    z = StereoPoint(float(w1.real) / 5.0, float(w2.imag) / 5.0)
    lhs = mobius_apply(m1, mobius_apply(m2, z))
    rhs = mobius_apply(m1 @ m2, z)
    if lhs.at_infinity or rhs.at_infinity:
        assert lhs.at_infinity == rhs.at_infinity
    else:
        assert abs(lhs.zeta - rhs.zeta) <= 1e-10 * (1.0 + abs(rhs.zeta))


def test_compose_inverse():
    rng = np.random.default_rng(5)
    m = random_element(rng)
    r = m @ m.inverse()
    assert abs(r.a - 1.0) < 1e-12 and abs(r.d - 1.0) < 1e-12
    assert abs(r.b) < 1e-12 and abs(r.c) < 1e-12


# ------------------------------------------------------------------- svd

def test_svd_su2_degenerate_branch():
    m = su2(complex(0.6, 0.3), complex(-0.2, 0.9))
    sv = mobius_svd(m)
    assert sv.lam == 1.0
    assert sv.U is m
    assert np.allclose(sv.V.matrix(), np.eye(2))


def test_svd_diagonal_case():
    sv = mobius_svd(MobiusElement.dilation(4.0))  # diag(2, 1/2)
    assert abs(sv.lam - 4.0) < 1e-12
    assert np.allclose(np.abs(sv.U.matrix()), np.eye(2), atol=1e-12)
    assert np.allclose(np.abs(sv.V.matrix()), np.eye(2), atol=1e-12)


def test_svd_reconstruction_and_eigen_oracle():
    rng = np.random.default_rng(17)
    for _ in range(1000):
        vals = rng.normal(size=8)
        m = MobiusElement.normalized(complex(vals[0], vals[1]),
                                     complex(vals[2], vals[3]),
                                     complex(vals[4], vals[5]),
                                     complex(vals[6], vals[7]))
        sv = mobius_svd(m)
        A = m.matrix()
        err = min(np.max(np.abs(sv.reconstruct() - A)),
                  np.max(np.abs(sv.reconstruct() + A)))
        assert err < 1e-10
        # oracle: larger eigenvalue of M M* from an independent routine
        lam_oracle = float(np.max(np.linalg.eigvalsh(A @ A.conj().T)))
        assert abs(sv.lam - lam_oracle) < 1e-10 * lam_oracle
        assert sv.lam >= 1.0
        for q in (sv.U, sv.V):
            assert np.max(np.abs(q.matrix() @ q.matrix().conj().T - np.eye(2))) < 1e-10
            assert abs(q.det() - 1.0) < 1e-10


def test_svd_rejects_degenerate():
    m = MobiusElement.identity()
    object.__setattr__(m, "a", 2.0 + 0j)
    with pytest.raises(DegenerateMatrixError):
        mobius_svd(m)
    with pytest.raises(DegenerateMatrixError):
        MobiusElement(1.0, 0.0, 0.0, 2.0)
    with pytest.raises(DegenerateMatrixError):
        MobiusElement.normalized(1.0, 0.0, 0.0, 0.0)


def test_normalized_hits_unit_determinant():
    m = MobiusElement.normalized(3.0 + 1j, 2.0, -1j, 0.5)
    assert abs(m.det() - 1.0) < 1e-12


# ------------------------------------------------------------------- chi

def test_chi_values():
    assert abs(chi(1.0, StereoPoint(0.4, 2.0)) - 1.0) < 1e-15
    assert abs(chi(3.0, StereoPoint(0.0, 0.0)) - 1.0 / 9.0) < 1e-15
    assert chi(5.0, StereoPoint.infinity()) == 25.0


def test_chi_sup_is_lam_squared():
    lam = 5.0
    rs = np.linspace(0.0, 50.0, 20001)
    vals = chi_values(lam, rs.astype(complex))
    assert np.all(vals > 0.0)
    assert abs(np.max(vals) - lam * lam) < 1e-2 * lam * lam
    assert np.max(vals) <= lam * lam * (1.0 + 1e-12)


def test_grad_log_chi_trivial_and_fd():
    assert grad_log_chi(1.0, 0.7) == 0.0
    assert grad_log_chi(4.0, 0.0) == 0.0
    rng = np.random.default_rng(2)
    for _ in range(50):
        lam = math.exp(rng.uniform(0.0, 3.0))
        r = rng.uniform(0.01, 5.0)
        d = 1e-6 * max(1.0, r)
        fd = (math.log(chi(max(lam, 1.0), StereoPoint(r + d, 0.0)))
              - math.log(chi(max(lam, 1.0), StereoPoint(r - d, 0.0)))) / (2.0 * d)
        assert abs(grad_log_chi(lam, r) - fd) < 1e-6 * max(1.0, abs(fd))


def test_grad_log_chi_nonnegative():
    rs = np.linspace(0.0, 30.0, 500)
    assert np.all(grad_log_chi(7.0, rs) >= 0.0)


# -------------------------------------------------- grad log chi L2 norm

def test_norm_grad_log_chi_trivial_and_regression():
    assert norm_grad_log_chi_L2(1.0) == 0.0
    # frozen high-precision quadrature of the radial integral
    assert abs(norm_grad_log_chi_L2(10.0) - 19.973008756044330617) < 1e-9


def test_norm_grad_log_chi_bound_at_e():
    v = norm_grad_log_chi_L2(math.e)
    cap = (4.0 * math.sqrt(8.0 * math.pi) * ((math.e + 1.0) / math.e)
           * ((math.e - 1.0) / math.e) * math.sqrt(11.0 / 8.0))
    assert v <= cap
    assert abs(grad_log_chi_l2_bound(math.e) - cap) < 1e-12


def test_norm_grad_log_chi_two_regime_envelope():
    for lam in np.exp(np.linspace(0.0, 10.0, 25)):
        v = norm_grad_log_chi_L2(float(lam))
        assert v <= grad_log_chi_l2_bound(float(lam)) + 1e-12
        if lam > 1.0:
            t = math.log(lam)
            env = t if t <= 1.0 else math.sqrt(t)
            assert v <= GRAD_LOG_CHI_L2_REGIME_CONSTANT * env


def test_quadrature_non_convergence_raises():
    from alphasphere import QuadratureConvergenceError
    with pytest.raises(QuadratureConvergenceError):
        norm_grad_log_chi_L2(40.0, rel_tol=1e-30)
