import numpy as np
import pytest

from holoball.automorphisms import (
    HyperbolicAutomorphism,
    LinearFractionalMap,
    MobiusTranslation,
    ParabolicAutomorphism,
    boundary_ratio,
    cayley,
    cayley_inverse,
    identity_map,
    in_siegel,
    normalized_radius,
    normalizing_parabolic,
    random_unitary,
)
from holoball.ball import kobayashi_distance
from holoball.maps import random_ball_points
from holoball.points import DomainError, axis_point, e1

T_HALF_LOG3 = 0.5 * np.log(3.0)


def test_mobius_translation_examples():
    z = np.array([0.3, -0.1j])
    assert np.allclose(MobiusTranslation(np.zeros(2)).apply(z), -z)
    a = np.array([0.6, 0.3])
    assert np.allclose(MobiusTranslation(a).apply(a), 0, atol=1e-15)
    assert np.linalg.norm(MobiusTranslation(a).apply([0.6, 0])) == pytest.approx(0.375, abs=1e-14)


def test_mobius_translation_is_involution():
    a = np.array([0.4, 0.2 + 0.1j])
    T = MobiusTranslation(a)
    z = np.array([-0.1, 0.5j])
    assert np.allclose(T.apply(T.apply(z)), z, atol=1e-14)


def test_hyperbolic_examples():
    phi = HyperbolicAutomorphism(T_HALF_LOG3, 2)
    assert np.allclose(phi.apply(np.zeros(2)), [0.5, 0], atol=1e-15)
    for t in (-2.0, 0.3, 1.0):
        assert np.allclose(HyperbolicAutomorphism(t, 3).apply(e1(3)), e1(3), atol=1e-15)
    assert phi.jacobian_det(np.zeros(2)) == pytest.approx((np.sqrt(3) / 2) ** 3, abs=1e-15)
    assert (np.sqrt(3) / 2) ** 3 == pytest.approx(0.649519, abs=1e-6)


def test_hyperbolic_det_agrees_with_generic_matrix_formula():
    phi = HyperbolicAutomorphism(0.8, 3)
    z = np.array([0.2, 0.1j, -0.3])
    assert LinearFractionalMap.jacobian_det(phi, z) == pytest.approx(phi.jacobian_det(z), rel=1e-12)


def test_hyperbolic_dilation():
    for t in (-2.0, -1.0, -0.25, 0.25, 1.0, 2.0):
        phi = HyperbolicAutomorphism(t, 2)
        r = 1 - 2.0**-30
        q = (1 - np.linalg.norm(phi.apply(axis_point(r, 2)))) / (1 - r)
        assert q == pytest.approx(np.exp(-2 * t), rel=1e-4)
        assert phi.boundary_dilation == pytest.approx(np.exp(-2 * t))


def test_cayley_examples():
    assert np.allclose(cayley(np.zeros(2)), [1, 0])
    assert np.allclose(cayley(0.5 * e1(2)), [3, 0])
    assert np.allclose(cayley_inverse(np.array([1, 0])), 0)
    assert np.allclose(cayley_inverse(np.array([3, 0])), [0.5, 0])


def test_cayley_round_trip():
    z = random_ball_points(10_000, 3, np.random.default_rng(0))
    assert np.max(np.linalg.norm(cayley_inverse(cayley(z)) - z, axis=-1)) < 1e-12
    assert np.all(in_siegel(cayley(z)))


def test_cayley_inverse_boundary_guard():
    with pytest.raises(DomainError):
        cayley_inverse(np.array([0.25 + 1e-16, 0.5]))


def test_parabolic_identity_case():
    T = ParabolicAutomorphism(np.zeros(1), 0.0)
    z = np.array([0.3, 0.4j])
    assert np.allclose(T.apply(z), z, atol=1e-15)


def test_parabolic_fixes_e1_and_agrees_with_cayley_route():
    rng = np.random.default_rng(1)
    T = ParabolicAutomorphism(np.array([0.3 + 0.1j]), 0.5, random_unitary(1, rng))
    z = random_ball_points(50, 2, rng, 0.9)
    assert np.allclose(T.apply(z), T.apply_via_cayley(z), atol=1e-12)
    assert np.allclose(LinearFractionalMap.apply(T, e1(2)), e1(2), atol=1e-14)


def test_normalizing_parabolic_examples():
    z0 = np.array([0.5, 0.3])
    R = 0.25 / 0.66
    assert boundary_ratio(z0) == pytest.approx(R, abs=1e-15)
    assert np.allclose(normalizing_parabolic(z0).apply(z0), [(1 - R) / (1 + R), 0], atol=1e-14)
    assert (1 - R) / (1 + R) == pytest.approx(0.450549, abs=1e-6)
    z0 = 0.5 * e1(2)
    assert normalized_radius(z0) == pytest.approx(0.5)
    assert np.allclose(normalizing_parabolic(z0).apply(z0), z0, atol=1e-15)


def test_parabolic_radial_determinant():
    T = ParabolicAutomorphism(np.array([0.3 + 0.1j]), 0.5)
    prev = np.inf
    for k in (10, 20, 30, 40):
        err = abs(T.jacobian_det(axis_point(1 - 2.0**-k, 2)) - 1)
        assert err < prev
        prev = err
    assert prev < 1e-10


def test_parabolic_radial_determinant_general_unitary():
    rng = np.random.default_rng(2)
    U = random_unitary(2, rng)
    T = ParabolicAutomorphism(np.array([0.2, -0.1j]), -0.3, U)
    assert T.jacobian_det(axis_point(1 - 2.0**-40, 3)) == pytest.approx(np.linalg.det(U), abs=1e-10)


def test_identity_det():
    assert identity_map(3).jacobian_det(np.array([0.1, 0.2, 0.3])) == pytest.approx(1)


def test_isometry_and_inverse():
    rng = np.random.default_rng(4)
    a, b = random_ball_points(2, 2, rng, 0.95)
    for aut in (MobiusTranslation([0.2, 0.5j]), HyperbolicAutomorphism(1.3, 2),
                ParabolicAutomorphism(np.array([0.4j]), -1.0)):
        fa, fb = LinearFractionalMap.apply(aut, a), LinearFractionalMap.apply(aut, b)
        assert kobayashi_distance(fa, fb) == pytest.approx(kobayashi_distance(a, b), abs=1e-10)
        back = LinearFractionalMap.apply(aut.inverse(), fa)
        assert np.allclose(back, a, atol=1e-12)
