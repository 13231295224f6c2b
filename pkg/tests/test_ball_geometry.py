import numpy as np
import pytest

from holoball.ball import (
    KobayashiBallSpec,
    axis_projection_distance,
    distance_to_sample_set,
    in_kobayashi_ball,
    kobayashi_distance,
    sample_kobayashi_ball,
    special_projection_norm,
    translate,
)
from holoball.points import (
    DimensionError,
    DomainError,
    as_point,
    check_interior,
    e1,
    hermitian_inner,
    is_interior,
    norm,
    project_axis,
)

LOG3 = 0.5 * np.log(3.0)


def test_hermitian_inner():
    assert hermitian_inner(e1(2), e1(2)) == 1
    assert hermitian_inner([1j, 0], [0, 1]) == 0
    assert hermitian_inner([0.6, 0.3], [0.6, 0.3]) == pytest.approx(0.45, abs=1e-15)


def test_hermitian_inner_conjugates_second_argument():
    assert hermitian_inner([1j, 0], [1, 0]) == pytest.approx(1j)
    assert hermitian_inner([1, 0], [1j, 0]) == pytest.approx(-1j)


def test_as_point_rejects_bad_input():
    with pytest.raises(DimensionError):
        as_point([])
    with pytest.raises(ValueError):
        as_point([np.nan, 0])


def test_interior_guard():
    assert is_interior([0.5, 0.5])
    assert not is_interior([1.0, 0.0])
    assert not is_interior([1 - 1e-16, 0.0])
    with pytest.raises(DomainError):
        check_interior([0.8, 0.8])


def test_kobayashi_distance_examples():
    assert kobayashi_distance(np.zeros(2), 0.5 * e1(2)) == pytest.approx(LOG3, abs=1e-15)
    a = np.array([0.3, 0.2j])
    assert kobayashi_distance(a, a) == pytest.approx(0.0, abs=1e-15)
    a = np.array([0.6, 0.3])
    expected = 0.5 * np.log(1.375 / 0.625)
    assert kobayashi_distance(a, project_axis(a)) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.394228, abs=1e-6)


def test_kobayashi_distance_rejects_exterior():
    with pytest.raises(DomainError):
        kobayashi_distance(np.zeros(2), e1(2))


def test_special_projection_norm():
    assert special_projection_norm(0.7 * e1(2)) == 0
    assert special_projection_norm([0.6, 0.3]) == pytest.approx(0.140625, abs=1e-15)
    assert special_projection_norm([0, 0.5]) == pytest.approx(0.25, abs=1e-15)


def test_translate_defining_properties():
    a = np.array([0.6, 0.3])
    assert norm(translate(a, a)) == pytest.approx(0.0, abs=1e-15)
    assert norm(translate(a, project_axis(a))) == pytest.approx(0.375, abs=1e-14)
    z = np.array([0.1, -0.2j])
    assert np.allclose(translate(np.zeros(2), z), -z)


def test_kobayashi_ball_membership():
    origin = KobayashiBallSpec(np.zeros(2), LOG3)
    assert in_kobayashi_ball(origin, 0.49 * e1(2))
    assert not in_kobayashi_ball(origin, 0.51 * e1(2))
    assert in_kobayashi_ball(KobayashiBallSpec(0.5 * e1(2), 0.1), 0.5 * e1(2))


def test_distance_to_sample_set():
    assert distance_to_sample_set(np.zeros(2), [np.zeros(2)]) == 0
    d = distance_to_sample_set(np.zeros(2), [0.5 * e1(2), 0.9 * e1(2)])
    assert d == pytest.approx(LOG3, abs=1e-15)
    z = 0.5 * e1(2)
    assert distance_to_sample_set(z, [project_axis(z)]) == 0


def test_sample_kobayashi_ball_radius():
    rng = np.random.default_rng(3)
    centre = np.array([0.7, 0.2j])
    pts, _ = sample_kobayashi_ball(centre, 0.4, 500, rng)
    d = kobayashi_distance(centre, pts)
    assert np.all(d < 0.4)
    assert d.max() > 0.3


def test_axis_projection_distance_matches_formula():
    z = np.array([[0.6, 0.3], [0.2, 0.0]])
    d = axis_projection_distance(z)
    assert d[0] == pytest.approx(0.5 * np.log(1.375 / 0.625), abs=1e-12)
    assert d[1] == 0
