import numpy as np
import pytest

from holoball.ball import kobayashi_distance
from holoball.coverage import (
    admissible_coverage_check,
    ball_sandwich_check,
    coverage_check,
    curve_distance_suite,
    obstruction_target,
    restrict_to_ball,
)
from holoball.gallery import get_map
from holoball.koebe import KoebeProbe, koebe_radius_probe, quadratic_family_map
from holoball.newton import newton_preimage, solve_preimage
from holoball.points import DomainError, e1
from holoball.renormalize import build_renormalized, renorm_determinant_bound, renorm_grid

S_LIST = [0.5 * 2.0**-m for m in range(6)]


def test_newton_half_shrink():
    res = newton_preimage(get_map("half_shrink"), np.array([0.95, 0.01]), np.array([0.9, 0]))
    assert res.converged and res.interior
    assert np.allclose(res.z, [0.95, 0.02], atol=1e-12)


def test_newton_identity_single_step():
    w = np.array([0.3, 0.2j])
    res = newton_preimage(get_map("identity"), w, w)
    assert res.converged and res.iterations <= 1


def test_newton_thin_sq_obstruction():
    w = obstruction_target(0.05)
    assert np.allclose(w, [0.95, 0.025])
    f = get_map("thin_sq")
    assert np.allclose(f.inverse(w), [0.95, 40])
    res, route = solve_preimage(f, w, 0.95 * e1(2))
    assert route == "failed" or not res.interior


def test_newton_seed_guard():
    with pytest.raises(DomainError):
        newton_preimage(get_map("identity"), np.zeros(2), e1(2))


def test_renormalized_identity():
    f = get_map("identity")
    for zeta in (0.9, 0.95 + 0.02j):
        g = build_renormalized(f, zeta, 2.0, 0.2)
        assert np.linalg.norm(g(np.zeros(2))) < 1e-12
        assert abs(g.chain_det()) == pytest.approx(1, abs=1e-9)
    g = build_renormalized(f, 0.9, 2.0, 0.2)
    assert np.cosh(g.t1) / np.cosh(g.t0) == pytest.approx(1, abs=1e-14)


def test_renormalized_hyperbolic():
    f = get_map("hyperbolic")
    rep = renorm_determinant_bound(f, 2.0, 0.1, renorm_grid(2.0, 0.1))
    assert rep.max_g0 < 1e-8
    assert rep.max_chain_error < 1e-6


def test_renormalized_half_shrink_floor():
    rep = renorm_determinant_bound(get_map("half_shrink"), 2.0, 0.1, [1 - 2.0**-6])
    assert abs(rep.records[0].chain_det) >= rep.c_second
    rep = renorm_determinant_bound(get_map("half_shrink"), 2.0, 0.1,
                                   [1 - 2.0**-k for k in range(4, 13)])
    assert rep.chain_steps_hold and rep.bound_holds and rep.floor_holds
    assert all(r.ratio >= (rep.c_prime) ** (1 / 3) * (1 - 1e-9) for r in rep.records)


def test_renormalized_secant_law():
    rep = renorm_determinant_bound(get_map("half_shrink"), 2.0, 0.1, renorm_grid(2.0, 0.1))
    assert rep.secant_law_error < 1e-9
    assert rep.floors_hold_radial
    assert not rep.floors_hold


def test_renorm_rejects_outside_stolz():
    with pytest.raises(ValueError):
        build_renormalized(get_map("identity"), 0.5, 2.0, 0.1)


def test_koebe_identity():
    probe = KoebeProbe(1.0, 0.5, [get_map("identity")])
    assert koebe_radius_probe(probe, 8) == pytest.approx(0.5, abs=1e-3)


def test_koebe_nested_families():
    maps = [get_map("identity")]
    radii = []
    for lam in (2 / 3, 0.5, 0.3):
        maps.append(quadratic_family_map(lam))
        c = min(abs(f.jacobian_det(np.zeros(2))) for f in maps)
        radii.append(koebe_radius_probe(KoebeProbe(c, 0.5, list(maps)), 8))
    assert min(radii) > 0
    assert all(b <= a for a, b in zip(radii, radii[1:]))


def test_koebe_rejects_unnormalized():
    with pytest.raises(ValueError):
        KoebeProbe(0.1, 0.5, [get_map("hyperbolic")])


def test_curve_distance():
    for gid in ("identity", "thin_sq"):
        rep = curve_distance_suite(get_map(gid), 2.0, 0.5, S_LIST)
        assert max(rep.max_distance) == pytest.approx(0, abs=1e-12)
    rep = curve_distance_suite(get_map("hyperbolic"), 2.0, 0.5, S_LIST)
    assert rep.monotone
    assert rep.max_distance[-1] < rep.max_distance[0]


@pytest.mark.parametrize("gid", ["identity", "half_shrink"])
def test_coverage_positive(gid):
    rep = coverage_check(get_map(gid), 2.0, 0.125, 0.1, 0.3, 5, 20, seed=1)
    assert rep.hit_ratio == 1.0
    assert rep.max_recheck < 1e-9
    for rec in rep.records:
        assert np.allclose(rec.preimage, get_map(gid).inverse(rec.target), atol=1e-8)


def test_coverage_thin_sq():
    f = get_map("thin_sq")
    rep = coverage_check(f, 2.0, 0.125, 0.1, 0.3, 5, 20, seed=1,
                         extra_targets=[(obstruction_target(), 0.95)])
    assert rep.hit_ratio < 0.9
    ex = rep.extra_records[0]
    assert kobayashi_distance(f(0.95 * e1(2)), ex.target) < 0.1
    assert not ex.hit and not ex.oracle_in_ball


def test_admissible_coverage():
    rep = admissible_coverage_check(get_map("half_shrink"), "cone", 0.3, [0.05, 0.01], seed=2)
    assert rep.smallest_delta_fraction == 1.0
    # preimages of radial points sit at about e^2 delta from e1
    rep = admissible_coverage_check(get_map("hyperbolic"), "radial", 0.3, [0.02, 0.01], seed=2)
    assert rep.fractions == [1.0, 1.0]
    rep = admissible_coverage_check(get_map("thin_sq"), "cone", 0.3, [0.2, 0.05, 0.01], seed=2)
    assert max(rep.fractions) < 1


def test_sandwich():
    for gid in ("identity", "half_shrink"):
        rep = ball_sandwich_check(get_map(gid), 0.5 * e1(2), 0.5, 0.3, [0.1, 0.02], seed=3)
        assert rep.fraction == 1.0 and rep.lifted_in_eta
    with pytest.raises(ValueError):
        restrict_to_ball(get_map("identity"), np.array([0.5, 0.01]), 0.5)
