"""Curve-distance estimates and Kobayashi-ball coverage checks near ``e1``.

Coverage is certified pointwise: random targets in the Kobayashi balls
``B_k(f(zeta e1), r)`` are pulled back with Newton's method and a target
counts as a hit only when its preimage lies in ``B(e1, eta)`` and
reproduces the target on re-evaluation.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .ball import kobayashi_distance, sample_kobayashi_ball
from .maps import HoloMap, dilation_estimate
from .newton import DEFAULT_TOL, solve_preimage
from .points import as_point, axis_point, e1, is_interior, norm, project_axis
from .regions import (
    AdmissibleWitness,
    StolzSpec,
    admissibility_check,
    in_stolz,
    sample_cone,
    sample_radial,
    sample_tangential_curve,
    stolz_aperture,
    stolz_grid,
)

OBSTRUCTION_D = 0.05


def obstruction_target(d=OBSTRUCTION_D, n=2):
    """``w = (1 - d, d/2)``: its ``thin_sq`` preimage needs ``z2 = 2/d``."""
    w = np.zeros(n, dtype=complex)
    w[0] = 1.0 - d
    w[1] = d / 2.0
    return w


# curve distance

@dataclass
class CurveDistanceReport:
    M: float
    t: float
    s_list: list
    max_distance: list
    probe_counts: list
    curve_size: int
    per_octave: int
    curve_rays: int
    probe_rays: int
    tol: float = 1e-6

    @property
    def monotone(self):
        """Non-increasing as ``s`` decreases, up to ``tol``."""
        order = np.argsort(self.s_list)[::-1]
        d = np.asarray(self.max_distance)[order]
        return bool(np.all(np.diff(d) <= self.tol))

    def below(self, eps):
        return bool(self.max_distance[int(np.argmin(self.s_list))] < eps)


def curve_distance_suite(f, M, t, s_list, probe_rays=5, probe_depth=12,
                         per_octave=16, ray_factor=13, curve_depth=None):
    """Max over ``z`` in ``K(M, s) e1`` of ``k(z, f(K(M, t) e1))`` for each ``s``.

    Probes are the grid points ``1 - t 2^-j e^{i theta}`` (``j = 1..probe_depth``)
    inside ``K(M, s)``, so the probe sets are nested in ``s``.  The curve is
    sampled on a grid ``per_octave`` times finer in radius and ``ray_factor``
    (odd) times finer in angle that contains every probe angle.
    """
    if ray_factor % 2 != 1:
        raise ValueError("ray_factor must be odd so probe rays are curve rays")
    if not dilation_estimate(f).finite:
        raise ValueError("e1 is not a boundary regular fixed point candidate")
    curve_depth = probe_depth + 4 if curve_depth is None else curve_depth
    curve_zeta, _ = stolz_grid(StolzSpec(M, t), curve_depth, probe_rays * ray_factor, per_octave)
    curve = f(axis_point(curve_zeta, f.dim))
    probe_zeta, _ = stolz_grid(StolzSpec(M, t), probe_depth, probe_rays)
    probes = axis_point(probe_zeta, f.dim)
    dist = np.array([float(np.min(kobayashi_distance(p, curve))) for p in probes])
    gap = np.abs(1.0 - probe_zeta)
    maxima, counts = [], []
    for s in s_list:
        inside = in_stolz(StolzSpec(M, min(s, 2.0)), probe_zeta) & (gap < s)
        counts.append(int(inside.sum()))
        maxima.append(float(dist[inside].max()) if inside.any() else 0.0)
    return CurveDistanceReport(
        M=M, t=t, s_list=list(s_list), max_distance=maxima, probe_counts=counts,
        curve_size=int(curve.shape[0]), per_octave=per_octave,
        curve_rays=probe_rays * ray_factor, probe_rays=probe_rays,
    )


# coverage of Kobayashi balls

@dataclass
class TargetRecord:
    index: int
    curve_index: int
    zeta: complex
    target: np.ndarray
    seed: np.ndarray
    status: str
    route: str
    preimage: Optional[np.ndarray]
    residual: float
    recheck: float
    in_eta: bool
    hit: bool
    oracle: Optional[np.ndarray] = None
    oracle_in_ball: Optional[bool] = None
    ball_distance: Optional[float] = None


@dataclass
class CoverageReport:
    params: dict
    records: list
    extra_records: list = field(default_factory=list)

    @property
    def hits(self):
        return sum(r.hit for r in self.records)

    @property
    def hit_ratio(self):
        return self.hits / len(self.records) if self.records else 0.0

    @property
    def failures(self):
        return [r for r in self.records + self.extra_records if not r.hit]

    @property
    def max_recheck(self):
        vals = [r.recheck for r in self.records + self.extra_records if r.hit]
        return max(vals) if vals else 0.0

    def exemplars(self, limit=5):
        extra = [r for r in self.extra_records if not r.hit]
        return (extra + [r for r in self.failures if r not in extra])[:limit]


def sample_stolz(M, s, count, rng, octaves=8):
    """Random ``zeta`` in ``K(M, s)``: log-uniform depth, uniform angle."""
    half = stolz_aperture(M)
    out = []
    total = 0
    while total < count:
        rho = s * 2.0 ** (-octaves * rng.random(count))
        theta = rng.uniform(-half, half, count)
        zeta = 1.0 - rho * np.exp(1j * theta)
        zeta = zeta[in_stolz(StolzSpec(M, min(s, 2.0)), zeta)]
        out.append(zeta)
        total += zeta.size
    return np.concatenate(out)[:count]


def _oracle(f, w):
    if f.inverse is None:
        return None, None
    with np.errstate(all="ignore"):
        z = f.inverse(w)
    inside = bool(np.all(np.isfinite(z)) and norm(z) < 1.0)
    return z, inside


def certify(f, w, seed, eta, tol=DEFAULT_TOL, fallback=None):
    """Newton preimage plus the hit test; returns a partially filled record dict."""
    res, route = solve_preimage(f, w, seed, fallback=fallback, tol=tol)
    z = res.z if res.converged else None
    recheck = float(norm(f(z) - w)) if z is not None else float("inf")
    in_eta = bool(z is not None and is_interior(z) and norm(z - e1(f.dim)) < eta)
    hit = bool(res.converged and in_eta and recheck < 10 * tol)
    oracle, oracle_in = _oracle(f, w)
    return dict(
        target=w, seed=as_point(seed), status=res.reason, route=route, preimage=z,
        residual=res.residual, recheck=recheck, in_eta=in_eta, hit=hit,
        oracle=oracle, oracle_in_ball=oracle_in,
    )


def _curve_block(f, j, zeta, r, eta, ball_samples, seed, tol):
    rng = np.random.default_rng([seed, j])
    centre = f(axis_point(zeta, f.dim))
    targets, _ = sample_kobayashi_ball(centre, r, ball_samples, rng)
    start = axis_point(zeta, f.dim)
    previous = None
    out = []
    for i, w in enumerate(targets):
        rec = certify(f, w, start, eta, tol, fallback=previous)
        if rec["hit"]:
            previous = rec["preimage"]
        out.append(TargetRecord(index=j * ball_samples + i, curve_index=j, zeta=zeta, **rec))
    return out


def coverage_check(f, M, s, r, eta, ball_samples, curve_samples, seed, tol=DEFAULT_TOL,
                   extra_targets=None, jobs=1, octaves=8):
    """Pull back random points of ``B_k(f(zeta_j e1), r)`` for random ``zeta_j`` in ``K(M, s)``.

    Curve points come from ``seed``; each curve point draws its targets from
    its own substream ``(seed, j)``, so results do not depend on ``jobs``.
    ``extra_targets`` are ``(w, zeta)`` pairs checked the same way and
    reported separately.
    """
    for name, v in (("r", r), ("eta", eta), ("s", s)):
        if not v > 0:
            raise ValueError(f"{name} must be positive")
    rng = np.random.default_rng(seed)
    zetas = sample_stolz(M, s, curve_samples, rng, octaves)
    tasks = [(j, complex(z)) for j, z in enumerate(zetas)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            blocks = list(pool.map(
                lambda a: _curve_block(f, a[0], a[1], r, eta, ball_samples, seed, tol), tasks))
    else:
        blocks = [_curve_block(f, j, z, r, eta, ball_samples, seed, tol) for j, z in tasks]
    records = [rec for block in blocks for rec in block]
    extras = []
    for k, (w, zeta) in enumerate(extra_targets or []):
        if not in_stolz(StolzSpec(M, min(s, 2.0)), zeta):
            raise ValueError(f"extra target seed zeta = {zeta} is outside K(M, s)")
        w = as_point(w)
        centre = f(axis_point(zeta, f.dim))
        rec = certify(f, w, axis_point(zeta, f.dim), eta, tol)
        dist = float(kobayashi_distance(centre, w))
        extras.append(TargetRecord(index=-(k + 1), curve_index=-1, zeta=complex(zeta), **rec,
                                   ball_distance=dist))
    params = dict(M=M, s=s, r=r, eta=eta, ball_samples=ball_samples,
                  curve_samples=curve_samples, seed=seed, tol=tol)
    return CoverageReport(params=params, records=records, extra_records=extras)


def search_s(f, M, r, eta, ball_samples, curve_samples, seed, s_start=0.5,
             s_floor=2.0**-20, tol=DEFAULT_TOL):
    """Largest dyadic ``s <= s_start`` with hit ratio 1.0, or ``None`` past ``s_floor``."""
    s = s_start
    tried = []
    while s >= s_floor:
        rep = coverage_check(f, M, s, r, eta, ball_samples, curve_samples, seed, tol)
        tried.append((s, rep.hit_ratio))
        if rep.hit_ratio == 1.0:
            return s, tried
        s /= 2.0
    return None, tried


# admissible sets

SAMPLERS = {
    "cone": lambda delta, count, rng, n, M: sample_cone(M, delta, count, rng, n),
    "radial": lambda delta, count, rng, n, M: sample_radial(delta, count, rng, n),
    "tangential": lambda delta, count, rng, n, M: sample_tangential_curve(delta, count, rng, n),
}


@dataclass
class AdmissibleLevel:
    delta: float
    fraction: float
    count: int
    admissible: Optional[bool]
    records: list


@dataclass
class AdmissibleCoverageReport:
    sampler: str
    eta: float
    M: float
    seed: int
    levels: list

    @property
    def fractions(self):
        return [lv.fraction for lv in self.levels]

    @property
    def smallest_delta_fraction(self):
        return min(self.levels, key=lambda lv: lv.delta).fraction


def admissible_coverage_check(f, sampler, eta, delta_list, seed, count=200, M=2.0,
                              witness=None, tol=DEFAULT_TOL):
    """Fraction of sampled ``A n B(e1, delta)`` with certified preimages in ``B(e1, eta)``.

    Newton starts from the target itself, with its axis projection as the
    fallback seed.
    """
    draw = SAMPLERS[sampler] if isinstance(sampler, str) else sampler
    name = sampler if isinstance(sampler, str) else getattr(sampler, "__name__", "custom")
    levels = []
    for i, delta in enumerate(delta_list):
        rng = np.random.default_rng([seed, i])
        pts = draw(delta, count, rng, f.dim, M)
        adm = admissibility_check(witness, pts).passed if witness is not None else None
        recs = []
        for k, w in enumerate(pts):
            rec = certify(f, w, w, eta, tol, fallback=project_axis(w))
            recs.append(TargetRecord(index=k, curve_index=i, zeta=complex(w[0]), **rec))
        frac = sum(r.hit for r in recs) / len(recs)
        levels.append(AdmissibleLevel(delta=float(delta), fraction=frac, count=len(recs),
                                      admissible=adm, records=recs))
    return AdmissibleCoverageReport(sampler=name, eta=eta, M=M, seed=seed, levels=levels)


# ball sandwich

TANGENCY_TOL = 1e-10


def restrict_to_ball(f, center, radius):
    """``g(u) = f(center + radius u)`` on the unit ball."""
    center = as_point(center)
    if not 0 < radius <= 1:
        raise ValueError("inner radius must lie in (0, 1]")
    if norm(center - (1.0 - radius) * e1(center.shape[-1])) > TANGENCY_TOL:
        raise ValueError("inner ball is not internally tangent at e1")
    jac = None
    if f.analytic_jacobian is not None:
        def jac(u):
            return radius * f.analytic_jacobian(center + radius * np.asarray(u))
    inv = None
    if f.inverse is not None:
        def inv(w):
            return (f.inverse(w) - center) / radius
    return HoloMap(
        evaluator=lambda u: f(center + radius * np.asarray(u, dtype=complex)),
        dim=f.dim, analytic_jacobian=jac, gallery_id=f"{f.gallery_id}|B({radius:g})",
        inverse=inv, expected=dict(f.expected),
    )


@dataclass
class SandwichReport:
    center: np.ndarray
    radius: float
    inner: AdmissibleCoverageReport
    lifted_in_eta: bool

    @property
    def fraction(self):
        return self.inner.smallest_delta_fraction


def ball_sandwich_check(f, center, radius, eta, delta_list, seed, sampler="cone",
                        count=200, M=2.0):
    """Coverage for the restriction of ``f`` to an inscribed ball tangent at ``e1``.

    A hit ``u`` for the rescaled map gives the preimage ``center + radius u``
    of ``f``; ``|center + radius u - e1| = radius |u - e1|``, so it stays in
    ``B(e1, eta)``.
    """
    g = restrict_to_ball(f, center, radius)
    inner = admissible_coverage_check(g, sampler, eta, delta_list, seed, count, M)
    center = as_point(center)
    lifted = True
    for lv in inner.levels:
        for rec in lv.records:
            if rec.hit:
                z = center + radius * rec.preimage
                lifted &= bool(norm(z - e1(f.dim)) < eta and norm(f(z) - rec.target) < 10 * DEFAULT_TOL)
    return SandwichReport(center=center, radius=radius, inner=inner, lifted_in_eta=lifted)
