"""Verification suites behind ``holoball suite run``.

Each runner receives a validated ``SuiteConfig`` and a ``Context`` to which
it adds assertions, diagnostics, table rows and notes.  Runners are
deterministic given the config (seed included).
"""

import time
from datetime import datetime, timezone
from fractions import Fraction
from importlib import resources

import numpy as np
import tomli

from . import __version__
from .automorphisms import (
    HyperbolicAutomorphism,
    LinearFractionalMap,
    MobiusTranslation,
    ParabolicAutomorphism,
    cayley,
    cayley_inverse,
    normalized_radius,
    normalizing_parabolic,
    random_unitary,
)
from .ball import (
    axis_projection_distance,
    kobayashi_distance,
    sample_kobayashi_ball,
    special_projection_norm,
    translate,
)
from .config import (
    Param,
    above_one,
    build_config,
    count,
    positive,
    unit_open,
)
from .coverage import (
    admissible_coverage_check,
    ball_sandwich_check,
    coverage_check,
    curve_distance_suite,
    obstruction_target,
    restrict_to_ball,
    search_s,
)
from .gallery import get_map
from .koebe import KoebeProbe, koebe_radius_probe, quadratic_family_map
from .maps import dilation_estimate, jwc_limit_checks, random_ball_points, super_regularity_estimate
from .points import axis_point, e1, norm, project_axis
from .regions import (
    AdmissibleWitness,
    ConeSpec,
    admissibility_check,
    cone_admissibility_margin,
    in_cone,
    lemma_delta,
    sample_cone,
    sample_tangential_curve,
)
from .renormalize import build_renormalized, renorm_determinant_bound, renorm_grid
from .report import Assertion, RunRecord, Table
from .siegel import STANDIN_PHI, SiegelConstruction, sample_siegel, separation_certificate


def _load_registry():
    text = resources.files("holoball").joinpath("registry.toml").read_text(encoding="utf-8")
    return tomli.loads(text)


REGISTRY = _load_registry()


def list_suites():
    return [
        {"name": name, "anchor": entry["anchor"], "description": entry["description"],
         "default_map": entry["default_map"]}
        for name, entry in REGISTRY.items()
    ]


class Context:
    def __init__(self, suite, cfg, mode, jobs):
        self.suite = suite
        self.cfg = cfg
        self.p = cfg.params
        self.mode = mode
        self.jobs = jobs
        self.anchors = REGISTRY[suite].get("anchors", {})
        self.assertions = []
        self.diagnostics = []
        self.table = None
        self.notes = []

    @property
    def expect_pass(self):
        return self.mode == "expect-pass"

    def _make(self, key, name, measured, threshold, verdict):
        return Assertion(name, self.anchors.get(key, REGISTRY[self.suite]["anchor"]),
                         measured, threshold, bool(verdict))

    def check(self, key, name, measured, threshold, verdict):
        self.assertions.append(self._make(key, name, measured, threshold, verdict))

    def diag(self, key, name, measured, threshold, verdict):
        self.diagnostics.append(self._make(key, name, measured, threshold, verdict))

    def columns(self, *names):
        self.table = Table(list(names))
        return self.table


def _vec(z):
    parts = []
    for v in np.atleast_1d(z):
        v = complex(v)
        parts.append(f"{v.real:.6g}" if v.imag == 0 else f"{v.real:.6g}{v.imag:+.6g}i")
    return "(" + ", ".join(parts) + ")"


# exact formulas

def _exact(ctx):
    p, n = ctx.p, ctx.cfg.n
    N, tol = p["samples"], p["tol"]
    rng = np.random.default_rng(ctx.cfg.seed)
    table = ctx.columns("check", "instances", "max_error", "threshold")

    def record(key, name, err):
        table.add(name, N, err, tol)
        ctx.check(key, name, err, tol, err < tol)

    a = random_ball_points(N, n, rng)
    direct = norm(translate(a, project_axis(a))) ** 2
    record("projection", "|T_a(pi a)|^2 = |a - pi a|^2 / (1 - |pi a|^2)",
           float(np.max(np.abs(special_projection_norm(a) - direct))))

    ts = rng.uniform(-3.0, 3.0, N)
    e, zero = e1(n), np.zeros(n, dtype=complex)
    fixed = origin = det = 0.0
    for t in ts:
        phi = HyperbolicAutomorphism(t, n)
        pts = phi.apply(np.stack([e, -e, zero]))
        fixed = max(fixed, norm(pts[0] - e), norm(pts[1] + e))
        origin = max(origin, norm(pts[2] - np.tanh(t) * e))
        generic = LinearFractionalMap.jacobian_det(phi, zero)
        det = max(det, abs(generic * np.cosh(t) ** (n + 1) - 1.0))
    record("hyperbolic_fixed", "Phi_t fixes e1 and -e1", float(fixed))
    record("hyperbolic_origin", "Phi_t(0) = tanh(t) e1", float(origin))
    record("hyperbolic_det", "det dPhi_t at 0 = cosh(t)^-(n+1) (relative)", float(det))

    z0 = random_ball_points(N, n, rng)
    err = 0.0
    for z in z0:
        T = normalizing_parabolic(z)
        err = max(err, norm(T.apply(z) - normalized_radius(z) * e))
    record("parabolic_normalization", "T_z0(z0) = (1 - R)/(1 + R) e1", float(err))

    # the approach error is about |c| (n + 1) (1 - r) / 2, so go deep
    radial = axis_point(1.0 - 2.0**-p["depth"], n)
    shallow = axis_point(1.0 - 2.0**-30, n)
    err = err_u = err_30 = 0.0
    for _ in range(N):
        tail = rng.standard_normal(n - 1) + 1j * rng.standard_normal(n - 1)
        T = ParabolicAutomorphism(tail, rng.uniform(-2.0, 2.0))
        err = max(err, abs(T.jacobian_det(radial) - 1.0))
        err_30 = max(err_30, abs(T.jacobian_det(shallow) - 1.0))
    for _ in range(max(N // 10, 1)):
        tail = rng.standard_normal(n - 1) + 1j * rng.standard_normal(n - 1)
        U = random_unitary(n - 1, rng)
        T = ParabolicAutomorphism(tail, rng.uniform(-2.0, 2.0), U)
        err_u = max(err_u, abs(T.jacobian_det(radial) - np.linalg.det(U)))
    record("parabolic_det", f"parabolic det at (1 - 2^-{p['depth']}) e1 -> 1 (U = id)", float(err))
    ctx.diag("parabolic_det_shallow", "parabolic det at (1 - 2^-30) e1 -> 1 (U = id)",
             float(err_30), tol, err_30 < tol)
    ctx.diag("parabolic_det_unitary", f"parabolic det at (1 - 2^-{p['depth']}) e1 -> det U",
             float(err_u), tol, err_u < tol)

    z = random_ball_points(N, n, rng)
    record("cayley", "cayley_inverse(cayley(z)) = z",
           float(np.max(norm(cayley_inverse(cayley(z)) - z))))


# metric

def _metric(ctx):
    p, n = ctx.p, ctx.cfg.n
    N, tol = p["samples"], p["tol"]
    rng = np.random.default_rng(ctx.cfg.seed)
    table = ctx.columns("check", "instances", "max_error", "threshold")

    def record(key, name, err, thr, count_=N):
        table.add(name, count_, err, thr)
        ctx.check(key, name, err, thr, err < thr)

    a, b, c = (random_ball_points(N, n, rng, p["max_norm"]) for _ in range(3))
    kab, kba = kobayashi_distance(a, b), kobayashi_distance(b, a)
    record("symmetry", "|k(a, b) - k(b, a)|", float(np.max(np.abs(kab - kba))), tol)
    excess = kobayashi_distance(a, c) - kab - kobayashi_distance(b, c)
    record("triangle", "k(a, c) - k(a, b) - k(b, c)", float(max(np.max(excess), 0.0)), tol)

    groups = 100
    per = N // groups
    err = 0.0
    for g in range(groups):
        kind = g % 3
        if kind == 0:
            aut = MobiusTranslation(random_ball_points(1, n, rng, p["max_norm"])[0])
        elif kind == 1:
            aut = HyperbolicAutomorphism(rng.uniform(-2.0, 2.0), n)
        else:
            tail = 0.5 * (rng.standard_normal(n - 1) + 1j * rng.standard_normal(n - 1))
            aut = ParabolicAutomorphism(tail, rng.uniform(-1.0, 1.0), random_unitary(n - 1, rng))
        sl = slice(g * per, (g + 1) * per)
        fa = LinearFractionalMap.apply(aut, a[sl])
        fb = LinearFractionalMap.apply(aut, b[sl])
        err = max(err, float(np.max(np.abs(kobayashi_distance(fa, fb) - kab[sl]))))
    record("invariance", "|k(phi a, phi b) - k(a, b)| over T_a, Phi_t, parabolic", err, tol)

    r = np.linspace(0.0, 0.999, 1000)
    slice_err = np.abs(kobayashi_distance(np.zeros(n), axis_point(r, n))
                       - 0.5 * np.log((1.0 + r) / (1.0 - r)))
    record("slice", "k(0, r e1) = log((1 + r)/(1 - r)) / 2", float(np.max(slice_err)),
           p["slice_tol"], 1000)

    centre = random_ball_points(1, n, rng, p["max_norm"])[0]
    rho = 0.7
    g = rng.standard_normal((1000, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    u = np.tanh(rho) * (g[:, :n] + 1j * g[:, n:])
    pushed = MobiusTranslation(centre).apply(u, check=False)
    record("ball_sampler", "|k(x, T_x(u)) - rho| for |u| = tanh(rho)",
           float(np.max(np.abs(kobayashi_distance(centre, pushed) - rho))), tol, 1000)

    f = get_map(ctx.cfg.map_id, n)
    fa, fb = f(a), f(b)
    gain = float(max(np.max(kobayashi_distance(fa, fb) - kab), 0.0))
    record("schwarz_pick", f"k(f a, f b) - k(a, b) for {f.gallery_id}", gain, tol)


# cone admissibility

def _lemma(ctx):
    p, n = ctx.p, ctx.cfg.n
    rng = np.random.default_rng(ctx.cfg.seed)
    table = ctx.columns("M", "eps", "delta", "samples", "violations", "max_distance",
                        "margin_violations", "smallest_amplitude")
    for M in p["M_list"]:
        for eps in p["eps_list"]:
            delta = lemma_delta(eps, M)
            z = sample_cone(M, delta, p["samples"], rng, n)
            d = axis_projection_distance(z)
            bad = int(np.count_nonzero(d >= eps))
            gap = norm(z - e1(n))
            margin_bad = int(np.count_nonzero(cone_admissibility_margin(ConeSpec(M), z) > M * gap))
            res = admissibility_check(AdmissibleWitness(eps, delta, M), z)
            table.add(M, eps, delta, len(z), bad, float(d.max()), margin_bad, res.smallest_amplitude)
            ctx.check("violations", f"violations of k(z, pi z) < {eps} on C({M})", bad, 0,
                      bad == 0 and res.passed)
            ctx.check("margin", f"margin bound violations on C({M}), eps = {eps}", margin_bad, 0,
                      margin_bad == 0)
    eps, M = p["eps_list"][0], p["M_list"][0]
    delta = lemma_delta(eps, M)
    curve = sample_tangential_curve(delta, 1000, rng, n)
    res = admissibility_check(AdmissibleWitness(eps, delta, M), curve)
    worst = float(np.max(res.distances))
    ctx.check("tangential", "tangential curve (r, 1.2 (1 - r)^(1/2)) is rejected",
              worst, f">= {eps}", not res.passed)
    ctx.notes.append(f"delta(eps, M) = tanh(eps)^2 / M; tangential control max k(z, pi z) = {worst:.6f}")


# JWC limits

def _regular(f, k_max):
    est = dilation_estimate(f, k_max)
    return est, bool(est.finite and est.radial_limit_e1)


def _jwc(ctx):
    p = ctx.p
    f = get_map(ctx.cfg.map_id, ctx.cfg.n)
    est, regular = _regular(f, p["k_max"])
    if not ctx.expect_pass:
        ctx.check("regular", "e1 is not a boundary regular fixed point", est.radial_gap[-1],
                  ">= 1e-3 or growing", not regular)
        ctx.columns("k", "quotient", "gap_to_e1")
        for k, (q, g) in enumerate(zip(est.trend, est.radial_gap), start=1):
            ctx.table.add(k, q, g)
        return
    ctx.check("regular", "radial limit e1 and finite dilation", est.alpha_hat, "finite", regular)
    alpha = f.expected.get("alpha")
    alpha = est.alpha_hat if alpha is None else alpha
    rep = jwc_limit_checks(f, p["M"], p["k_max"], p["s"], p["rays"], alpha, p["tol"],
                           family=p["family"])
    table = ctx.columns("item", "kind", "level", "value")
    for name, item in rep.items.items():
        for lv, v in zip(rep.levels, item.per_level_max):
            table.add(name, item.kind, int(lv), float(v))
        if item.kind == "limit":
            ctx.check("item", f"item ({name}) deviation from {item.target:.6g}", item.last_value,
                      p["tol"], item.verdict)
        else:
            ctx.check("item", f"item ({name}) bounded on the grid", item.grid_max, 1e6, item.verdict)
    ctx.notes.append(f"sequence family: {p['family']} (Stolz grid M = {p['M']}, s = {p['s']})")


# curve distance

def _curve(ctx):
    p = ctx.p
    f = get_map(ctx.cfg.map_id, ctx.cfg.n)
    est, regular = _regular(f, 30)
    if not ctx.expect_pass:
        ctx.check("regular", "e1 is not a boundary regular fixed point", est.radial_gap[-1],
                  ">= 1e-3 or growing", not regular)
        ctx.columns("s", "probes", "max_distance")
        return
    s_list = p["s_list"] or [p["t"] * 2.0**-m for m in range(9)]
    rep = curve_distance_suite(f, p["M"], p["t"], s_list, p["probe_rays"], p["probe_depth"],
                               p["per_octave"], p["ray_factor"])
    table = ctx.columns("s", "probes", "max_distance")
    for s, c, d in zip(rep.s_list, rep.probe_counts, rep.max_distance):
        table.add(s, c, d)
    ctx.check("monotone", "max distance non-increasing as s decreases", rep.max_distance,
              p["mono_tol"], rep.monotone)
    smallest = rep.max_distance[int(np.argmin(rep.s_list))]
    ctx.check("small", f"max distance at smallest s = {min(rep.s_list):.3g}", smallest,
              p["eps"], smallest < p["eps"])
    ctx.notes.append(
        f"curve samples: {rep.curve_size} points ({rep.per_octave} radii per octave, "
        f"{rep.curve_rays} rays); probes on {rep.probe_rays} rays to depth {p['probe_depth']}")


# Koebe radius

def _koebe(ctx):
    p = ctx.p
    n = ctx.cfg.n
    t_prime = p["t_prime"]
    base = get_map("identity", n)
    table = ctx.columns("family", "maps", "c", "r_prime_hat", "kobayashi_radius")
    probe = KoebeProbe(1.0, t_prime, [base])
    r_id = koebe_radius_probe(probe, p["directions"], ctx.cfg.seed, p["steps"])
    table.add("identity", 1, 1.0, r_id, probe.kobayashi_radius)
    ctx.check("identity", "identity family: |r' - t'|", abs(r_id - t_prime), 1e-3,
              abs(r_id - t_prime) < 1e-3)
    maps = [base]
    radii = [r_id]
    for lam in p["lams"]:
        maps.append(quadratic_family_map(lam, n))
        c = min(abs(f.jacobian_det(np.zeros(n))) for f in maps)
        probe = KoebeProbe(c, t_prime, list(maps))
        r = koebe_radius_probe(probe, p["directions"], ctx.cfg.seed, p["steps"])
        radii.append(r)
        table.add(f"identity + {len(maps) - 1} quadratic", len(maps), c, r, probe.kobayashi_radius)
    ctx.check("positive", "smallest r' over the nested families", min(radii), "> 0", min(radii) > 0)
    ok = all(b <= a + 1e-12 for a, b in zip(radii, radii[1:]))
    ctx.check("monotone", "r' non-increasing as the family grows", radii, "non-increasing", ok)
    ctx.notes.append("probed family: identity and ((z1 + z1^2/2) lam, z''/2) for lam in "
                     + ", ".join(f"{lam:g}" for lam in p["lams"]))


# super-regularity

def _super(ctx):
    p = ctx.p
    f = get_map(ctx.cfg.map_id, ctx.cfg.n)
    est = super_regularity_estimate(f, p["M"], p["k_max"], p["rays"], p["floor"])
    table = ctx.columns("level", "zeta", "abs_det")
    for lv, z, d in zip(est.levels, est.grid, est.per_sample_det):
        table.add(int(lv), complex(z), float(d))
    if ctx.expect_pass:
        ctx.check("verdict", "min |det df| at the deepest generation", est.c_hat, p["floor"],
                  est.verdict)
    else:
        ctx.check("verdict", "min |det df| at the deepest generation (negative)", est.c_hat,
                  f"<= {p['floor']}", not est.verdict)
    if ctx.cfg.map_id == "thin_sq":
        law = np.abs(1.0 - est.grid) ** 2 / 4.0
        err = float(np.max(np.abs(est.per_sample_det - law)))
        ctx.diag("det_law", "|det df| = |1 - zeta|^2 / 4", err, 1e-12, err < 1e-12)


# renormalization

def _renorm(ctx):
    p = ctx.p
    f = get_map(ctx.cfg.map_id, ctx.cfg.n)
    grid = renorm_grid(p["M"], p["s"], p["k_min"], p["k_max"], p["rays"])
    rep = renorm_determinant_bound(f, p["M"], p["s"], grid)
    table = ctx.columns("zeta", "theta", "t0", "t1", "abs_dPhi_t1_inv", "abs_dT", "abs_df",
                        "abs_dS_inv", "abs_dPhi_t0", "chain_det", "direct_det", "cosh_ratio")
    for r in rep.records:
        table.add(r.zeta, r.theta, r.t0, r.t1, *(abs(v) for v in r.factors.values()),
                  r.chain_det, r.direct_det, r.ratio)
    ctx.check("g0", "max |g(0)|", rep.max_g0, p["g0_tol"], rep.max_g0 < p["g0_tol"])
    ctx.check("chain", "max |chain product - direct det|", rep.max_chain_error, p["chain_tol"],
              rep.max_chain_error < p["chain_tol"])
    ctx.check("secant", "max relative gap |det dS| vs sec(theta)^(n+1)", rep.secant_law_error,
              1e-9, rep.secant_law_error < 1e-9)
    ctx.check("radial_floors", "|det dS| <= 2 and |det dT| >= 1/2 on real zeta",
              [max(r.det_S for r in rep.records if r.theta == 0),
               min(r.det_T for r in rep.records if r.theta == 0)],
              [2.0, 0.5], rep.floors_hold_radial)
    ctx.diag("offaxis_floors", "|det dS| <= 2 and |det dT| >= 1/2 on every grid zeta",
             [max(r.det_S for r in rep.records), min(r.det_T for r in rep.records)],
             [2.0, 0.5], rep.floors_hold)
    ctx.notes.append(
        "the normalizing parabolic of zeta e1 has |det dS| = sec(theta)^(n+1) with "
        "theta = arg(1 - zeta) at every depth, so the floor |det dS| <= 2 holds only "
        "for |theta| <= arccos(2^(-1/(n+1))); it is reported as a diagnostic")
    if ctx.expect_pass:
        ctx.check("verdict", "super-regularity verdict", rep.super_regular, True, rep.super_regular)
        lower = min(abs(r.chain_det) - rep._lower(r) for r in rep.records)
        ctx.check("bound", "min |det dg_0| - (c/4)(cosh t1/cosh t0)^(n+1)", lower, ">= 0",
                  rep.bound_holds)
        ctx.check("steps", "lower-bound chain for cosh t1 / cosh t0 holds step by step",
                  [list(r.chain_steps) for r in rep.records[:1]], "non-increasing",
                  rep.chain_steps_hold)
        ctx.check("alpha_conditions",
                  "(1 - |f|^2)/(1 - |zeta|^2) >= alpha/4 and |1 - f1|/|1 - zeta| <= 2 alpha",
                  rep.alpha_hat, "measured alpha", rep.alpha_conditions_hold)
        smallest = min(abs(r.chain_det) for r in rep.records)
        ctx.check("floor", "min |det dg_0| >= c'' = c c' / 4", smallest, rep.c_second,
                  rep.floor_holds)
        ctx.notes.append(f"c = {rep.c:.6g}, c' = {rep.c_prime:.6g}, c'' = {rep.c_second:.6g}, "
                         f"alpha_hat = {rep.alpha_hat:.6g}")
    else:
        ctx.check("verdict", "super-regularity verdict (negative)", rep.super_regular, False,
                  not rep.super_regular)


# coverage

def _coverage(ctx):
    p = ctx.p
    f = get_map(ctx.cfg.map_id, ctx.cfg.n)
    r = p["r"]
    if p["t_prime"] > 0:
        maps = [build_renormalized(f, z, p["M"], p["s"]).as_holomap()
                for z in renorm_grid(p["M"], p["s"], 4, 8, rays=3)]
        c = min(abs(g.jacobian_det(np.zeros(f.dim))) for g in maps)
        probe = KoebeProbe(c, p["t_prime"], maps, origin_tol=1e-8)
        r_prime = koebe_radius_probe(probe, 16, ctx.cfg.seed)
        r = probe.kobayashi_radius
        ctx.diag("koebe", "Kobayashi radius from the probed r' of g^zeta", r, "> 0", r > 0)
        ctx.notes.append(f"r taken from Koebe probe over g^zeta, k = 4..8: r' = {r_prime:.6g}, "
                         f"r = atanh(r') = {r:.6g}")
    extra = [(obstruction_target(p["obstruction_d"], f.dim), p["obstruction_zeta"])]
    rep = coverage_check(f, p["M"], p["s"], r, p["eta"], p["ball_samples"], p["curve_samples"],
                         ctx.cfg.seed, p["tol"], extra, ctx.jobs)
    table = ctx.columns("index", "curve_index", "zeta", "target", "status", "route", "residual",
                        "recheck", "in_eta", "hit", "oracle_error")
    oracle_err = 0.0
    for rec in rep.records + rep.extra_records:
        err = None
        if rec.hit and rec.oracle is not None:
            err = float(norm(rec.preimage - rec.oracle))
            oracle_err = max(oracle_err, err)
        table.add(rec.index, rec.curve_index, rec.zeta, rec.target, rec.status, rec.route,
                  rec.residual, rec.recheck, rec.in_eta, rec.hit, err)
    ex = rep.extra_records[0]
    ctx.notes.append(
        f"{len(rep.records)} targets; exemplar w = {_vec(ex.target)} at "
        f"k(f(zeta e1), w) = {ex.ball_distance:.6f}, status {ex.status}, oracle "
        f"{None if ex.oracle is None else _vec(ex.oracle)}")
    if ctx.expect_pass:
        ctx.check("ratio", "hit ratio", rep.hit_ratio, 1.0, rep.hit_ratio == 1.0)
        ctx.check("recheck", "max |f(z) - w| on re-evaluation of hits", rep.max_recheck,
                  10 * p["tol"], rep.max_recheck < 10 * p["tol"])
        if f.inverse is not None:
            ctx.check("oracle", "max |z - f^-1(w)| over hits", oracle_err, 1e-8, oracle_err < 1e-8)
    else:
        ctx.check("ratio", "hit ratio (negative control)", rep.hit_ratio, "< 0.9",
                  rep.hit_ratio < 0.9)
        in_ball = ex.ball_distance is not None and ex.ball_distance < r
        missed = in_ball and not ex.hit
        if ex.oracle is not None:
            missed = missed and not ex.oracle_in_ball
        ctx.check("obstruction", "exemplar w = (1 - d, d/2) inside B_k(f(zeta e1), r) is missed",
                  ex.ball_distance, f"< {r}", missed)
    if p["search"]:
        s_found, tried = search_s(f, p["M"], r, p["eta"], 5, 10, ctx.cfg.seed,
                                  s_start=p["s"] * 4, tol=p["tol"])
        ctx.diag("search", "largest dyadic s with hit ratio 1.0 (reduced sample)",
                 s_found, "found before 2^-20", s_found is not None)
        ctx.notes.append("s search: " + ", ".join(f"s = {s:.6g}: {h:.3f}" for s, h in tried))


def _admissible(ctx):
    p = ctx.p
    f = get_map(ctx.cfg.map_id, ctx.cfg.n)
    witness = AdmissibleWitness(p["eps"], lemma_delta(p["eps"], p["M"]), p["M"])
    rep = admissible_coverage_check(f, p["sampler"], p["eta"], p["delta_list"], ctx.cfg.seed,
                                    p["count"], p["M"], witness)
    table = ctx.columns("delta", "count", "fraction", "admissible")
    for lv in rep.levels:
        table.add(lv.delta, lv.count, lv.fraction, lv.admissible)
    adm = all(lv.admissible for lv in rep.levels)
    ctx.check("admissible", f"{p['sampler']} samples pass the admissibility check",
              [lv.admissible for lv in rep.levels], True, adm)
    if ctx.expect_pass:
        frac = rep.smallest_delta_fraction
        ctx.check("fraction", "covered fraction at the smallest delta", frac, 1.0, frac == 1.0)
    else:
        worst = max(rep.fractions)
        ctx.check("fraction", "covered fraction below 1 at every delta (negative)", worst, "< 1",
                  worst < 1.0)


def _sandwich(ctx):
    p = ctx.p
    f = get_map(ctx.cfg.map_id, ctx.cfg.n)
    rho = p["radius"]
    centre = (1.0 - rho) * e1(f.dim)
    try:
        restrict_to_ball(f, centre + 1e-3 * np.eye(f.dim)[1], rho)
        guarded = False
    except ValueError:
        guarded = True
    ctx.check("guard", "non-tangent inner ball is rejected", guarded, True, guarded)
    rep = ball_sandwich_check(f, centre, rho, p["eta"], p["delta_list"], ctx.cfg.seed,
                              p["sampler"], p["count"], p["M"])
    table = ctx.columns("delta", "count", "fraction")
    for lv in rep.inner.levels:
        table.add(lv.delta, lv.count, lv.fraction)
    if ctx.expect_pass:
        ctx.check("fraction", "restricted map: covered fraction at the smallest delta",
                  rep.fraction, 1.0, rep.fraction == 1.0)
        ctx.check("lifted", "lifted preimages lie in B(e1, eta) and solve f(z) = w",
                  rep.lifted_in_eta, True, rep.lifted_in_eta)
    else:
        worst = max(rep.inner.fractions)
        ctx.check("fraction", "restricted map: covered fraction below 1 (negative)", worst, "< 1",
                  worst < 1.0)
    ctx.notes.append(f"inner ball B({1 - rho:g} e1, {rho:g}); g(u) = f(c + rho u)")


def _siegel(ctx):
    p = ctx.p
    cons = SiegelConstruction(STANDIN_PHI, p["delta"], p["eps"])
    val = cons.siegel_apply(np.array([1.0, 0.0]))
    expected = np.array([5.0, p["eps"] / 2])
    err = float(norm(val - expected))
    ctx.check("example", "Phi(1, 0) = (5, eps/2)", val, expected, err < 1e-14)
    rng = np.random.default_rng(ctx.cfg.seed)
    pts = sample_siegel(p["samples"], rng)
    rep = cons.bounds_check(pts)
    table = ctx.columns("check", "samples", "failures")
    for name, ok in {**rep.steps, **rep.aux, "containment": rep.containment}.items():
        bad = int(np.count_nonzero(~ok))
        table.add(name, rep.count, bad)
        key = "containment" if name == "containment" else "step"
        ctx.check(key, name, bad, 0, bad == 0)
    cert = separation_certificate(p["r_minus"], p["r_plus"], p["cert_eps"], p["cert_delta"])
    ctx.check("separation", "separation factor equals 1 - r1/2 - r_-1/(2 - 2 r_-1)",
              cert.factor, cert.closed_form, cert.factor == cert.closed_form)
    ctx.check("certificate", "eps * factor - 2 delta", cert.quantity, "> 0", cert.certified)
    edge = separation_certificate(p["r_minus"], p["r_plus"], p["cert_eps"],
                                  cert.eps * cert.factor / 2)
    ctx.check("certificate", "delta = eps * factor / 2 is not certified", edge.quantity, "<= 0",
              not edge.certified)
    ctx.notes.append(f"R0 = {cert.R0}, R_inf = {cert.R_inf}, factor = {cert.factor}")


def _fraction(x):
    try:
        return 0 < Fraction(x) < 1
    except (ValueError, ZeroDivisionError):
        return False


N_CHECK = Param(int, 10_000, count, "sample count")

SCHEMAS = {
    "exact": {
        "samples": N_CHECK,
        "tol": Param(float, 1e-8, positive, "tolerance"),
        "depth": Param(int, 40, lambda k: 1 <= k <= 44, "radial depth 1 - 2^-depth"),
    },
    "metric": {
        "samples": N_CHECK,
        "tol": Param(float, 1e-9, positive, "tolerance"),
        "slice_tol": Param(float, 1e-12, positive, "slice tolerance"),
        "max_norm": Param(float, 0.99, unit_open, "sample radius"),
    },
    "lemma": {
        "samples": Param(int, 100_000, count, "cone samples per configuration"),
        "M_list": Param(float, [1.5, 2.0, 5.0], above_one, "cone amplitudes", many=True),
        "eps_list": Param(float, [0.1, 0.01], positive, "epsilons", many=True),
    },
    "jwc": {
        "M": Param(float, 2.0, above_one, "Stolz amplitude"),
        "s": Param(float, 0.5, unit_open, "Stolz diameter"),
        "k_max": Param(int, 30, lambda k: 1 <= k <= 40, "dyadic depth"),
        "rays": Param(int, 5, count, "rays"),
        "tol": Param(float, 1e-3, positive, "limit tolerance"),
        "family": Param(str, "axis", lambda x: x in ("axis", "admissible"), "sequence family"),
    },
    "curve": {
        "M": Param(float, 2.0, above_one, "Stolz amplitude"),
        "t": Param(float, 0.5, unit_open, "curve diameter"),
        "s_list": Param(float, None, unit_open, "probe diameters", many=True),
        "eps": Param(float, 0.05, positive, "target distance"),
        "probe_rays": Param(int, 5, count, "probe rays"),
        "probe_depth": Param(int, 12, count, "probe depth"),
        "per_octave": Param(int, 16, count, "curve radii per octave"),
        "ray_factor": Param(int, 13, lambda x: x >= 1 and x % 2 == 1, "odd ray refinement"),
        "mono_tol": Param(float, 1e-6, positive, "plateau tolerance"),
    },
    "koebe": {
        "t_prime": Param(float, 0.5, unit_open, "t'"),
        "lams": Param(float, [2.0 / 3.0, 0.5, 0.3], lambda x: 0 < x <= 2.0 / 3.0,
                      "quadratic family scales", many=True),
        "directions": Param(int, 32, count, "sampled directions"),
        "steps": Param(int, 32, count, "continuation steps"),
    },
    "super": {
        "M": Param(float, 2.0, above_one, "Stolz amplitude"),
        "k_max": Param(int, 30, lambda k: 1 <= k <= 40, "dyadic depth"),
        "rays": Param(int, 5, count, "rays"),
        "floor": Param(float, 1e-3, positive, "verdict floor"),
    },
    "renorm": {
        "M": Param(float, 2.0, above_one, "Stolz amplitude"),
        "s": Param(float, 0.1, unit_open, "Stolz diameter"),
        "k_min": Param(int, 4, count, "shallowest dyadic level"),
        "k_max": Param(int, 12, count, "deepest dyadic level"),
        "rays": Param(int, 3, count, "rays"),
        "chain_tol": Param(float, 1e-6, positive, "chain-rule tolerance"),
        "g0_tol": Param(float, 1e-8, positive, "g(0) tolerance"),
    },
    "coverage": {
        "M": Param(float, 2.0, above_one, "Stolz amplitude"),
        "s": Param(float, 0.125, unit_open, "Stolz diameter"),
        "r": Param(float, 0.1, positive, "Kobayashi radius"),
        "eta": Param(float, 0.3, positive, "target neighbourhood of e1"),
        "ball_samples": Param(int, 20, count, "targets per curve point"),
        "curve_samples": Param(int, 50, count, "curve points"),
        "tol": Param(float, 1e-10, positive, "Newton tolerance"),
        "obstruction_d": Param(float, 0.05, unit_open, "exemplar d"),
        "obstruction_zeta": Param(float, 0.95, unit_open, "exemplar curve point"),
        "search": Param(bool, False, None, "run the dyadic s search"),
        "t_prime": Param(float, 0.0, lambda x: 0 <= x < 1, "derive r from the Koebe probe (0 = off)"),
    },
    "admissible": {
        "sampler": Param(str, "cone", lambda x: x in ("cone", "radial", "tangential"), "A sampler"),
        "M": Param(float, 2.0, above_one, "cone amplitude"),
        "eps": Param(float, 0.1, positive, "admissibility epsilon"),
        "eta": Param(float, 0.3, positive, "target neighbourhood of e1"),
        "delta_list": Param(float, [0.2, 0.05, 0.01], positive, "deltas", many=True),
        "count": Param(int, 200, count, "points per delta"),
    },
    "sandwich": {
        "radius": Param(float, 0.5, lambda x: 0 < x <= 1, "inner ball radius"),
        "sampler": Param(str, "cone", lambda x: x in ("cone", "radial"), "A sampler"),
        "M": Param(float, 2.0, above_one, "cone amplitude"),
        "eta": Param(float, 0.3, positive, "target neighbourhood of e1"),
        "delta_list": Param(float, [0.1, 0.02], positive, "deltas", many=True),
        "count": Param(int, 200, count, "points per delta"),
    },
    "siegel": {
        "samples": Param(int, 100_000, count, "Siegel samples"),
        "delta": Param(float, 1.0, lambda x: 0 < x < 2, "delta < 2"),
        "eps": Param(float, 0.5, lambda x: 0 < x and x * x < 0.75, "eps^2 < 3/4"),
        "r_minus": Param(str, "1/4", _fraction, "r_-1 as a fraction"),
        "r_plus": Param(str, "1/4", _fraction, "r_1 as a fraction"),
        "cert_eps": Param(str, "1/2", _fraction, "certificate eps"),
        "cert_delta": Param(str, "1/10", _fraction, "certificate delta"),
    },
}

RUNNERS = {
    "exact": _exact, "metric": _metric, "lemma": _lemma, "jwc": _jwc, "curve": _curve,
    "koebe": _koebe, "super": _super, "renorm": _renorm, "coverage": _coverage,
    "admissible": _admissible, "sandwich": _sandwich, "siegel": _siegel,
}


def make_config(suite, raw, seed=None):
    if suite not in REGISTRY:
        raise KeyError(f"unknown suite {suite!r}")
    entry = REGISTRY[suite]
    return build_config(suite, SCHEMAS[entry["runner"]], raw, entry["default_map"], seed)


def resolve_mode(suite, cfg):
    if cfg.expect != "auto":
        return "expect-pass" if cfg.expect == "pass" else "expect-fail"
    flag = REGISTRY[suite].get("expects_on")
    if flag is None:
        return "expect-pass"
    meta = get_map(cfg.map_id, cfg.n, validate=False).expected
    return "expect-pass" if meta.get(flag, True) else "expect-fail"


def run_suite(suite, cfg, jobs=1):
    """Run a configured suite and return its ``RunRecord``."""
    entry = REGISTRY[suite]
    mode = resolve_mode(suite, cfg)
    ctx = Context(suite, cfg, mode, jobs)
    start = time.perf_counter()
    RUNNERS[entry["runner"]](ctx)
    duration = time.perf_counter() - start
    return RunRecord(
        suite=suite, anchor=entry["anchor"], version=__version__, config=cfg.echo(),
        mode=mode, assertions=ctx.assertions, diagnostics=ctx.diagnostics,
        table=ctx.table, notes=ctx.notes, duration=duration,
        utc=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
