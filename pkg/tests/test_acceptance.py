"""Acceptance criteria, each run at its stated tolerance and time budget.

The summary printed at the end of the session has one PASS/FAIL line per
criterion (see ``conftest.py``).
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from holoball.gallery import GALLERY, get_map
from holoball.report import strip_timestamp
from holoball.suites import REGISTRY, make_config, run_suite

E2 = np.exp(-2.0)


def timed(suite, **raw):
    raw.setdefault("seed", 20240601)
    cfg = make_config(suite, raw)
    start = time.perf_counter()
    rec = run_suite(suite, cfg)
    return rec, time.perf_counter() - start


def by_name(rec, fragment):
    hits = [a for a in rec.assertions if fragment in a.name]
    assert hits, f"no assertion matching {fragment!r}"
    return hits


def note(request, text):
    request.node.user_properties.append(("detail", text))


def worst(rec):
    return ", ".join(f"{a.name}: {a.measured:.3g}" for a in rec.assertions
                     if isinstance(a.measured, float))


@pytest.mark.criterion(1, "exact formulas to 1e-8 over 1e4 instances, < 10 s")
def test_criterion_1_exact_formulas(request):
    rec, elapsed = timed("exact-formulas", samples=10_000, tol=1e-8)
    assert rec.passed, [a for a in rec.assertions if not a.verdict]
    assert len(rec.assertions) == 7
    assert elapsed < 10
    note(request, f"{elapsed:.2f} s; max error {max(a.measured for a in rec.assertions):.2e}")


@pytest.mark.criterion(2, "Kobayashi metric to 1e-9, slice formula to 1e-12, < 10 s")
def test_criterion_2_metric(request):
    rec, elapsed = timed("kobayashi-metric", samples=10_000, tol=1e-9, slice_tol=1e-12)
    assert rec.passed, [a for a in rec.assertions if not a.verdict]
    for key in ("|k(a, b) - k(b, a)|", "k(a, c) - k(a, b) - k(b, c)", "k(phi a, phi b)"):
        assert by_name(rec, key)[0].threshold == 1e-9
    assert by_name(rec, "log((1 + r)")[0].threshold == 1e-12
    assert elapsed < 10
    note(request, f"{elapsed:.2f} s; invariance error "
                  f"{by_name(rec, 'k(phi a')[0].measured:.2e}")


@pytest.mark.criterion(3, "cone lemma: zero violations over 1e5 samples per (M, eps), < 20 s")
def test_criterion_3_lemma(request):
    rec, elapsed = timed("lemma-cone-admissible", samples=100_000,
                         M_list=[1.5, 2.0, 5.0], eps_list=[0.1, 0.01])
    violations = by_name(rec, "violations of k(z, pi z)")
    assert len(violations) == 6
    assert all(a.measured == 0 and a.verdict for a in violations)
    assert rec.passed
    assert elapsed < 20
    note(request, f"{elapsed:.2f} s; 6 configurations x 1e5 samples, 0 violations")


SUPER_REGULAR = [g for g in GALLERY if get_map(g, validate=False).expected["super_regular"]]


@pytest.mark.criterion(4, "JWC items at k_max = 30, < 15 s")
def test_criterion_4_jwc(request):
    start = time.perf_counter()
    rec, _ = timed("jwc-limits", map="hyperbolic", k_max=30, tol=1e-3)
    for item in ("(2)", "(3)"):
        a = by_name(rec, f"item {item}")[0]
        assert abs(float(a.name.split()[-1]) - E2) < 1e-6
        assert a.measured < 1e-3 and a.verdict
    worst_tail = 0.0
    for gid in SUPER_REGULAR:
        rec, _ = timed("jwc-limits", map=gid, k_max=30, tol=1e-3)
        assert rec.mode == "expect-pass"
        for item in ("(4)", "(5)", "(6)"):
            a = by_name(rec, f"item {item}")[0]
            assert a.measured < 1e-3, (gid, a)
            worst_tail = max(worst_tail, a.measured)
    elapsed = time.perf_counter() - start
    assert elapsed < 15
    note(request, f"{elapsed:.2f} s; maps {', '.join(SUPER_REGULAR)}; "
                  f"worst items (4)-(6) {worst_tail:.2e}")


@pytest.mark.criterion(5, "curve distance monotone in s and below 0.05, < 30 s")
@pytest.mark.parametrize("gid", ["identity", "hyperbolic", "half_shrink"])
def test_criterion_5_curve_distance(request, gid):
    rec, elapsed = timed("curve-distance", map=gid, eps=0.05, mono_tol=1e-6)
    assert rec.passed, [a for a in rec.assertions if not a.verdict]
    assert elapsed < 30
    note(request, f"{gid}: {elapsed:.2f} s; distance at smallest s "
                  f"{by_name(rec, 'smallest s')[0].measured:.2e}")


@pytest.mark.criterion(6, "coverage on 1e3 targets and negative controls, < 60 s per map")
@pytest.mark.parametrize("gid", ["half_shrink", "hyperbolic"])
def test_criterion_6_coverage(request, gid):
    rec, elapsed = timed("coverage-theorem-2.13", map=gid)
    assert len(rec.table.rows) == 1000 + 1
    assert by_name(rec, "hit ratio")[0].measured == 1.0
    assert by_name(rec, "re-evaluation")[0].measured < 1e-9
    assert rec.passed and rec.verdict == "pass"
    assert elapsed < 60
    note(request, f"{gid}: hit ratio 1.0, recheck "
                  f"{by_name(rec, 're-evaluation')[0].measured:.1e}, {elapsed:.2f} s")


@pytest.mark.criterion(6, "coverage on 1e3 targets and negative controls, < 60 s per map")
@pytest.mark.parametrize("gid", ["thin_proj", "thin_sq"])
def test_criterion_6_negative_controls(request, gid):
    rec, elapsed = timed("coverage-theorem-2.13", map=gid)
    assert rec.mode == "expect-fail"
    assert by_name(rec, "hit ratio")[0].measured < 0.9
    assert by_name(rec, "exemplar")[0].verdict
    assert rec.verdict == "negative control confirmed"
    assert elapsed < 60
    if gid == "thin_sq":
        assert "oracle (0.95, 40)" in rec.notes[0]
    note(request, f"{gid}: hit ratio {by_name(rec, 'hit ratio')[0].measured:.3f}, "
                  f"exemplar (0.95, 0.025) missed, {elapsed:.2f} s")


@pytest.mark.criterion(7, "renormalization chain to 1e-6 on k = 4..12 and floor, < 20 s")
def test_criterion_7_renormalization(request):
    rec, elapsed = timed("renormalization", map="half_shrink", k_min=4, k_max=12,
                         chain_tol=1e-6)
    chain = by_name(rec, "chain product")[0]
    floor = by_name(rec, "c'' = c c' / 4")[0]
    assert chain.measured < 1e-6 and chain.verdict
    assert floor.verdict
    assert rec.passed, [a for a in rec.assertions if not a.verdict]
    assert elapsed < 20
    note(request, f"{elapsed:.2f} s; chain error {chain.measured:.1e}; "
                  f"min |det dg_0| {floor.measured:.4f} >= c'' {floor.threshold:.4f}")


@pytest.mark.criterion(8, "Siegel construction containment (1e5) and exact separation certificate, < 10 s")
def test_criterion_8_siegel_construction(request):
    rec, elapsed = timed("section4-construction", samples=100_000)
    assert by_name(rec, "containment")[0].verdict
    assert all(a.verdict for a in rec.assertions)
    factor = by_name(rec, "separation factor")[0].measured
    assert factor == Fraction(7, 8) - Fraction(1, 6)
    assert by_name(rec, "eps * factor - 2 delta")[0].measured > 0
    assert elapsed < 10
    note(request, f"{elapsed:.2f} s; containment and chain pass; certificate "
                  f"{by_name(rec, 'eps * factor - 2 delta')[0].measured} > 0 with factor {factor}")


@pytest.mark.criterion(8, "Siegel construction containment (1e5) and exact separation certificate, < 10 s")
@pytest.mark.xfail(strict=True, reason="stated factor 29/42 disagrees with 7/8 - 1/6 = 17/24")
def test_criterion_8_stated_factor():
    rec, _ = timed("section4-construction", samples=1000)
    assert by_name(rec, "separation factor")[0].measured == Fraction(29, 42)


@pytest.mark.criterion(9, "identical reports on rerun, timestamp aside")
@pytest.mark.parametrize("suite", sorted(REGISTRY))
def test_criterion_9_determinism(request, suite):
    first, _ = timed(suite, seed=77)
    second, _ = timed(suite, seed=77)
    a, b = strip_timestamp(first.to_json()), strip_timestamp(second.to_json())
    assert a == b
    assert "timestamp" in first.as_dict()
    if suite == "coverage-theorem-2.13":
        cfg = make_config(suite, {"seed": 77})
        assert strip_timestamp(run_suite(suite, cfg, jobs=4).to_json()) == a
