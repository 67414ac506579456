"""The thirteen acceptance criteria, each at exact (zero) tolerance.

Every test records one PASS/FAIL line, repeated in the terminal summary.
Seeds are fixed so reruns are byte-identical.
"""

from __future__ import annotations

import random
import time
import warnings
from pathlib import Path

from pvk import checks
from pvk.cone import dual_cone, dual_order_reversing
from pvk.extrat import INF
from pvk.lang import EvalError, check_program_equiv, law_instances, parse, run
from pvk.report import LawReport
from pvk.sampling import all_lattices, all_spaces, random_space
from pvk.space import ParseError, topologies_on_opens

SEED = 7
GOLDEN = Path(__file__).parent / "golden"


def counts(report: LawReport) -> str:
    return ", ".join(f"{r.name} {r.passed}/{r.passed + r.failed}" for r in report.laws.values())


def timed(fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t


def test_criterion_01_manes_laws(acceptance):
    t = time.perf_counter()
    report = checks.manes_exhaustive(3, 2)
    checks.manes_random(1000, SEED, 4, 8, report)
    elapsed = time.perf_counter() - t
    ok = report.ok and elapsed < 120 and report.law("manes_iii_associativity").passed > 0
    acceptance(
        1,
        ok,
        f"{elapsed:.1f}s; laws (i),(ii) exhaustive to 3 points, (iii) exhaustive to 2 points "
        f"plus 1000 random 4-point kernels [{counts(report)}]",
    )
    assert report.ok, report.summary()
    assert elapsed < 120


def test_criterion_02_disintegration(acceptance):
    report, elapsed = timed(checks.disintegration_cases, 1000, SEED, 4)
    ok = report.ok and elapsed < 30 and report.law("disintegration").passed == 1000
    acceptance(2, ok, f"{elapsed:.1f}s [{counts(report)}]")
    assert ok, report.summary()


def test_criterion_03_riesz_and_change_of_variables(acceptance):
    report, elapsed = timed(checks.riesz_round_trips, 3, 4)
    checks.change_of_variables(3, 4, SEED, report)
    ok = report.ok and report.law("change_of_variables").passed > 0
    acceptance(3, ok, f"{elapsed:.1f}s riesz; spaces up to isomorphism [{counts(report)}]")
    assert ok, report.summary()


def test_criterion_04_decompose_round_trip(acceptance):
    report, elapsed = timed(checks.decompose_round_trips, 500, SEED, 4, 8)
    n_spaces = sum(1 for _ in all_spaces(4))
    ok = report.ok and report.law("decompose_round_trip").passed == 500 * n_spaces
    acceptance(4, ok, f"{elapsed:.1f}s; {n_spaces} labeled spaces x 500 [{counts(report)}]")
    assert ok, report.summary()


def test_criterion_05_barycentre_coherence(acceptance):
    report, elapsed = timed(checks.barycentre_coherence, 5, 200, SEED)
    n = len(all_lattices(5))
    ok = report.ok and elapsed < 60 and report.law("barycentre_coherence").passed == 200 * n
    acceptance(5, ok, f"{elapsed:.1f}s; {n} lattices x 200 [{counts(report)}]")
    assert ok, report.summary()


def test_criterion_06_dual_cone(acceptance):
    bad = []
    lats = all_lattices(5)
    for L in lats:
        duals = dual_cone(L)
        lam = dict(zip(L.points, duals))
        # order-isomorphic to the opposite lattice: x <= y iff lam_y <= lam_x pointwise
        iso = all(
            L.leq(x, y) == all(lam[y](z) <= lam[x](z) for z in L.points) for x in L.points for y in L.points
        )
        distinct = len({tuple(str(d(z)) for z in L.points) for d in duals}) == len(L)
        values_ok = all(d(z) in (0, INF) for d in duals for z in L.points)
        if not (len(duals) == len(L) and iso and distinct and values_ok and dual_order_reversing(L, duals)):
            bad.append(L)
    acceptance(6, not bad, f"{len(lats)} lattices up to 5 elements, {len(bad)} mismatches")
    assert not bad


def test_criterion_07_keimel_separation(acceptance):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        report, elapsed = timed(checks.separation_sweep, 4)
    ok = report.ok and report.law("keimel_separation").passed > 0
    acceptance(7, ok, f"{elapsed:.1f}s [{counts(report)}]")
    assert ok, report.summary()


def test_criterion_08_algebra_laws(acceptance):
    report, elapsed = timed(checks.algebra_laws, 4, 200, SEED)
    needed = {"algebra_unit", "algebra_multiplication", "induced_cone_matches"}
    ok = report.ok and needed <= set(report.laws)
    acceptance(8, ok, f"{elapsed:.1f}s [{counts(report)}]")
    assert ok, report.summary()


def test_criterion_09_morphism_iff_linear(acceptance):
    report, elapsed = timed(checks.morphism_sweep, 4)
    ok = report.ok and report.law("morphism_iff_linear").passed > 0
    acceptance(9, ok, f"{elapsed:.1f}s [{counts(report)}]")
    assert ok, report.summary()


def test_criterion_10_topology_collapse(acceptance):
    spaces = list(all_spaces(4))
    bad = []
    for X in spaces:
        point, scott = topologies_on_opens(X)
        if point != scott:
            bad.append(X)
    acceptance(10, not bad, f"{len(spaces)} labeled spaces up to 4 points, {len(bad)} mismatches")
    assert not bad


def test_criterion_11_fubini(acceptance):
    report, elapsed = timed(checks.fubini_cases, 500, SEED, 3)
    ok = report.ok and report.law("fubini").passed == 500
    acceptance(11, ok, f"{elapsed:.1f}s [{counts(report)}]")
    assert ok, report.summary()


def test_criterion_12_funspace_barycentre(acceptance):
    report, elapsed = timed(checks.funspace_barycentre_cases, 3, 10, SEED, 4)
    ok = report.ok and report.law("funspace_barycentre").passed > 0
    acceptance(12, ok, f"{elapsed:.1f}s [{counts(report)}]")
    assert ok, report.summary()


MALFORMED = [
    ("space D {a b}\ndirac c", 2, 7),
    ("space D {a b}\nmix -1/2: dirac a", 2, 5),
    ("space D {a b}\nbind x <- dirac a dirac x", 2, 19),
    ("space D {a b}\nadd (bind x <- dirac a; dirac x) dirac x", 2, 40),
    ("space D {a b}\ndirac a )", 2, 9),
    ("space D a b\ndirac a", 1, 9),
]


def test_criterion_13_dsl(acceptance):
    programs = sorted(GOLDEN.glob("*.pk"))
    golden_bad = [p.name for p in programs if run(p.read_text(), p.name) != p.with_suffix(".out").read_text()]
    rng = random.Random(SEED)
    laws = LawReport()
    for _ in range(100):
        s = random_space(rng, rng.randint(1, 4))
        for inst in law_instances(rng, s):
            laws.record(inst.law, check_program_equiv(inst.left, inst.right), inst)
    positioned = 0
    for src, line, col in MALFORMED:
        try:
            parse(src, "bad.pk")
        except ParseError as e:
            positioned += (e.line, e.col) == (line, col)
    try:
        run("space S {p q}\nle p q\nbind x <- dirac p; case x { p => dirac q | q => dirac p }")
    except EvalError as e:
        positioned += (e.line, e.col) == (3, 1)
    ok = len(programs) >= 10 and not golden_bad and laws.ok and all(r.passed == 100 for r in laws.laws.values()) and positioned == len(MALFORMED) + 1
    acceptance(
        13,
        ok,
        f"{len(programs)} golden programs ({len(golden_bad)} diffs); schemas [{counts(laws)}]; "
        f"{positioned}/{len(MALFORMED) + 1} malformed programs with positioned errors",
    )
    assert ok
