"""Law suites: exhaustive sweeps over small spaces plus seeded random cases.

Each suite returns a :class:`~pvk.report.LawReport`.  Counterexamples are
dicts keyed by file names (``space.poset``, ``kernel.ker``, ...) whose
values render to the matching file format, so a failure can be replayed
through the single-shot CLI commands.
"""

from __future__ import annotations

import itertools
import random
from contextlib import contextmanager
from fractions import Fraction
from typing import Callable, Iterator

from . import valuation as _valuation
from .algebra import (
    AlgebraError,
    AlgebraMap,
    barycentre_search,
    beta_halfspace_equiv,
    check_algebra_laws,
    extend_linear,
    extension_uniqueness_witness,
    funspace_barycentre_witness,
    induced_cone,
    join_monotone,
    lattice_barycentre,
    lattice_valuations,
    morphism_iff_linear,
    standard_barycentre,
)
from .cone import (
    EXTRAT,
    FiniteCone,
    LinearMap,
    check_cone_axioms,
    check_retract_wlc,
    classify_convexity,
    convex_t0_check,
    dual_cone,
    dual_order_reversing,
    is_convex,
    is_linear,
    keimel_separate,
    separates,
)
from .extrat import INF
from .integral import (
    LscFun,
    check_fubini,
    chi,
    functional_of,
    integrate,
    integrate_direct,
    ss_recover,
    step_approx,
    step_approx_by_sum,
    valuation_from_functional,
)
from .monad import (
    apply_extension,
    check_associativity,
    check_disintegration,
    check_left_unit,
    check_unit_law,
    extension_table,
    functor_map,
    multiply,
    multiply_via_extend,
)
from .report import LawReport
from .sampling import (
    GRID,
    all_lattices,
    all_spaces,
    grid_valuations,
    monotone_functions,
    monotone_kernels,
    random_kernel,
    random_lsc,
    random_meta_valuation,
    random_space,
    random_valuation,
    spaces_up_to_iso,
    valuations_with_denominator,
)
from .space import (
    ContinuousMap,
    is_monotone,
    monotone_maps,
    point_label,
    preserves_opens,
    product_space,
    topologies_on_opens,
    upsets,
)
from .valuation import (
    SimpleValuation,
    decompose,
    dirac,
    evaluate,
    pushforward,
    pushforward_table,
    to_table,
    validate_table,
)

SUITES = ("monad", "integral", "algebra", "cone", "topology")
FAULTS = ("modularity",)
PRNG = "MT19937"


# fault injection


def _broken_modularity(a, b, union, inter) -> bool:
    # mutated law: compares the wrong sides
    return a + union == b + inter


@contextmanager
def injected_fault(name: str | None) -> Iterator[None]:
    """Temporarily replace a law check with a mutated version."""
    if name is None:
        yield
        return
    if name != "modularity":
        raise ValueError(f"unknown fault {name!r}; choose from {', '.join(FAULTS)}")
    saved = _valuation._modular_ok
    _valuation._modular_ok = _broken_modularity
    try:
        yield
    finally:
        _valuation._modular_ok = saved


def _record_table(report: LawReport, nu: SimpleValuation) -> None:
    t = to_table(nu)
    res = validate_table(t)
    report.record("table_axioms", res.ok, None if res.ok else {"space.poset": nu.space, "table.vtab": t, "violation.txt": res.describe(nu.space)})


# monad


def manes_exhaustive(max_size: int = 3, assoc_size: int = 2, report: LawReport | None = None) -> LawReport:
    """Laws (i) and (ii) on every space and every grid kernel up to ``max_size``
    points; law (iii) on every grid kernel pair and grid ``mu`` up to ``assoc_size``."""
    report = LawReport() if report is None else report
    spaces = list(all_spaces(max_size))
    grids = {s: grid_valuations(s, GRID) for s in spaces}
    for X in spaces:
        for mu in grids[X]:
            check_unit_law(mu, report)
    for X in spaces:
        for Y in spaces:
            for f in monotone_kernels(X, Y, grids[Y]):
                check_left_unit(f, report)
    small = [s for s in spaces if len(s) <= assoc_size]
    for X in small:
        for Y in small:
            fs = list(monotone_kernels(X, Y, grids[Y]))
            for Z in small:
                gs = list(monotone_kernels(Y, Z, grids[Z]))
                for f in fs:
                    for g in gs:
                        check_associativity(f, g, grids[X], report)
    return report


def manes_random(trials: int = 1000, seed: int = 0, size: int = 4, max_den: int = 8, report: LawReport | None = None) -> LawReport:
    """Laws (i)-(iii) on random kernels between random ``size``-point spaces."""
    report = LawReport() if report is None else report
    rng = random.Random(seed)
    for _ in range(trials):
        X, Y, Z = (random_space(rng, size) for _ in range(3))
        f = random_kernel(rng, X, Y, max_den)
        g = random_kernel(rng, Y, Z, max_den)
        mu = random_valuation(rng, X, max_den)
        check_unit_law(mu, report)
        check_left_unit(f, report)
        check_associativity(f, g, [mu] + [dirac(x, X) for x in X.points], report)
    return report


def monad_extras(trials: int = 200, seed: int = 0, size: int = 4, report: LawReport | None = None) -> LawReport:
    """Integral form of extension, linearity, multiplication, functoriality."""
    report = LawReport() if report is None else report
    rng = random.Random(seed)
    for _ in range(trials):
        X, Y = random_space(rng, rng.randint(1, size)), random_space(rng, rng.randint(1, size))
        f = random_kernel(rng, X, Y, 4)
        mu, nu = random_valuation(rng, X), random_valuation(rng, X)
        out = apply_extension(f, mu)
        ok = decompose(extension_table(f, mu)) == out
        report.record("extension_integral_formula", ok, None if ok else {"source.poset": X, "target.poset": Y, "kernel.ker": f, "mu.val": mu})
        r, s = Fraction(rng.randint(0, 4), 2), Fraction(rng.randint(0, 4), 3)
        ok = apply_extension(f, r * mu + s * nu) == r * out + s * apply_extension(f, nu)
        report.record("extension_linear", ok, None if ok else {"kernel.ker": f, "mu.val": mu, "nu.val": nu})
        _record_table(report, out)
        w = random_meta_valuation(rng, Y, outer=3, inner=3, max_den=4)
        ok = multiply(w, Y) == multiply_via_extend(w)
        report.record("multiply_is_identity_extension", ok, None if ok else {"meta": repr(w)})
        Zs = random_space(rng, rng.randint(1, size))
        maps_xy = list(monotone_maps(X, Y))
        maps_yz = list(monotone_maps(Y, Zs))
        fm = ContinuousMap(X, Y, rng.choice(maps_xy))
        gm = ContinuousMap(Y, Zs, rng.choice(maps_yz))
        ok = functor_map(fm)(mu) == pushforward(fm, mu) and pushforward_table(fm, mu) == to_table(pushforward(fm, mu))
        report.record("functor_map_is_pushforward", ok, None if ok else {"mu.val": mu})
        ok = functor_map(fm.then(gm))(mu) == functor_map(gm)(functor_map(fm)(mu))
        report.record("functor_composition", ok, None if ok else {"mu.val": mu})
        ok = functor_map(ContinuousMap.identity(X))(mu) == mu
        report.record("functor_identity", ok, None if ok else {"mu.val": mu})
    return report


def disintegration_cases(trials: int = 1000, seed: int = 0, max_size: int = 4, report: LawReport | None = None) -> LawReport:
    """``int h d(f^dagger mu) = int (x -> int h df(x)) dmu`` on random triples."""
    report = LawReport() if report is None else report
    rng = random.Random(seed)
    for _ in range(trials):
        X = random_space(rng, rng.randint(1, max_size))
        Y = random_space(rng, rng.randint(1, max_size))
        f = random_kernel(rng, X, Y, 8)
        h = random_lsc(rng, Y, 4)
        mu = random_valuation(rng, X, 8)
        res = check_disintegration(h, f, mu)
        wit = None if res else {"source.poset": X, "target.poset": Y, "kernel.ker": f, "h.fun": h, "mu.val": mu}
        report.record("disintegration", res.lhs == res.rhs, wit)
        report.record("disintegration_inner_monotone", res.inner_monotone, wit)
    return report


def monad_suite(max_size: int = 3, trials: int = 1000, seed: int = 0) -> LawReport:
    report = manes_exhaustive(max_size, min(max_size, 2))
    manes_random(trials, seed, max(max_size + 1, 1), 8, report)
    monad_extras(max(trials // 5, 1), seed + 1, max_size + 1, report)
    disintegration_cases(trials, seed + 2, max_size + 1, report)
    return report


# integral


def _point_functional(nu: SimpleValuation) -> Callable[[LscFun], object]:
    """``h -> sum_x c_x h(x)`` written directly, not through the integral."""
    return lambda h: sum((c * h(x) for x, c in nu.terms.items()), Fraction(0))


def riesz_round_trips(max_size: int = 3, max_den: int = 4, report: LawReport | None = None) -> LawReport:
    """Both Riesz round trips on every space up to isomorphism and every
    valuation with denominators at most ``max_den``."""
    report = LawReport() if report is None else report
    values = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2), INF)
    for X in spaces_up_to_iso(max_size):
        funs = list(monotone_functions(X, values))
        for nu in valuations_with_denominator(X, max_den):
            table, rep = valuation_from_functional(functional_of(nu), X)
            ok = rep.ok and table == to_table(nu) and decompose(table) == nu
            report.record("riesz_valuation_functional_valuation", ok, None if ok else {"space.poset": X, "mu.val": nu})
            phi = _point_functional(nu)
            table, rep = valuation_from_functional(phi, X)
            back = functional_of(table)
            ok = rep.ok and all(back(h) == phi(h) for h in funs)
            report.record("riesz_functional_valuation_functional", ok, None if ok else {"space.poset": X, "mu.val": nu})
            ok = all(integrate(chi(X, U), nu) == evaluate(nu, U) for U in X.opens)
            report.record("integral_of_characteristic", ok, None if ok else {"space.poset": X, "mu.val": nu})
    return report


def change_of_variables(max_size: int = 3, max_den: int = 4, seed: int = 0, report: LawReport | None = None) -> LawReport:
    """``int g d(f_* mu) = int (g . f) dmu`` for every continuous ``f``.

    Spaces run up to isomorphism; ``g`` runs over the characteristic
    functions of all opens plus two seeded functions taking several values,
    one of them infinite somewhere when the space allows it.
    """
    report = LawReport() if report is None else report
    rng = random.Random(seed)
    spaces = spaces_up_to_iso(max_size)
    vals = {X: valuations_with_denominator(X, max_den) for X in spaces}
    funs = {}
    for Y in spaces:
        rich = [random_lsc(rng, Y, 4, inf_prob=0.0), random_lsc(rng, Y, 4, inf_prob=0.3)]
        funs[Y] = [chi(Y, V) for V in Y.opens] + rich
    for X in spaces:
        for Y in spaces:
            for graph in monotone_maps(X, Y):
                f = ContinuousMap(X, Y, graph)
                pulled = [(g, LscFun(X, [g(graph[x]) for x in X.points])) for g in funs[Y]]
                for mu in vals[X]:
                    image = pushforward(f, mu)
                    bad = next((g for g, gf in pulled if integrate(g, image) != integrate(gf, mu)), None)
                    report.record(
                        "change_of_variables",
                        bad is None,
                        None if bad is None else {"source.poset": X, "target.poset": Y, "map.map": f, "g.fun": bad, "mu.val": mu},
                    )
    return report


def decompose_round_trips(per_space: int = 500, seed: int = 0, max_size: int = 4, max_den: int = 8, report: LawReport | None = None) -> LawReport:
    report = LawReport() if report is None else report
    rng = random.Random(seed)
    for X in all_spaces(max_size):
        for _ in range(per_space):
            nu = random_valuation(rng, X, max_den)
            t = to_table(nu)
            res = validate_table(t)
            report.record("table_axioms", res.ok, None if res.ok else {"space.poset": X, "table.vtab": t, "violation.txt": res.describe(X)})
            try:
                back = decompose(t)
                ok = back == nu and to_table(back) == t
            except _valuation.NonRepresentableError:
                ok = False
            report.record("decompose_round_trip", ok, None if ok else {"space.poset": X, "table.vtab": t})
    return report


def fubini_cases(trials: int = 500, seed: int = 0, max_size: int = 3, report: LawReport | None = None) -> LawReport:
    report = LawReport() if report is None else report
    rng = random.Random(seed)
    for _ in range(trials):
        X = random_space(rng, rng.randint(1, max_size))
        Y = random_space(rng, rng.randint(1, max_size))
        P = product_space(X, Y)
        f = random_lsc(rng, P, 4)
        mu, nu = random_valuation(rng, X), random_valuation(rng, Y)
        res = check_fubini(f, mu, nu)
        report.record("fubini", bool(res), None if res else {"x.poset": X, "y.poset": Y, "f": repr(f), "mu.val": mu, "nu.val": nu})
    return report


def integral_properties(trials: int = 500, seed: int = 0, max_size: int = 4, report: LawReport | None = None) -> LawReport:
    """Linearity in both arguments, step approximation, Schroeder-Simpson recovery."""
    report = LawReport() if report is None else report
    rng = random.Random(seed)
    for _ in range(trials):
        X = random_space(rng, rng.randint(1, max_size))
        h, k = random_lsc(rng, X), random_lsc(rng, X)
        mu, nu = random_valuation(rng, X), random_valuation(rng, X)
        r, s = Fraction(rng.randint(0, 6), 3), Fraction(rng.randint(0, 6), 4)
        wit = {"space.poset": X, "h.fun": h, "k.fun": k, "mu.val": mu, "nu.val": nu}
        ok = integrate(r * h + s * k, mu) == r * integrate(h, mu) + s * integrate(k, mu)
        report.record("integral_linear_in_function", ok, None if ok else wit)
        ok = integrate(h, r * mu + s * nu) == r * integrate(h, mu) + s * integrate(h, nu)
        report.record("integral_linear_in_valuation", ok, None if ok else wit)
        ok = integrate(h, mu) == integrate_direct(h, mu)
        report.record("integral_layer_cake_is_sum", ok, None if ok else wit)
        seq = [integrate(step_approx(h, n), mu) for n in range(1, 7)]
        ok = all(a <= b for a, b in zip(seq, seq[1:])) and all(v <= integrate(h, mu) for v in seq)
        report.record("step_approx_monotone", ok, None if ok else wit)
        ok = all(step_approx(h, n) == step_approx_by_sum(h, n) for n in (1, 2))
        report.record("step_approx_matches_sum", ok, None if ok else wit)
        if INF not in h.values:
            n = int(max(h.values)) + 1
            gap = integrate(h, mu) - integrate(step_approx(h, n), mu)
            ok = 0 <= gap <= Fraction(1, 2**n) * mu.total_mass
            report.record("step_approx_error_bound", ok, None if ok else wit)
        lam = functional_of(mu)
        rec = ss_recover(lambda v: integrate(h, v), X)
        ok = rec == h and all(integrate(rec, v) == integrate(h, v) for v in (mu, nu))
        report.record("schroeder_simpson_recovery", ok, None if ok else wit)
        ok = lam(chi(X, X.full)) == mu.total_mass
        report.record("riesz_total_mass", ok, None if ok else wit)
    return report


def integral_suite(max_size: int = 3, trials: int = 500, seed: int = 0) -> LawReport:
    report = riesz_round_trips(max_size, 4)
    change_of_variables(max_size, 4, seed, report=report)
    decompose_round_trips(max(trials // 5, 1), seed, max_size + 1, 8, report)
    fubini_cases(trials, seed + 1, min(max_size, 3), report)
    integral_properties(trials, seed + 2, max_size + 1, report)
    return report


# algebra


def barycentre_coherence(max_elems: int = 5, per_lattice: int = 200, seed: int = 0, report: LawReport | None = None) -> LawReport:
    report = LawReport() if report is None else report
    rng = random.Random(seed)
    for L in all_lattices(max_elems):
        C = FiniteCone.of_lattice(L)
        for _ in range(per_lattice):
            nu = random_valuation(rng, L.space, 4)
            found = barycentre_search(nu, C)
            b = lattice_barycentre(nu, C, check=False)
            ok = found == {b} and standard_barycentre(nu, C) == b
            report.record("barycentre_coherence", ok, None if ok else {"lattice.poset": L.space, "mu.val": nu})
    return report


def algebra_laws(max_elems: int = 4, metas: int = 200, seed: int = 0, report: LawReport | None = None) -> LawReport:
    report = LawReport() if report is None else report
    rng = random.Random(seed)
    for L in all_lattices(max_elems):
        C = FiniteCone.of_lattice(L)
        beta = AlgebraMap.lattice_beta(C)
        ws = [random_meta_valuation(rng, L.space, outer=3, inner=3, max_den=4) for _ in range(metas)]
        check_algebra_laws(beta, ws, report=report)
        ind = induced_cone(beta)
        report.record("induced_cone_matches", ind.ok, None if ind.ok else {"lattice.poset": L.space, "mismatch": repr(ind.mismatches[0])})
        report.record("join_jointly_monotone", join_monotone(C), None)
        ok = check_algebra_laws(AlgebraMap.standard(C), ws[:20]).ok
        report.record("standard_barycentre_is_algebra", ok, None if ok else {"lattice.poset": L.space})
        for nu in (random_valuation(rng, L.space) for _ in range(20)):
            for x0 in L.points:
                U = frozenset(L.points) - L.space.down(x0)
                try:
                    beta_halfspace_equiv(nu, U, C)
                    ok = True
                except AssertionError:
                    ok = False
                report.record("beta_halfspace_equivalence", ok, None if ok else {"lattice.poset": L.space, "mu.val": nu})
        for graph in monotone_maps(L.space, L.space):
            fbar = extend_linear(graph, L.space, C)
            other = lambda nu, graph=graph: L.join_all(sorted({graph[x] for x in nu.terms}, key=str))
            vals = [random_valuation(rng, L.space) for _ in range(5)]
            try:
                ok = extension_uniqueness_witness(fbar, other, L.space, vals) is None
            except AlgebraError:
                ok = False
            report.record("linear_extension_unique", ok, None if ok else {"lattice.poset": L.space})
    return report


def morphism_sweep(max_elems: int = 4, coeffs=(Fraction(0), Fraction(1, 4), Fraction(1)), report: LawReport | None = None) -> LawReport:
    report = LawReport() if report is None else report
    lats = all_lattices(max_elems)
    for L1 in lats:
        C1 = FiniteCone.of_lattice(L1)
        alpha = AlgebraMap.lattice_beta(C1)
        vals = lattice_valuations(C1, coeffs)
        for L2 in lats:
            C2 = FiniteCone.of_lattice(L2)
            beta = AlgebraMap.lattice_beta(C2)
            for graph in monotone_maps(L1.space, L2.space):
                v = morphism_iff_linear(graph, alpha, beta, vals)
                report.record("morphism_iff_linear", v.agree, None if v.agree else {"source.poset": L1.space, "target.poset": L2.space, "map.map": "".join(f"{point_label(x)} -> {point_label(y)}\n" for x, y in graph.items())})
    return report


def funspace_barycentre_cases(max_size: int = 3, per_space: int = 10, seed: int = 0, max_den: int = 4, report: LawReport | None = None) -> LawReport:
    report = LawReport() if report is None else report
    rng = random.Random(seed)
    for X in all_spaces(max_size):
        mus = valuations_with_denominator(X, max_den)
        for _ in range(per_space):
            fs = [random_lsc(rng, X, 4) for _ in range(rng.randint(1, 3))]
            nu = SimpleValuation([(Fraction(rng.randint(1, 4), rng.randint(1, 4)), f) for f in fs])
            w = funspace_barycentre_witness(nu, X, mus)
            report.record("funspace_barycentre", w is None, None if w is None else {"space.poset": X, "mu.val": w, "nu": repr(nu)})
    return report


def algebra_suite(max_size: int = 4, trials: int = 200, seed: int = 0) -> LawReport:
    report = barycentre_coherence(max_size + 1, trials, seed)
    algebra_laws(max_size, trials, seed + 1, report)
    morphism_sweep(max_size, report=report)
    funspace_barycentre_cases(min(max_size, 3), 10, seed + 2, 4, report)
    return report


# cone


def separation_sweep(max_elems: int = 4, report: LawReport | None = None) -> LawReport:
    """Every disjoint pair (nonempty convex A, open convex U)."""
    report = LawReport() if report is None else report
    for L in all_lattices(max_elems):
        C = FiniteCone.of_lattice(L)
        pts = L.points
        subsets = [frozenset(c) for k in range(len(pts) + 1) for c in itertools.combinations(pts, k)]
        convex = [A for A in subsets if A and is_convex(A, C)]
        open_convex = [U for U in upsets(L.space.order_desc, L.space.leq) if is_convex(U, C)]
        for A in convex:
            for U in open_convex:
                if A & U:
                    continue
                lam = keimel_separate(A, U, C)
                ok = separates(lam, A, U)
                report.record("keimel_separation", ok, None if ok else {"lattice.poset": L.space, "A": sorted(A), "U": sorted(U)})
    return report


def cone_suite(max_size: int = 4, trials: int = 100, seed: int = 0) -> LawReport:
    report = LawReport()
    rng = random.Random(seed)
    for L in all_lattices(max_size + 1):
        C = FiniteCone.of_lattice(L)
        report.merge(check_cone_axioms(C))
        duals = dual_cone(L)
        ok = len(duals) == len(L) and dual_order_reversing(L, duals)
        report.record("dual_cone_is_opposite_lattice", ok, None if ok else {"lattice.poset": L.space})
        ok = all(is_linear(d, C, EXTRAT) for d in duals)
        report.record("dual_functionals_linear", ok, None if ok else {"lattice.poset": L.space})
        flags = classify_convexity(C)
        report.record("locally_linear", flags.locally_linear, None if flags.locally_linear else {"lattice.poset": L.space})
        ok, _ = convex_t0_check(C)
        report.record("convex_t0", ok, None if ok else {"lattice.poset": L.space})
    separation_sweep(max_size, report)
    # linear retractions between small lattice cones
    lats = all_lattices(min(max_size, 4))
    for L1 in lats:
        C1 = FiniteCone.of_lattice(L1)
        for L2 in lats:
            if len(L2) > len(L1):
                continue
            C2 = FiniteCone.of_lattice(L2)
            for rg in monotone_maps(L1.space, L2.space):
                if not is_linear(rg.__getitem__, C1, C2):
                    continue
                for sg in monotone_maps(L2.space, L1.space):
                    if all(rg[sg[y]] == y for y in L2.points):
                        r = LinearMap(C1, C2, rg)
                        ok = check_retract_wlc(r, sg.__getitem__)
                        report.record("linear_retract_weakly_locally_convex", ok, None if ok else {"source.poset": L1.space, "target.poset": L2.space})
    sample = [Fraction(0), Fraction(1, 3), Fraction(2), INF] + [Fraction(rng.randint(0, 9), rng.randint(1, 4)) for _ in range(3)]
    report.merge(check_cone_axioms(EXTRAT, sample))
    X = random_space(rng, 3)
    report.merge(check_cone_axioms(FiniteCone.funspace(X), [random_lsc(rng, X) for _ in range(4)]))
    return report


# topology


def topology_suite(max_size: int = 4, trials: int = 0, seed: int = 0) -> LawReport:
    report = LawReport()
    for X in all_spaces(max_size):
        point, scott = topologies_on_opens(X)
        report.record("point_topology_equals_scott", point == scott, None if point == scott else {"space.poset": X})
        brute = {frozenset(c) for k in range(len(X) + 1) for c in itertools.combinations(X.points, k) if all(y in c for x in c for y in X.up(x))}
        ok = brute == set(X.opens)
        report.record("opens_are_upsets", ok, None if ok else {"space.poset": X})
    small = list(all_spaces(min(max_size, 3)))
    for X in small:
        for Y in small:
            for graph in itertools.product(Y.points, repeat=len(X)):
                g = dict(zip(X.points, graph))
                ok = is_monotone(X, Y, g) == preserves_opens(X, Y, g)
                report.record("continuous_iff_monotone", ok, None if ok else {"source.poset": X, "target.poset": Y, "map": repr(g)})
    return report


def run_suite(name: str, max_size: int | None = None, trials: int | None = None, seed: int = 0, fault: str | None = None) -> LawReport:
    """Run a named suite; ``None`` bounds take the suite defaults."""
    defaults = {
        "monad": (monad_suite, 3, 1000),
        "integral": (integral_suite, 3, 500),
        "algebra": (algebra_suite, 4, 200),
        "cone": (cone_suite, 4, 100),
        "topology": (topology_suite, 4, 0),
    }
    if name not in defaults:
        raise ValueError(f"unknown suite {name!r}")
    fn, size, n = defaults[name]
    with injected_fault(fault):
        report = fn(size if max_size is None else max_size, n if trials is None else trials, seed)
        if fault is not None:
            # the suites above only build valid tables, so this law sees the fault
            rng = random.Random(seed)
            for X in all_spaces(2):
                _record_table(report, random_valuation(rng, X, 4, zero_prob=0))
    return report
