from __future__ import annotations

import itertools
from fractions import Fraction as F

import pytest

from pvk.cone import (
    EXTRAT,
    ConeError,
    FiniteCone,
    LinearMap,
    SeparationError,
    check_cone_axioms,
    check_retract_wlc,
    classify_convexity,
    convex_t0_check,
    dual_cone,
    dual_order_reversing,
    is_convex,
    is_directed,
    is_half_space,
    is_linear,
    keimel_separate,
    parse_subset,
    principal_functional,
    separates,
)
from pvk.extrat import INF
from pvk.integral import LscFun
from pvk.sampling import all_lattices, chain_lattice
from pvk.space import FinSpace, check_lattice

FINE = [F(k, 8) for k in range(9)]


def mixtures_closed(A, C) -> bool:
    """Oracle: closure under r.a + (1-r).b for r on a finer grid."""
    return all(C.add(C.scale(r, a), C.scale(1 - r, b)) in A for a in A for b in A for r in FINE)


def lattice_cones(max_n: int):
    return [FiniteCone.of_lattice(L) for L in all_lattices(max_n)]


def subsets(xs):
    for k in range(len(xs) + 1):
        yield from (frozenset(c) for c in itertools.combinations(xs, k))


class TestAxioms:
    @pytest.mark.parametrize("C", lattice_cones(5), ids=repr)
    def test_lattice_cone_axioms(self, C):
        assert check_cone_axioms(C).ok

    def test_extrat_axioms(self):
        assert check_cone_axioms(EXTRAT, [F(0), F(1, 3), F(2), INF]).ok

    def test_funspace_axioms(self, S2):
        C = FiniteCone.funspace(S2)
        fs = [LscFun(S2, v) for v in ([0, 0], [1, 3], [F(1, 2), INF])]
        assert check_cone_axioms(C, fs).ok
        with pytest.raises(ConeError):
            C.carrier

    def test_lattice_operations(self, MC):
        assert MC.add("a", "b") == "1"
        assert MC.scale(F(1, 4), "a") == "a" and MC.scale(0, "a") == "0"
        with pytest.raises(ConeError):
            MC.scale(INF, "a")


class TestConvexity:
    def test_examples(self, MC):
        assert not is_convex({"a", "b"}, MC)
        assert is_convex({"a"}, MC)
        assert is_convex({"0", "a", "1"}, MC)
        assert is_half_space({"a", "b", "1"}, MC)
        assert is_half_space({"a", "1"}, MC)
        assert not is_half_space({"a", "b"}, MC)

    @pytest.mark.parametrize("C", lattice_cones(5), ids=repr)
    def test_against_fine_grid(self, C):
        for A in subsets(C.carrier):
            assert is_convex(A, C) == mixtures_closed(A, C)
            if A and is_convex(A, C):
                assert is_directed(A, C)

    def test_directed_does_not_imply_convex(self):
        # 0 < a, b < c < 1: {a, b, 1} is directed but a v b = c is missing
        S = FinSpace.from_pairs(["0", "a", "b", "c", "1"], [("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("c", "1")])
        C = FiniteCone.of_lattice(check_lattice(S))
        A = {"a", "b", "1"}
        assert is_directed(A, C) and not is_convex(A, C)
        assert C.add("a", "b") == "c"

    def test_extrat_intervals(self):
        assert is_convex({F(0), F(1)}, EXTRAT) is False
        assert is_convex({F(0)}, EXTRAT)
        with pytest.raises(ConeError):
            is_convex(set(), FiniteCone.funspace(chain_lattice(2).space))

    @pytest.mark.parametrize("C", lattice_cones(5), ids=repr)
    def test_classification(self, C):
        flags = classify_convexity(C)
        assert flags.weakly_locally_convex and flags.locally_convex and flags.locally_linear

    def test_chain_all_true(self):
        f = classify_convexity(FiniteCone.of_lattice(chain_lattice(2)))
        assert (f.weakly_locally_convex, f.locally_convex, f.locally_linear) == (True, True, True)


class TestDual:
    def test_sizes(self, MC):
        assert len(dual_cone(MC)) == 4
        assert len(dual_cone(chain_lattice(1))) == 1
        assert dual_cone(chain_lattice(1))[0].graph == {"0": 0}
        assert len(dual_cone(chain_lattice(2))) == 2

    def test_diamond_maps(self, MC, M):
        for x0, lam in zip(M.points, dual_cone(MC)):
            assert {x for x in M.points if lam(x) is INF} == set(M.points) - M.space.down(x0)
            assert all(lam(x) == 0 for x in M.space.down(x0))

    @pytest.mark.parametrize("C", lattice_cones(5), ids=repr)
    def test_brute_force_with_finite_values(self, C):
        # monotone linear maps into {0, 1, 2, inf}: only {0, inf}-valued ones survive
        pts = C.carrier
        found = []
        for vals in itertools.product([F(0), F(1), F(2), INF], repeat=len(pts)):
            g = dict(zip(pts, vals))
            if all(g[x] <= g[y] for x in pts for y in pts if C.leq(x, y)) and is_linear(g.__getitem__, C, EXTRAT):
                found.append(g)
        assert sorted(map(sorted_items, found)) == sorted(sorted_items(d.graph) for d in dual_cone(C))
        assert dual_order_reversing(C.lattice)

    def test_convex_t0(self, MC):
        ok, family = convex_t0_check(MC)
        assert ok
        lam = family["a", "b"]
        assert (lam("a"), lam("b")) in {(0, INF), (INF, 0)}
        lam = principal_functional(MC, "a")
        assert (lam("a"), lam("b")) == (0, INF)


def sorted_items(g):
    return sorted((k, str(v)) for k, v in g.items())


class TestSeparation:
    def test_examples(self, MC):
        lam = keimel_separate({"0"}, {"a", "1"}, MC)
        assert lam("0") == 0 and lam("a") is INF
        lam = keimel_separate({"0", "b"}, {"a", "1"}, MC)
        assert lam == principal_functional(MC, "b")

    def test_preconditions(self, MC):
        with pytest.raises(SeparationError, match="not disjoint"):
            keimel_separate({"0", "a"}, {"a", "1"}, MC)
        with pytest.raises(SeparationError, match="A is not convex"):
            keimel_separate({"a", "b"}, {"1"}, MC)
        with pytest.raises(SeparationError, match="U is not open"):
            keimel_separate({"0"}, {"a"}, MC)
        with pytest.raises(SeparationError, match="nonempty"):
            keimel_separate(set(), {"1"}, MC)

    @pytest.mark.parametrize("C", lattice_cones(4), ids=repr)
    def test_exhaustive(self, C):
        S = C.lattice.space
        n = 0
        for A in subsets(C.carrier):
            if not A or not mixtures_closed(A, C):
                continue
            for U in S.opens:
                if U & A or not mixtures_closed(U, C):
                    continue
                lam = keimel_separate(A, U, C)
                assert separates(lam, A, U)
                assert all(lam(x) <= 1 < lam(y) for x in A for y in U)
                n += 1
        assert n > 0

    def test_parse_subset(self, MC):
        assert parse_subset("0, b", MC) == {"0", "b"}
        with pytest.raises(ConeError):
            parse_subset("z", MC)


class TestRetracts:
    def test_identity(self, MC, M):
        r = LinearMap(MC, MC, {x: x for x in M.points})
        assert check_retract_wlc(r, r)

    def test_collapse(self, MC):
        two = FiniteCone.of_lattice(chain_lattice(2))
        r = LinearMap(MC, two, {"0": "0", "b": "0", "a": "1", "1": "1"})
        s = {"0": "0", "1": "a"}.__getitem__
        assert check_retract_wlc(r, s)

    def test_non_linear_rejected(self, MC):
        two = FiniteCone.of_lattice(chain_lattice(2))
        r = LinearMap(MC, two, {"0": "1", "b": "1", "a": "1", "1": "1"})
        with pytest.raises(ConeError, match="not linear"):
            check_retract_wlc(r, {"0": "0", "1": "1"}.__getitem__)
