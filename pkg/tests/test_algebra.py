from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from pvk.algebra import (
    AlgebraError,
    AlgebraMap,
    barycentre_search,
    beta_halfspace_equiv,
    check_algebra_laws,
    extend_linear,
    extension_uniqueness_witness,
    funspace_barycentre,
    funspace_barycentre_witness,
    induced_cone,
    join_monotone,
    lattice_barycentre,
    lattice_valuations,
    morphism_iff_linear,
    standard_barycentre,
)
from pvk.cone import EXTRAT, FiniteCone
from pvk.extrat import INF
from pvk.integral import LscFun, chi, integrate
from pvk.monad import MetaValuation
from pvk.sampling import all_lattices, chain_lattice, random_lsc, random_meta_valuation, random_valuation
from pvk.valuation import SimpleValuation, dirac, zero

seeds = st.integers(0, 2**32)


@pytest.fixture
def nu_ab(M):
    return SimpleValuation({"a": F(1, 2), "b": F(1, 4)}, M.space)


@pytest.fixture
def two():
    return FiniteCone.of_lattice(chain_lattice(2))


class TestBarycentre:
    def test_diamond_examples(self, MC, M, nu_ab):
        assert barycentre_search(nu_ab, MC) == {"1"}
        assert lattice_barycentre(nu_ab, MC) == "1"
        assert standard_barycentre(nu_ab, MC) == "1"
        assert lattice_barycentre(F(1, 3) * dirac("0", M.space), MC) == "0"
        for x in M.points:
            assert barycentre_search(dirac(x, M.space), MC) == {x}
        assert barycentre_search(zero(M.space), MC) == {"0"}

    def test_chain(self, two):
        assert lattice_barycentre(dirac("1", two.lattice.space), two) == "1"

    def test_extrat_standard(self):
        nu = SimpleValuation({F(2): F(1, 2), F(4): F(1, 4)})
        assert standard_barycentre(nu, EXTRAT) == 2
        assert standard_barycentre(dirac(INF), EXTRAT) is INF

    @pytest.mark.parametrize("L", all_lattices(5), ids=repr)
    def test_search_is_join_of_support(self, L):
        C = FiniteCone.of_lattice(L)
        for nu in lattice_valuations(C, (F(0), F(1, 3), F(1))):
            b = C.lattice.join_all(nu.terms)
            assert barycentre_search(nu, C) == {b} and standard_barycentre(nu, C) == b

    def test_funspace(self, S2):
        U, V = chi(S2, {"top"}), chi(S2, S2.full)
        nu = SimpleValuation({U: F(1, 2), V: F(1, 2)})
        assert funspace_barycentre(nu, S2) == F(1, 2) * (U + V)
        f = LscFun(S2, {"bot": 1, "top": 3})
        assert funspace_barycentre(dirac(f), S2) == f

    @given(seeds)
    def test_funspace_barycentre_equation(self, seed):
        from pvk.sampling import random_space

        rng = random.Random(seed)
        X = random_space(rng, rng.randint(1, 3))
        nu = SimpleValuation([(F(rng.randint(1, 4), 4), random_lsc(rng, X)) for _ in range(3)])
        mus = [random_valuation(rng, X, 4) for _ in range(5)]
        assert funspace_barycentre_witness(nu, X, mus) is None


class TestAlgebraLaws:
    def test_diamond(self, MC, M):
        beta = AlgebraMap.lattice_beta(MC)
        w = MetaValuation({dirac("a", M.space): F(1, 2), dirac("b", M.space): F(1, 2)})
        r = check_algebra_laws(beta, [w, MetaValuation({SimpleValuation({"a": F(1, 2), "b": F(1, 4)}, M.space): 1})])
        assert r.ok and r.law("algebra_unit").passed == 4

    @given(seeds)
    def test_random_metas(self, seed):
        rng = random.Random(seed)
        L = rng.choice(all_lattices(4))
        C = FiniteCone.of_lattice(L)
        metas = [random_meta_valuation(rng, L.space, 3, 3, 4) for _ in range(5)]
        for alpha in (AlgebraMap.lattice_beta(C), AlgebraMap.standard(C)):
            assert check_algebra_laws(alpha, metas).ok

    def test_induced_cone(self, MC):
        ind = induced_cone(AlgebraMap.lattice_beta(MC))
        assert ind.ok and ind.add["a", "b"] == "1"

    def test_wrong_alpha_is_caught(self, MC):
        # "meet of support" is not a structure map
        bad = AlgebraMap(MC, lambda nu: MC.lattice.space.points[0] if not nu.terms else min(nu.terms, key=lambda x: len(MC.lattice.space.down(x))))
        ind = induced_cone(bad)
        assert not ind.ok


class TestMorphisms:
    def test_examples(self, MC, M, two):
        alpha, beta = AlgebraMap.lattice_beta(MC), AlgebraMap.lattice_beta(two)
        vals = lattice_valuations(MC, (F(0), F(1, 4), F(1)))
        f = {"0": "0", "b": "0", "a": "1", "1": "1"}
        v = morphism_iff_linear(f, alpha, beta, vals)
        assert v.linear and v.morphism
        top = {x: "1" for x in M.points}
        v = morphism_iff_linear(top, alpha, beta, vals)
        assert not v.linear and not v.morphism and v.witness == zero(M.space)
        ident = {x: x for x in M.points}
        assert morphism_iff_linear(ident, alpha, AlgebraMap.lattice_beta(MC), vals).linear

    def test_non_monotone_rejected(self, MC, two):
        with pytest.raises(AlgebraError):
            morphism_iff_linear({"0": "1", "a": "0", "b": "0", "1": "1"}, AlgebraMap.lattice_beta(MC), AlgebraMap.lattice_beta(two), [])


class TestFreeness:
    def test_identity_extension_is_barycentre(self, MC, M):
        fbar = extend_linear({x: x for x in M.points}, M.space, MC)
        for nu in lattice_valuations(MC):
            assert fbar(nu) == standard_barycentre(nu, MC)

    def test_constant_bottom(self, MC, M):
        fbar = extend_linear({x: "0" for x in M.points}, M.space, MC)
        assert fbar(SimpleValuation({"a": 1, "1": F(1, 2)}, M.space)) == "0"

    def test_extrat_target(self, S2):
        fbar = extend_linear({"bot": F(1), "top": F(3)}, S2, EXTRAT)
        half = SimpleValuation({"bot": F(1, 2), "top": F(1, 2)}, S2)
        assert fbar(half) == 2 == integrate(LscFun(S2, {"bot": 1, "top": 3}), half)

    def test_uniqueness_on_dirac_masses(self, MC, M):
        fbar = extend_linear({x: x for x in M.points}, M.space, MC)
        beta = AlgebraMap.lattice_beta(MC)
        assert extension_uniqueness_witness(fbar, beta, M.space, lattice_valuations(MC)) is None

    def test_non_monotone_rejected(self, MC, S2):
        with pytest.raises(AlgebraError):
            extend_linear({"bot": "1", "top": "0"}, S2, MC)


class TestHalfSpaces:
    def test_examples(self, MC, M):
        U = frozenset(M.points) - M.space.down("a")
        assert beta_halfspace_equiv(F(1, 2) * dirac("a", M.space), U, MC) is False
        assert beta_halfspace_equiv(SimpleValuation({"a": F(1, 2), "b": F(1, 4)}, M.space), U, MC) is True
        assert beta_halfspace_equiv(zero(M.space), U, MC) is False

    def test_exhaustive(self):
        for L in all_lattices(4):
            C = FiniteCone.of_lattice(L)
            for x0 in L.points:
                U = frozenset(L.points) - L.space.down(x0)
                for nu in lattice_valuations(C, (F(0), F(1, 2))):
                    beta_halfspace_equiv(nu, U, C)

    def test_rejects_other_sets(self, MC):
        with pytest.raises(AlgebraError):
            beta_halfspace_equiv(zero(MC.lattice.space), {"a"}, MC)

    def test_join_is_continuous(self):
        assert all(join_monotone(FiniteCone.of_lattice(L)) for L in all_lattices(5))
