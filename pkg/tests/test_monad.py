from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from pvk.integral import LscFun, integrate
from pvk.monad import (
    Kernel,
    KernelError,
    MetaValuation,
    NonContinuousKernel,
    apply_extension,
    check_associativity,
    check_disintegration,
    check_left_unit,
    check_unit_law,
    extend,
    extension_table,
    functor_map,
    kleisli_compose,
    multiply,
    multiply_via_extend,
    parse_kernel,
    unit_kernel,
)
from pvk.sampling import grid_valuations, monotone_kernels, random_kernel, random_lsc, random_space, random_valuation
from pvk.space import ContinuousMap, ParseError
from pvk.valuation import SimpleValuation, decompose, dirac, evaluate, pushforward, zero

seeds = st.integers(0, 2**32)


@pytest.fixture
def f_run(S2, D2):
    """The running kernel S2 -> D2."""
    return Kernel(S2, D2, {"bot": F(1, 2) * dirac("b", D2), "top": SimpleValuation({"a": F(1, 2), "b": F(1, 2)}, D2)})


@pytest.fixture
def half(S2):
    return SimpleValuation({"bot": F(1, 2), "top": F(1, 2)}, S2)


def test_running_extension(f_run, half, D2):
    expected = SimpleValuation({"a": F(1, 4), "b": F(1, 2)}, D2)
    assert apply_extension(f_run, half) == expected
    assert extend(f_run, check=True)(half) == expected
    # the defining integral, open by open
    for U in D2.opens:
        by_hand = sum(r * evaluate(f_run(x), U) for x, r in half.terms.items())
        assert evaluate(expected, U) == by_hand
    assert decompose(extension_table(f_run, half)) == expected


def test_non_continuous_kernel(S2, D2):
    with pytest.raises(NonContinuousKernel) as e:
        Kernel(S2, D2, {"bot": dirac("a", D2), "top": dirac("b", D2)})
    assert e.value.pair == ("bot", "top") and e.value.open == {"a"}


def test_kernel_must_be_total(S2, D2):
    with pytest.raises(KernelError):
        Kernel(S2, D2, {"bot": dirac("a", D2)})


def test_multiplication(D2, half):
    assert multiply(MetaValuation({half: 1})) == half
    w = MetaValuation({dirac("a", D2): F(1, 2), dirac("b", D2): F(1, 2)})
    assert multiply(w) == SimpleValuation({"a": F(1, 2), "b": F(1, 2)}, D2)
    assert multiply(MetaValuation(), D2) == zero(D2)
    assert multiply_via_extend(w) == multiply(w)


def test_functor_is_pushforward(D2, S2, half):
    f = ContinuousMap(D2, S2, {"a": "top", "b": "bot"})
    nu = SimpleValuation({"a": F(1, 3), "b": F(1, 2)}, D2)
    assert functor_map(f)(nu) == pushforward(f, nu)


def test_laws_exhaustive_on_chain(S2, D2, f_run):
    grid = grid_valuations(S2)
    kernels = list(monotone_kernels(S2, S2, grid))
    report = None
    for f in kernels:
        report = check_left_unit(f, report)
        for mu in grid:
            check_unit_law(mu, report)
    for g in monotone_kernels(D2, S2, grid):
        check_associativity(f_run, g, grid, report)
    assert report.ok and report.law("manes_iii_associativity").passed == len(grid) * len(list(monotone_kernels(D2, S2, grid)))


def test_zero_kernel_laws(S2):
    z = Kernel(S2, S2, {x: zero(S2) for x in S2.points})
    r = check_left_unit(z)
    check_associativity(z, z, grid_valuations(S2), r)
    check_associativity(z, unit_kernel(S2), grid_valuations(S2), r)
    assert r.ok


def test_monotone_kernels_enumeration(S2):
    grid = grid_valuations(S2)
    brute = 0
    for a in grid:
        for b in grid:
            try:
                Kernel(S2, S2, {"bot": a, "top": b})
                brute += 1
            except NonContinuousKernel:
                pass
    assert len(list(monotone_kernels(S2, S2, grid))) == brute


def test_disintegration_examples(f_run, half, D2, S2):
    h = LscFun(D2, {"a": 2, "b": 1})
    res = check_disintegration(h, f_run, half)
    # f^dagger(half) = 1/4 a + 1/2 b, integral 1/4*2 + 1/2*1
    assert res and res.lhs == res.rhs == 1
    hs = LscFun(S2, {"bot": 1, "top": 3})
    assert check_disintegration(hs, unit_kernel(S2), half).lhs == integrate(hs, half)
    res = check_disintegration(h, f_run, dirac("top", S2))
    assert res.lhs == integrate(h, f_run("top"))


@given(seeds)
def test_random_laws(seed):
    rng = random.Random(seed)
    X, Y, Z = (random_space(rng, rng.randint(1, 4)) for _ in range(3))
    f, g = random_kernel(rng, X, Y), random_kernel(rng, Y, Z)
    mu = random_valuation(rng, X, 8)
    report = check_unit_law(mu)
    check_left_unit(f, report)
    check_associativity(f, g, [mu], report)
    assert report.ok
    assert apply_extension(kleisli_compose(g, f), mu) == apply_extension(g, apply_extension(f, mu))
    h = random_lsc(rng, Y)
    assert check_disintegration(h, f, mu)


@given(seeds)
def test_random_kernels_are_continuous(seed):
    rng = random.Random(seed)
    X, Y = random_space(rng, 4), random_space(rng, 4)
    k = random_kernel(rng, X, Y)
    Kernel(X, Y, k.graph)  # re-validates monotonicity


def test_kernel_file_round_trip(f_run, S2, D2):
    assert parse_kernel(f_run.to_text(), S2, D2) == f_run
    z = Kernel(S2, D2, {x: zero(D2) for x in S2.points})
    assert parse_kernel(z.to_text(), S2, D2) == z


def test_kernel_file_errors(S2, D2):
    with pytest.raises(ParseError, match="no block"):
        parse_kernel("point bot => 1 @ a\n", S2, D2)
    with pytest.raises(ParseError, match="unknown target point") as e:
        parse_kernel("point bot => 1 @ a, 1/2 @ q\n", S2, D2, "k.ker")
    assert e.value.line == 1 and e.value.col == 27
    with pytest.raises(NonContinuousKernel):
        parse_kernel("point bot => 1 @ a\npoint top => 1 @ b\n", S2, D2)


def test_failing_report_is_extended_not_replaced(S2):
    from pvk.report import LawReport

    r = LawReport()
    r.record("earlier", False, "w")
    check_unit_law(dirac("top", S2), r)
    assert set(r.laws) == {"earlier", "manes_i_unit_extension_is_identity"}
    assert r.failures == 1 and r.law("earlier").counterexample == "w"
