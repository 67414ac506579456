from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from pvk.sampling import all_posets, all_spaces, random_space, spaces_up_to_iso
from pvk.space import (
    ContinuousMap,
    FinSpace,
    ParseError,
    SpaceError,
    all_maps,
    check_lattice,
    is_monotone,
    monotone_maps,
    parse_map,
    parse_space,
    preserves_opens,
    product_space,
    topologies_on_opens,
)


def brute_opens(s: FinSpace) -> set:
    out = set()
    for k in range(len(s) + 1):
        for c in itertools.combinations(s.points, k):
            if all(y in c for x in c for y in s.points if s.leq(x, y)):
                out.add(frozenset(c))
    return out


def test_parse_chain():
    s = parse_space("point a\npoint b\nle a b\n")
    assert s.leq("a", "b") and not s.leq("b", "a")


def test_parse_antichain():
    s = parse_space("point a\npoint b\n")
    assert not s.leq("a", "b") and not s.leq("b", "a")


def test_parse_rejects_cycle():
    with pytest.raises(ParseError, match="not T0") as e:
        parse_space("point a\npoint b\nle a b\nle b a\n")
    assert e.value.line == 4


def test_parse_positions():
    with pytest.raises(ParseError) as e:
        parse_space("point a\nle a zz\n", "x.poset")
    assert (e.value.line, e.value.col) == (2, 6)
    assert str(e.value).startswith("x.poset:2:6:")


def test_parse_unknown_directive():
    with pytest.raises(ParseError, match="unknown directive"):
        parse_space("pt a\n")


def test_to_text_round_trip(M):
    s = M.space
    assert parse_space(s.to_text()) == s


def test_opens_examples(S2, D2, M):
    assert set(S2.opens) == {frozenset(), frozenset({"top"}), frozenset({"bot", "top"})}
    assert len(D2.opens) == 4
    expected = [set(), {"1"}, {"a", "1"}, {"b", "1"}, {"a", "b", "1"}, {"0", "a", "b", "1"}]
    assert set(M.space.opens) == {frozenset(e) for e in expected}


def test_opens_are_upsets_exhaustive():
    for s in all_spaces(4):
        assert set(s.opens) == brute_opens(s)


def test_poset_counts():
    assert [sum(1 for _ in all_posets(n)) for n in range(1, 5)] == [1, 3, 19, 219]
    assert [len(spaces_up_to_iso(n, n)) for n in range(1, 5)] == [1, 2, 5, 16]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_topology_collapse(n):
    for s in spaces_up_to_iso(n, n):
        point, scott = topologies_on_opens(s)
        assert point == scott


def test_products(S2, D2):
    sq = product_space(S2, S2)
    assert len(sq) == 4 and sq.leq(("bot", "bot"), ("top", "top"))
    assert not sq.leq(("bot", "top"), ("top", "bot"))
    dd = product_space(D2, D2)
    assert all(not dd.leq(x, y) for x in dd.points for y in dd.points if x != y)
    sd = product_space(S2, D2)
    assert sd.leq(("bot", "a"), ("top", "a")) and not sd.leq(("bot", "a"), ("top", "b"))


def test_lattice_examples(M, D2):
    assert M.join("a", "b") == "1" and M.meet("a", "b") == "0"
    with pytest.raises(SpaceError, match=r"no join for \(a,b\)"):
        check_lattice(D2)
    check_lattice(FinSpace.chain(["x", "y"]))


def test_continuous_iff_monotone():
    spaces = list(all_spaces(3))
    for X in spaces:
        for Y in spaces:
            for g in all_maps(X, Y):
                assert is_monotone(X, Y, g) == preserves_opens(X, Y, g)


def test_monotone_maps_matches_filter(S2, D2):
    for X, Y in [(S2, D2), (D2, S2), (S2, S2)]:
        fast = sorted(sorted(g.items()) for g in monotone_maps(X, Y))
        slow = sorted(sorted(g.items()) for g in all_maps(X, Y) if is_monotone(X, Y, g))
        assert fast == slow


def test_continuous_map(S2, D2):
    with pytest.raises(SpaceError, match="not monotone"):
        ContinuousMap(S2, FinSpace.chain(["top", "bot"]), {"bot": "bot", "top": "top"})
    f = ContinuousMap(D2, S2, {"a": "top", "b": "bot"})
    assert f.preimage({"top"}) == {"a"}
    assert parse_map(f.to_text(), D2, S2) == f


def test_parse_map_errors(D2, S2):
    with pytest.raises(ParseError, match="unknown target point"):
        parse_map("a -> q\nb -> top\n", D2, S2)
    with pytest.raises(ParseError, match="no image"):
        parse_map("a -> top\n", D2, S2)


@given(st.integers(0, 2**32), st.integers(1, 5))
def test_random_space_is_poset(seed, n):
    import random

    s = random_space(random.Random(seed), n)
    for x, y, z in itertools.product(s.points, repeat=3):
        if s.leq(x, y) and s.leq(y, z):
            assert s.leq(x, z)
        if s.leq(x, y) and s.leq(y, x):
            assert x == y
    assert set(s.opens) == brute_opens(s)
