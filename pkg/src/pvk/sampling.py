"""Exhaustive enumerators and seeded random generators.

Random generation uses :class:`random.Random` (Mersenne Twister MT19937),
so a fixed seed reproduces the same cases on every platform.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterator, Sequence

from .extrat import INF
from .integral import LscFun
from .monad import Kernel, MetaValuation
from .space import FinLattice, FinSpace, SpaceError, check_lattice
from .valuation import SimpleValuation, stochastic_le

GRID = (Fraction(0), Fraction(1, 2), Fraction(1))
POINT_NAMES = "abcdefgh"


def all_posets(n: int, labels: Sequence | None = None) -> Iterator[FinSpace]:
    """Every labeled poset on ``n`` points (1, 1, 3, 19, 219 for n = 0..4)."""
    pts = tuple(labels) if labels is not None else tuple(POINT_NAMES[:n])
    if len(pts) != n:
        raise ValueError("need one label per point")
    pairs = [(x, y) for x in pts for y in pts if x != y]
    for bits in itertools.product((False, True), repeat=len(pairs)):
        rel = {p for p, b in zip(pairs, bits) if b}
        if any((y, x) in rel for x, y in rel):
            continue
        if any((x, z) not in rel for x, y in rel for y2, z in rel if y == y2 and x != z):
            continue
        yield FinSpace(pts, frozenset(rel | {(x, x) for x in pts}))


def all_spaces(max_n: int, min_n: int = 1) -> Iterator[FinSpace]:
    for n in range(min_n, max_n + 1):
        yield from all_posets(n)


def spaces_up_to_iso(max_n: int, min_n: int = 1) -> list[FinSpace]:
    """One labeled representative per isomorphism class (1, 2, 5, 16 for n = 1..4)."""
    out = []
    for n in range(min_n, max_n + 1):
        seen = set()
        for s in all_posets(n):
            key = _canonical(s)
            if key not in seen:
                seen.add(key)
                out.append(s)
    return out


def _canonical(s: FinSpace) -> tuple:
    idx = {x: i for i, x in enumerate(s.points)}
    rel = [(idx[x], idx[y]) for x, y in s.le]
    best = None
    for perm in itertools.permutations(range(len(s))):
        key = tuple(sorted((perm[i], perm[j]) for i, j in rel))
        if best is None or key < best:
            best = key
    return best


def all_lattices(max_n: int) -> list[FinLattice]:
    """Every lattice with at most ``max_n`` elements, one per isomorphism class.

    A finite lattice with at least two elements is ``0 + P + 1`` for a poset
    ``P``; ``P`` runs over labeled posets and duplicates are removed by a
    canonical form.  Counts for sizes 1..5 are 1, 1, 1, 2, 5.
    """
    out: list[FinLattice] = []
    if max_n >= 1:
        out.append(check_lattice(FinSpace.discrete(["0"])))
    for n in range(2, max_n + 1):
        seen = set()
        for p in all_posets(n - 2):
            pts = ("0",) + p.points + ("1",)
            le = set(p.le) | {("0", x) for x in pts} | {(x, "1") for x in pts}
            s = FinSpace(pts, frozenset(le))
            try:
                lat = check_lattice(s)
            except SpaceError:
                continue
            key = _canonical(s)
            if key not in seen:
                seen.add(key)
                out.append(lat)
    return out


def diamond() -> FinLattice:
    """The four-element lattice ``0 < a, b < 1``."""
    return check_lattice(FinSpace.from_pairs("0ab1", [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")], "M"))


def chain_lattice(n: int) -> FinLattice:
    return check_lattice(FinSpace.chain([str(i) for i in range(n)], f"C{n}"))


def grid_valuations(space: FinSpace, coeffs: Sequence = GRID) -> list[SimpleValuation]:
    """Every valuation whose coefficients all lie in ``coeffs``."""
    return [
        SimpleValuation(dict(zip(space.points, cs)), space)
        for cs in itertools.product(coeffs, repeat=len(space))
    ]


def valuations_with_denominator(space: FinSpace, max_den: int, max_num: int | None = None) -> list[SimpleValuation]:
    """All valuations with coefficients ``k/d`` for ``d <= max_den``, ``k/d <= 1``."""
    coeffs = sorted({Fraction(k, d) for d in range(1, max_den + 1) for k in range(0, (max_num or d) + 1)})
    return grid_valuations(space, coeffs)


def monotone_kernels(source: FinSpace, target: FinSpace, candidates: Sequence[SimpleValuation]) -> Iterator[Kernel]:
    """Every monotone kernel with values drawn from ``candidates``."""
    cands = list(candidates)
    le = [[stochastic_le(a, b) for b in cands] for a in cands]
    order = list(reversed(source.order_desc))
    below = {x: [y for y in source.down(x) if y != x] for x in order}
    choice: dict = {}

    def rec(i: int):
        if i == len(order):
            yield Kernel._raw(source, target, {x: cands[j] for x, j in choice.items()})
            return
        x = order[i]
        for j in range(len(cands)):
            if all(le[choice[y]][j] for y in below[x]):
                choice[x] = j
                yield from rec(i + 1)
        choice.pop(x, None)

    yield from rec(0)


def monotone_functions(space: FinSpace, values: Sequence) -> Iterator[LscFun]:
    """Every monotone function with values in ``values``."""
    vals = sorted(values)
    order = list(reversed(space.order_desc))
    below = {x: [y for y in space.down(x) if y != x] for x in order}
    choice: dict = {}

    def rec(i: int):
        if i == len(order):
            yield LscFun(space, dict(choice))
            return
        x = order[i]
        for v in vals:
            if all(choice[y] <= v for y in below[x]):
                choice[x] = v
                yield from rec(i + 1)
        choice.pop(x, None)

    yield from rec(0)


# random generators


def random_space(rng: random.Random, n: int, density: float = 0.4) -> FinSpace:
    """A random poset: random pairs compatible with a random linear order, closed."""
    pts = list(POINT_NAMES[:n])
    perm = pts[:]
    rng.shuffle(perm)
    pairs = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return FinSpace.from_pairs(pts, pairs)


def random_rational(rng: random.Random, max_den: int, max_value: int = 1) -> Fraction:
    d = rng.randint(1, max_den)
    return Fraction(rng.randint(0, max_value * d), d)


def random_valuation(
    rng: random.Random, space: FinSpace, max_den: int = 4, max_support: int | None = None, zero_prob: float = 0.3
) -> SimpleValuation:
    pts = list(space.points)
    if max_support is not None and len(pts) > max_support:
        pts = rng.sample(pts, max_support)
    terms = {}
    for x in pts:
        if rng.random() >= zero_prob:
            terms[x] = random_rational(rng, max_den)
    return SimpleValuation(terms, space)


def random_lsc(rng: random.Random, space: FinSpace, max_den: int = 4, inf_prob: float = 0.1, max_step: int = 2) -> LscFun:
    """A random monotone function, built upwards along a linear extension."""
    order = list(reversed(space.order_desc))
    vals: dict = {}
    for x in order:
        base = max((vals[y] for y in space.down(x) if y != x), default=Fraction(0))
        if base is INF or rng.random() < inf_prob:
            vals[x] = INF
        elif rng.random() < 0.3:
            vals[x] = base
        else:
            vals[x] = base + random_rational(rng, max_den, max_step)
    return LscFun(space, vals)


def _push_up(rng: random.Random, nu: dict, space: FinSpace, d: int) -> dict:
    """Move random units of mass ``1/d`` to points above; stochastically larger."""
    out = dict(nu)
    for x in list(out):
        units = int(out[x] * d)
        ups = sorted(space.up(x), key=str)
        for _ in range(units):
            if rng.random() < 0.3:
                y = rng.choice(ups)
                out[x] -= Fraction(1, d)
                out[y] = out.get(y, Fraction(0)) + Fraction(1, d)
    return out


def random_kernel(rng: random.Random, source: FinSpace, target: FinSpace, max_den: int = 8) -> Kernel:
    """A random monotone kernel whose coefficients share one denominator ``d <= max_den``.

    Points are visited along a linear extension: each value starts from the
    sum of the values at the points it covers, pushes some mass upwards and
    adds fresh mass, so it dominates everything below it.
    """
    d = rng.randint(1, max_den)
    order = list(reversed(source.order_desc))
    graph: dict = {}
    for x in order:
        lower = [y for y in source.down(x) if y != x]
        covered = [y for y in lower if not any(z != y and source.leq(y, z) for z in lower)]
        base: dict = {}
        for y in covered:
            for p, r in graph[y].terms.items():
                base[p] = base.get(p, Fraction(0)) + r
        base = _push_up(rng, base, target, d)
        for p in target.points:
            if rng.random() < 0.4:
                base[p] = base.get(p, Fraction(0)) + Fraction(rng.randint(1, d), d)
        graph[x] = SimpleValuation(base, target)
    return Kernel(source, target, graph)


def random_meta_valuation(
    rng: random.Random,
    space: FinSpace,
    outer: int = 3,
    inner: int = 3,
    max_den: int = 4,
) -> MetaValuation:
    """``sum R_j delta_{nu_j}`` with at most ``outer`` terms, inner supports at most ``inner``."""
    terms = []
    for _ in range(rng.randint(1, outer)):
        nu = random_valuation(rng, space, max_den, max_support=inner)
        terms.append((random_rational(rng, max_den) or Fraction(1, max_den), nu))
    return MetaValuation(terms)
