"""Finite cones, linear functionals, convexity and Keimel separation.

Three cone variants are provided:

* ``lattice``: a finite lattice with ``x + y = x v y``, ``r.x = x`` for
  ``r > 0`` and ``0.x = bottom``.  Its topology is the Alexandrov topology of
  the lattice order.
* ``extrat``: the extended nonnegative rationals.
* ``funspace``: monotone functions ``X -> extended rationals`` under pointwise
  operations.  The carrier is infinite, so only element-level operations are
  available there.

On a lattice cone every lower semicontinuous linear functional has the form
``inf * chi_{L - down(x0)}``; :func:`dual_cone` recovers this by brute force.
"""

from __future__ import annotations

import functools
import itertools
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .extrat import INF, ext, fmt
from .integral import LscFun
from .report import LawReport
from .space import FinLattice, FinSpace, Point, point_label

CONE_SCALARS = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2))
LATTICE_MIXTURES = (Fraction(0), Fraction(1, 2), Fraction(1))
SAMPLED_MIXTURES = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


class ConeError(ValueError):
    pass


class FiniteCone:
    """A cone given by its variant tag and operations."""

    __slots__ = ("kind", "lattice", "space")

    def __init__(self, kind: str, lattice: FinLattice | None = None, space: FinSpace | None = None):
        if kind not in ("lattice", "extrat", "funspace"):
            raise ConeError(f"unknown cone variant {kind!r}")
        if kind == "lattice" and lattice is None:
            raise ConeError("lattice cone needs a lattice")
        if kind == "funspace" and space is None:
            raise ConeError("function-space cone needs a space")
        self.kind = kind
        self.lattice = lattice
        self.space = space

    @classmethod
    def of_lattice(cls, lattice: FinLattice) -> "FiniteCone":
        return cls("lattice", lattice=lattice)

    @classmethod
    def extrat(cls) -> "FiniteCone":
        return cls("extrat")

    @classmethod
    def funspace(cls, space: FinSpace) -> "FiniteCone":
        return cls("funspace", space=space)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteCone):
            return NotImplemented
        return (self.kind, self.lattice, self.space) == (other.kind, other.lattice, other.space)

    def __hash__(self) -> int:
        return hash((self.kind, self.lattice, self.space))

    def __repr__(self) -> str:
        if self.kind == "lattice":
            return f"FiniteCone(lattice, {len(self.lattice)} elements)"
        if self.kind == "funspace":
            return f"FiniteCone(funspace, {len(self.space)} points)"
        return "FiniteCone(extrat)"

    @property
    def is_finite(self) -> bool:
        return self.kind == "lattice"

    @property
    def carrier(self) -> tuple:
        if self.kind != "lattice":
            raise ConeError(f"the {self.kind} cone has an infinite carrier")
        return self.lattice.points

    @property
    def zero(self):
        if self.kind == "lattice":
            return self.lattice.bottom
        if self.kind == "extrat":
            return Fraction(0)
        return LscFun(self.space, [Fraction(0)] * len(self.space))

    def add(self, x, y):
        if self.kind == "lattice":
            return self.lattice.join(x, y)
        return x + y

    def scale(self, r, x):
        r = ext(r)
        if r is INF:
            raise ConeError("scalars must be finite")
        if self.kind == "lattice":
            return x if r > 0 else self.lattice.bottom
        return r * x

    def leq(self, x, y) -> bool:
        if self.kind == "lattice":
            return self.lattice.leq(x, y)
        return x <= y

    def contains(self, x) -> bool:
        if self.kind == "lattice":
            return x in self.lattice.space
        if self.kind == "extrat":
            try:
                ext(x)
            except (TypeError, ValueError):
                return False
            return True
        return isinstance(x, LscFun) and x.space == self.space

    def combination(self, pairs: Iterable[tuple[Fraction, object]]):
        """``sum r_i . x_i`` folded with the cone operations."""
        acc = self.zero
        for r, x in pairs:
            acc = self.add(acc, self.scale(r, x))
        return acc

    def opens(self) -> tuple:
        return self._finite_space().opens

    def _finite_space(self) -> FinSpace:
        if self.kind != "lattice":
            raise ConeError(f"the {self.kind} cone has an infinite carrier")
        return self.lattice.space

    def format(self, x) -> str:
        if self.kind == "lattice":
            return point_label(x)
        if self.kind == "extrat":
            return fmt(x)
        return repr(x)


EXTRAT = FiniteCone.extrat()


class LinearMap:
    """A map between cones, by finite graph or by callable."""

    __slots__ = ("source", "target", "graph", "fn", "name")

    def __init__(self, source: FiniteCone, target: FiniteCone, graph: Mapping | None = None, fn: Callable | None = None, name: str = ""):
        if (graph is None) == (fn is None):
            raise ConeError("give exactly one of graph and fn")
        if graph is not None:
            graph = dict(graph)
            if set(graph) != set(source.carrier):
                raise ConeError("graph must be total on the source carrier")
        self.source = source
        self.target = target
        self.graph = graph
        self.fn = fn
        self.name = name

    def __call__(self, x):
        return self.graph[x] if self.graph is not None else self.fn(x)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearMap):
            return NotImplemented
        if self.graph is None or other.graph is None:
            return self is other
        return self.source == other.source and self.target == other.target and self.graph == other.graph

    def __hash__(self) -> int:
        if self.graph is None:
            return id(self)
        return hash((self.source, self.target, frozenset(self.graph.items())))

    def __repr__(self) -> str:
        if self.name:
            return f"LinearMap({self.name})"
        if self.graph is None:
            return "LinearMap(<callable>)"
        body = ", ".join(f"{point_label(x)}: {self.target.format(v)}" for x, v in self.graph.items())
        return f"LinearMap({body})"

    def to_text(self) -> str:
        return "".join(f"{point_label(x)} -> {self.target.format(self.graph[x])}\n" for x in self.source.carrier)


def principal_functional(C: FiniteCone, x0: Point) -> LinearMap:
    """``inf * chi_{C - down(x0)}`` on a lattice cone."""
    down = C.lattice.space.down(x0)
    graph = {x: (Fraction(0) if x in down else INF) for x in C.carrier}
    return LinearMap(C, EXTRAT, graph, name=f"inf*chi[not <= {point_label(x0)}]")


def is_monotone_map(f: Callable, C: FiniteCone, D: FiniteCone) -> bool:
    return all(D.leq(f(x), f(y)) for x in C.carrier for y in C.carrier if C.leq(x, y))


def linearity_witness(f: Callable, C: FiniteCone, D: FiniteCone, scalars: Sequence = CONE_SCALARS):
    """First ``(r, x, s, y)`` with ``f(r.x + s.y) != r.f(x) + s.f(y)``, or ``None``."""
    pts = C.carrier
    fx = {x: f(x) for x in pts}
    for x, y in itertools.product(pts, repeat=2):
        for r, s in itertools.product(scalars, repeat=2):
            lhs = fx[C.add(C.scale(r, x), C.scale(s, y))]
            rhs = D.add(D.scale(r, fx[x]), D.scale(s, fx[y]))
            if lhs != rhs:
                return (r, x, s, y)
    return None


def is_linear(f: Callable, C: FiniteCone, D: FiniteCone, scalars: Sequence = CONE_SCALARS) -> bool:
    return linearity_witness(f, C, D, scalars) is None


def check_cone_axioms(C: FiniteCone, elements: Iterable | None = None, scalars: Sequence = CONE_SCALARS) -> LawReport:
    """The cone axioms on every pair of elements and every pair of scalars.

    ``elements`` defaults to the whole carrier of a finite cone; infinite
    variants need an explicit sample.
    """
    if elements is None:
        elements = C.carrier
    xs = list(elements)
    rep = LawReport()
    z = C.zero
    for x in xs:
        rep.record("one_times_x", C.scale(1, x) == x, x)
        rep.record("zero_times_x", C.scale(0, x) == z, x)
        rep.record("zero_is_neutral", C.add(x, z) == x, x)
        for r in scalars:
            rep.record("r_times_zero", C.scale(r, z) == z, r)
            for s in scalars:
                rep.record("scalar_sum", C.scale(r + s, x) == C.add(C.scale(r, x), C.scale(s, x)), (r, s, x))
                rep.record("scalar_product", C.scale(r * s, x) == C.scale(r, C.scale(s, x)), (r, s, x))
    for x, y in itertools.product(xs, repeat=2):
        rep.record("add_commutative", C.add(x, y) == C.add(y, x), (x, y))
        for w in xs:
            rep.record("add_associative", C.add(C.add(x, y), w) == C.add(x, C.add(y, w)), (x, y, w))
        for r in scalars:
            rep.record("scalar_distributes", C.scale(r, C.add(x, y)) == C.add(C.scale(r, x), C.scale(r, y)), (r, x, y))
    return rep


# convexity


def _subset(A: Iterable, C: FiniteCone) -> frozenset:
    A = frozenset(A)
    for a in A:
        if not C.contains(a):
            raise ConeError(f"{a!r} is not in the cone")
    return A


def convexity_witness(A: Iterable, C: FiniteCone):
    """First ``(r, a, b)`` whose mixture ``r.a + (1-r).b`` leaves ``A``, or ``None``."""
    if C.kind == "funspace":
        raise ConeError("convexity is not decidable on the function-space cone")
    A = _subset(A, C)
    mixtures = LATTICE_MIXTURES if C.kind == "lattice" else SAMPLED_MIXTURES
    for a, b in itertools.product(sorted(A, key=str), repeat=2):
        for r in mixtures:
            if C.add(C.scale(r, a), C.scale(1 - r, b)) not in A:
                return (r, a, b)
    return None


def is_convex(A: Iterable, C: FiniteCone) -> bool:
    """Closure under mixtures ``r.a + (1-r).b``.

    On a lattice cone every mixture with ``0 < r < 1`` equals ``a v b``, so
    ``r`` in ``{0, 1/2, 1}`` decides the question.  Other variants also test
    ``1/4`` and ``3/4``.
    """
    A = frozenset(A)
    ok = convexity_witness(A, C) is None
    if ok and A and C.kind == "lattice":
        # convex subsets of a lattice cone are directed
        assert is_directed(A, C), A
    return ok


def is_directed(A: Iterable, C: FiniteCone) -> bool:
    """Nonempty and every pair has an upper bound inside ``A``."""
    A = frozenset(A)
    if not A:
        return False
    return all(any(C.leq(a, c) and C.leq(b, c) for c in A) for a in A for b in A)


def is_half_space(A: Iterable, C: FiniteCone) -> bool:
    A = _subset(A, C)
    rest = frozenset(C.carrier) - A
    return is_convex(A, C) and is_convex(rest, C)


def open_half_spaces(C: FiniteCone) -> list[frozenset]:
    return [U for U in C.opens() if is_half_space(U, C)]


@dataclass(frozen=True)
class ConvexityFlags:
    weakly_locally_convex: bool
    locally_convex: bool
    locally_linear: bool


def _all_subsets(xs: Sequence) -> Iterable[frozenset]:
    for k in range(len(xs) + 1):
        for c in itertools.combinations(xs, k):
            yield frozenset(c)


def is_weakly_locally_convex(C: FiniteCone) -> bool:
    """Every open ``U`` around ``x`` contains a convex set that is a neighbourhood of ``x``.

    On a finite space the smallest neighbourhood of ``x`` is ``up(x)``, so the
    question is whether a convex ``V`` with ``up(x) <= V <= U`` exists.
    """
    S = C._finite_space()
    for U in S.opens:
        convex_inside = [V for V in _all_subsets(S.sorted_points(U)) if is_convex(V, C)]
        for x in U:
            if not any(S.up(x) <= V for V in convex_inside):
                return False
    return True


def is_locally_convex(C: FiniteCone) -> bool:
    """Every open ``U`` around ``x`` contains an open convex ``V`` around ``x``."""
    S = C._finite_space()
    convex_opens = [V for V in S.opens if is_convex(V, C)]
    return all(any(x in V and V <= U for V in convex_opens) for U in S.opens for x in U)


def generated_topology(space: FinSpace, subbase: Iterable[frozenset]) -> frozenset:
    """Unions of finite intersections of ``subbase``."""
    full = frozenset(space.points)
    basis = {full}
    for W in subbase:
        basis |= {B & W for B in basis}
    opens = {frozenset()}
    for B in basis:
        opens |= {O | B for O in opens}
    return frozenset(opens)


def is_locally_linear(C: FiniteCone) -> bool:
    """The open half-spaces generate the topology."""
    S = C._finite_space()
    return generated_topology(S, open_half_spaces(C)) == frozenset(S.opens)


def classify_convexity(C: FiniteCone) -> ConvexityFlags:
    """Decide the three local convexity notions by enumeration."""
    if C.kind != "lattice":
        raise ConeError("convexity classification needs a finite carrier")
    flags = ConvexityFlags(is_weakly_locally_convex(C), is_locally_convex(C), is_locally_linear(C))
    assert not flags.locally_linear or flags.locally_convex, flags
    assert not flags.locally_convex or flags.weakly_locally_convex, flags
    return flags


# dual cone and separation


def _linear_monotone_functionals(C: FiniteCone, values: Sequence) -> list[dict]:
    pts = C.carrier
    out = []
    for vals in itertools.product(values, repeat=len(pts)):
        g = dict(zip(pts, vals))
        if is_monotone_map(g.__getitem__, C, EXTRAT) and is_linear(g.__getitem__, C, EXTRAT):
            out.append(g)
    return out


def dual_cone(L: FinLattice | FiniteCone) -> list[LinearMap]:
    """All lower semicontinuous linear maps ``L -> extended reals``, one per ``x0``.

    Candidates with values in ``{0, inf}`` are filtered by monotonicity and
    linearity; a second, independent pass over ``{0, 1, inf}``-valued
    candidates must find the same maps.  The result is listed in the order of
    the lattice points, the map for ``x0`` being ``inf * chi_{L - down(x0)}``.
    """
    C = L if isinstance(L, FiniteCone) else FiniteCone.of_lattice(L)
    if C.kind != "lattice":
        raise ConeError("dual_cone needs a lattice cone")
    return list(_dual_cone(C))


@functools.lru_cache(maxsize=256)
def _dual_cone(C: FiniteCone) -> tuple:
    found = _linear_monotone_functionals(C, (Fraction(0), INF))
    grid = _linear_monotone_functionals(C, (Fraction(0), Fraction(1), INF))
    if sorted(map(_key, found)) != sorted(map(_key, grid)):
        raise AssertionError("grid filter disagrees with the {0, inf} enumeration")
    by_x0 = []
    remaining = {_key(g) for g in found}
    for x0 in C.carrier:
        lam = principal_functional(C, x0)
        if _key(lam.graph) not in remaining:
            raise AssertionError(f"missing functional for {point_label(x0)}")
        remaining.discard(_key(lam.graph))
        by_x0.append(lam)
    if remaining:
        raise AssertionError("dual cone has functionals not of the principal form")
    return tuple(by_x0)


def _key(g: Mapping) -> tuple:
    return tuple(sorted(((point_label(k), str(v)) for k, v in g.items())))


def dual_order_reversing(L: FinLattice, duals: Sequence[LinearMap] | None = None) -> bool:
    """``x <= y`` iff ``Lambda_y <= Lambda_x`` pointwise, and ``x -> Lambda_x`` is injective."""
    duals = dual_cone(L) if duals is None else list(duals)
    pts = L.points
    if len(duals) != len(pts) or len({_key(d.graph) for d in duals}) != len(pts):
        return False
    lam = dict(zip(pts, duals))
    for x, y in itertools.product(pts, repeat=2):
        pointwise = all(lam[y](z) <= lam[x](z) for z in pts)
        if L.leq(x, y) != pointwise:
            return False
    return True


class SeparationError(ConeError):
    """A violated precondition of separation, with a witness."""

    def __init__(self, reason: str, witness: object = None):
        self.reason = reason
        self.witness = witness
        super().__init__(reason if witness is None else f"{reason}: {witness}")


def _open_witness(U: frozenset, S: FinSpace):
    for x in S.sorted_points(U):
        for y in S.sorted_points(S.up(x)):
            if y not in U:
                return (x, y)
    return None


def separates(lam: Callable, A: Iterable, U: Iterable) -> bool:
    """``lam(x) <= 1 < lam(y)`` for all ``x`` in ``A`` and ``y`` in ``U``."""
    return all(lam(x) <= 1 for x in A) and all(lam(y) > 1 for y in U)


def keimel_separate(A: Iterable, U: Iterable, C: FiniteCone) -> LinearMap:
    """A functional with ``Lambda <= 1`` on ``A`` and ``> 1`` on ``U``.

    ``A`` is join-closed, so ``x0 = max A`` exists and ``U``, being an up-set
    missing ``x0``, misses ``down(x0)``.  Should that canonical choice fail
    a search over every ``x0`` runs and a warning is raised.
    """
    if C.kind != "lattice":
        raise ConeError("separation is implemented for lattice cones")
    S = C.lattice.space
    A = _subset(A, C)
    U = _subset(U, C)
    if not A:
        raise SeparationError("A must be nonempty")
    w = convexity_witness(A, C)
    if w is not None:
        r, a, b = w
        raise SeparationError("A is not convex", f"{fmt(r)}.{point_label(a)} + {fmt(1 - r)}.{point_label(b)} not in A")
    w = _open_witness(U, S)
    if w is not None:
        raise SeparationError("U is not open", f"{point_label(w[0])} in U, {point_label(w[0])} <= {point_label(w[1])} not in U")
    w = convexity_witness(U, C)
    if w is not None:
        r, a, b = w
        raise SeparationError("U is not convex", f"{fmt(r)}.{point_label(a)} + {fmt(1 - r)}.{point_label(b)} not in U")
    common = S.sorted_points(A & U)
    if common:
        raise SeparationError("A and U are not disjoint", point_label(common[0]))
    x0 = C.lattice.join_all(A)
    lam = principal_functional(C, x0)
    if separates(lam, A, U):
        return lam
    for x in C.carrier:
        alt = principal_functional(C, x)
        if separates(alt, A, U):
            warnings.warn(f"canonical separation at {point_label(x0)} failed; found {point_label(x)} by search")
            return alt
    raise AssertionError("no separating functional found")


def convex_t0_check(C: FiniteCone) -> tuple[bool, dict]:
    """For each ordered pair ``a != b`` a dual functional telling them apart."""
    duals = dual_cone(C)
    family: dict = {}
    for a, b in itertools.permutations(C.carrier, 2):
        lam = next((d for d in duals if d(a) != d(b)), None)
        if lam is None:
            return False, family
        family[a, b] = lam
    return True, family


def check_retract_wlc(r: LinearMap, s: Callable, C: FiniteCone | None = None, D: FiniteCone | None = None) -> bool:
    """Verify that a linear retract of a weakly locally convex lattice cone is weakly locally convex."""
    C = r.source if C is None else C
    D = r.target if D is None else D
    if C.kind != "lattice" or D.kind != "lattice":
        raise ConeError("retractions are checked between lattice cones")
    w = linearity_witness(r, C, D)
    if w is not None:
        raise ConeError(f"r is not linear at {w}")
    if not is_monotone_map(r, C, D):
        raise ConeError("r is not monotone")
    if not is_monotone_map(s, D, C):
        raise ConeError("s is not monotone")
    for y in D.carrier:
        if r(s(y)) != y:
            raise ConeError(f"r . s is not the identity at {point_label(y)}")
    if not is_weakly_locally_convex(C):
        raise ConeError("source cone is not weakly locally convex")
    return is_weakly_locally_convex(D)


def parse_subset(text: str, C: FiniteCone) -> frozenset:
    """Comma-separated point names, e.g. ``"0,b"``."""
    names = [t.strip() for t in text.split(",") if t.strip()]
    lookup = {point_label(p): p for p in C.carrier}
    out = set()
    for n in names:
        if n not in lookup:
            raise ConeError(f"unknown point {n}")
        out.add(lookup[n])
    return frozenset(out)
