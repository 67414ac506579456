"""Finite T0 spaces presented as posets.

A finite T0 space is the same thing as a finite poset under its specialization
order; the open sets are exactly the up-sets (Alexandrov topology, which is
also the Scott topology of a finite poset).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

Point = Hashable
OpenSet = frozenset

_IDENT = re.compile(r"[A-Za-z0-9_]+\Z")


class SpaceError(ValueError):
    """Structural problem with a space, map or lattice."""


class ParseError(ValueError):
    """Malformed input text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, col: int = 0, source: str | None = None):
        self.message = message
        self.line = line
        self.col = col
        self.source = source
        where = f"{source}:" if source else ""
        if line:
            where += f"{line}:{col}: "
        elif where:
            where += " "
        super().__init__(f"{where}{message}")


def point_label(x: Point) -> str:
    if isinstance(x, tuple):
        return "(" + ",".join(point_label(p) for p in x) + ")"
    return str(x)


def reflexive_transitive_closure(points: Sequence[Point], pairs: Iterable[tuple[Point, Point]]) -> frozenset:
    above: dict[Point, set] = {p: {p} for p in points}
    for x, y in pairs:
        above[x].add(y)
    # Warshall on adjacency sets
    for k in points:
        for i in points:
            if k in above[i]:
                above[i] |= above[k]
    return frozenset((x, y) for x in points for y in above[x])


@dataclass(frozen=True, eq=False)
class FinSpace:
    """A finite poset; ``le`` holds the reflexive-transitive closure."""

    points: tuple
    le: frozenset
    name: str = field(default="")

    def __post_init__(self) -> None:
        if len(set(self.points)) != len(self.points):
            raise SpaceError("duplicate point")
        for x, y in self.le:
            if x != y and (y, x) in self.le:
                raise SpaceError(f"not T0: {point_label(x)} <= {point_label(y)} <= {point_label(x)}")

    @classmethod
    def from_pairs(cls, points: Iterable[Point], pairs: Iterable[tuple[Point, Point]] = (), name: str = "") -> "FinSpace":
        pts = tuple(points)
        known = set(pts)
        pairs = list(pairs)
        for x, y in pairs:
            for p in (x, y):
                if p not in known:
                    raise SpaceError(f"unknown point {point_label(p)}")
        return cls(pts, reflexive_transitive_closure(pts, pairs), name)

    @classmethod
    def discrete(cls, points: Iterable[Point], name: str = "") -> "FinSpace":
        return cls.from_pairs(points, (), name)

    @classmethod
    def chain(cls, points: Iterable[Point], name: str = "") -> "FinSpace":
        pts = tuple(points)
        return cls.from_pairs(pts, zip(pts, pts[1:]), name)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FinSpace):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _key(self):
        return (self.points, self.le)

    @cached_property
    def _hash(self) -> int:
        return hash((self.points, self.le))

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<FinSpace{label} {len(self.points)} points>"

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, x: object) -> bool:
        return x in self._index

    @cached_property
    def _index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    def index(self, x: Point) -> int:
        return self._index[x]

    def leq(self, x: Point, y: Point) -> bool:
        return (x, y) in self.le

    @cached_property
    def _up(self) -> dict:
        up: dict[Point, set] = {p: set() for p in self.points}
        for x, y in self.le:
            up[x].add(y)
        return {p: frozenset(s) for p, s in up.items()}

    @cached_property
    def _down(self) -> dict:
        down: dict[Point, set] = {p: set() for p in self.points}
        for x, y in self.le:
            down[y].add(x)
        return {p: frozenset(s) for p, s in down.items()}

    def up(self, x: Point) -> frozenset:
        return self._up[x]

    def down(self, x: Point) -> frozenset:
        return self._down[x]

    def up_closure(self, xs: Iterable[Point]) -> frozenset:
        out: set = set()
        for x in xs:
            out |= self._up[x]
        return frozenset(out)

    def down_closure(self, xs: Iterable[Point]) -> frozenset:
        out: set = set()
        for x in xs:
            out |= self._down[x]
        return frozenset(out)

    def is_open(self, subset: Iterable[Point]) -> bool:
        s = frozenset(subset)
        return s <= self._index.keys() and all(self._up[x] <= s for x in s)

    @cached_property
    def order_desc(self) -> tuple:
        """A linear extension of the order, maximal points first."""
        return tuple(sorted(self.points, key=lambda p: (-len(self._down[p]), self._index[p])))

    @cached_property
    def opens(self) -> tuple:
        """All open sets, smallest first (ties broken by declaration order)."""
        return tuple(sorted(upsets(self.order_desc, self.leq), key=self.subset_key))

    def subset_key(self, s: Iterable[Point]):
        return (len(s), sorted(self._index[p] for p in s))

    def sorted_points(self, xs: Iterable[Point]) -> list:
        return sorted(xs, key=self._index.__getitem__)

    def format_subset(self, s: Iterable[Point]) -> str:
        return "{" + ",".join(point_label(p) for p in self.sorted_points(s)) + "}"

    @cached_property
    def full(self) -> frozenset:
        return frozenset(self.points)

    def minimal(self, xs: Iterable[Point]) -> list:
        xs = list(xs)
        return [x for x in xs if not any(y != x and self.leq(y, x) for y in xs)]

    def maximal(self, xs: Iterable[Point]) -> list:
        xs = list(xs)
        return [x for x in xs if not any(y != x and self.leq(x, y) for y in xs)]

    def to_text(self) -> str:
        """Serialize as a poset file (covering pairs only)."""
        lines = [f"space {self.name}"] if self.name else []
        lines += [f"point {point_label(p)}" for p in self.points]
        for x, y in self.covers():
            lines.append(f"le {point_label(x)} {point_label(y)}")
        return "\n".join(lines) + "\n"

    def covers(self) -> list[tuple[Point, Point]]:
        out = []
        for x in self.points:
            for y in self.points:
                if x != y and self.leq(x, y):
                    if not any(z not in (x, y) and self.leq(x, z) and self.leq(z, y) for z in self.points):
                        out.append((x, y))
        return out


def upsets(elements_desc: Sequence, leq: Callable[[object, object], bool]) -> Iterator[frozenset]:
    """Enumerate the up-sets of a finite poset.

    ``elements_desc`` must list elements so that every element comes after all
    elements strictly above it.  An element may join the set only if everything
    strictly above it already has.
    """
    elems = list(elements_desc)
    strictly_above = [[j for j in range(i) if leq(elems[i], elems[j]) and not leq(elems[j], elems[i])] for i in range(len(elems))]

    chosen = [False] * len(elems)

    def rec(i: int) -> Iterator[frozenset]:
        if i == len(elems):
            yield frozenset(e for e, c in zip(elems, chosen) if c)
            return
        chosen[i] = False
        yield from rec(i + 1)
        if all(chosen[j] for j in strictly_above[i]):
            chosen[i] = True
            yield from rec(i + 1)
            chosen[i] = False

    yield from rec(0)


def open_sets(s: FinSpace) -> tuple:
    return s.opens


def _union_closure(generators: Iterable[frozenset]) -> frozenset:
    family = {frozenset()}
    for g in generators:
        family |= {f | g for f in family}
    return frozenset(family)


def topologies_on_opens(s: FinSpace) -> tuple[frozenset, frozenset]:
    """Point topology and Scott topology on the lattice of opens of ``s``.

    Both are returned as families of subsets of ``s.opens``.  The point
    topology is generated by the subbasic sets ``{U : x in U}``; the Scott
    topology is the family of up-sets of the opens under inclusion.
    """
    opens = s.opens
    subbasic = [frozenset(U for U in opens if x in U) for x in s.points]
    basis = {frozenset(opens)}
    for r in range(1, len(subbasic) + 1):
        for combo in itertools.combinations(subbasic, r):
            basis.add(frozenset.intersection(*combo))
    point_topology = _union_closure(basis)
    desc = sorted(opens, key=len, reverse=True)
    scott_topology = frozenset(upsets(desc, lambda a, b: a <= b))
    return point_topology, scott_topology


def product_space(s: FinSpace, t: FinSpace) -> FinSpace:
    points = tuple((x, y) for x in s.points for y in t.points)
    le = frozenset(((x, y), (x2, y2)) for (x, x2) in s.le for (y, y2) in t.le)
    name = f"{s.name}x{t.name}" if s.name and t.name else ""
    return FinSpace(points, le, name)


@dataclass(frozen=True, eq=False)
class ContinuousMap:
    """A monotone (equivalently, continuous) map between finite spaces."""

    source: FinSpace
    target: FinSpace
    graph: Mapping

    def __post_init__(self) -> None:
        graph = dict(self.graph)
        if set(graph) != set(self.source.points):
            raise SpaceError("map must be total on the source space")
        for x, y in graph.items():
            if y not in self.target:
                raise SpaceError(f"map value {point_label(y)} is not a target point")
        for x, x2 in self.source.le:
            if not self.target.leq(graph[x], graph[x2]):
                raise SpaceError(
                    f"map is not monotone: {point_label(x)} <= {point_label(x2)} but "
                    f"{point_label(graph[x])} </= {point_label(graph[x2])}"
                )
        object.__setattr__(self, "graph", graph)

    def __call__(self, x: Point) -> Point:
        return self.graph[x]

    def preimage(self, subset: Iterable[Point]) -> frozenset:
        s = frozenset(subset)
        return frozenset(x for x, y in self.graph.items() if y in s)

    def then(self, other: "ContinuousMap") -> "ContinuousMap":
        """``other`` after ``self``."""
        return ContinuousMap(self.source, other.target, {x: other(y) for x, y in self.graph.items()})

    @classmethod
    def identity(cls, s: FinSpace) -> "ContinuousMap":
        return cls(s, s, {x: x for x in s.points})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ContinuousMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.graph == other.graph

    def __hash__(self) -> int:
        return hash((self.source, self.target, frozenset(self.graph.items())))

    def to_text(self) -> str:
        """Serialize as a map file (``<x> -> <y>`` lines)."""
        return "".join(f"{point_label(x)} -> {point_label(self.graph[x])}\n" for x in self.source.points)


def is_monotone(source: FinSpace, target: FinSpace, graph: Mapping) -> bool:
    return all(target.leq(graph[x], graph[y]) for x, y in source.le)


def preserves_opens(source: FinSpace, target: FinSpace, graph: Mapping) -> bool:
    """Topological continuity: preimages of opens are open."""
    return all(source.is_open(x for x in source.points if graph[x] in U) for U in target.opens)


def all_maps(source: FinSpace, target: FinSpace) -> Iterator[dict]:
    for values in itertools.product(target.points, repeat=len(source)):
        yield dict(zip(source.points, values))


def monotone_maps(source: FinSpace, target: FinSpace) -> Iterator[dict]:
    """All monotone maps, built point by point along a linear extension."""
    order = list(reversed(source.order_desc))
    below = {x: [y for y in source.down(x) if y != x] for x in order}
    graph: dict = {}

    def rec(i: int) -> Iterator[dict]:
        if i == len(order):
            yield dict(graph)
            return
        x = order[i]
        for v in target.points:
            if all(target.leq(graph[y], v) for y in below[x]):
                graph[x] = v
                yield from rec(i + 1)
        graph.pop(x, None)

    yield from rec(0)


@dataclass(frozen=True, eq=False)
class FinLattice:
    """A finite lattice with its join and meet tables."""

    space: FinSpace
    join_table: Mapping
    meet_table: Mapping
    bottom: Point
    top: Point

    @property
    def points(self) -> tuple:
        return self.space.points

    def __len__(self) -> int:
        return len(self.space)

    def join(self, x: Point, y: Point) -> Point:
        return self.join_table[x, y]

    def meet(self, x: Point, y: Point) -> Point:
        return self.meet_table[x, y]

    def join_all(self, xs: Iterable[Point]) -> Point:
        acc = self.bottom
        for x in xs:
            acc = self.join_table[acc, x]
        return acc

    def leq(self, x: Point, y: Point) -> bool:
        return self.space.leq(x, y)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinLattice):
            return NotImplemented
        return self.space == other.space

    def __hash__(self) -> int:
        return hash(("lattice", self.space))

    def __repr__(self) -> str:
        return f"<FinLattice {self.space.name or ''} {len(self)} elements>"


def check_lattice(s: FinSpace) -> FinLattice:
    """Return the lattice structure of ``s`` or raise naming a witness.

    Binary joins are checked first, then the bottom; once both exist every
    pair also has a meet.
    """
    join: dict = {}
    for x in s.points:
        for y in s.points:
            ubs = [z for z in s.points if s.leq(x, z) and s.leq(y, z)]
            least = [z for z in ubs if all(s.leq(z, w) for w in ubs)]
            if not least:
                raise SpaceError(f"no join for ({point_label(x)},{point_label(y)})")
            join[x, y] = least[0]
    bottoms = [x for x in s.points if all(s.leq(x, y) for y in s.points)]
    if not bottoms:
        raise SpaceError("no bottom")
    top = next(x for x in s.points if all(s.leq(y, x) for y in s.points))
    meet: dict = {}
    for x in s.points:
        for y in s.points:
            lbs = [z for z in s.points if s.leq(z, x) and s.leq(z, y)]
            meet[x, y] = next(z for z in lbs if all(s.leq(w, z) for w in lbs))
    return FinLattice(s, join, meet, bottoms[0], top)


def parse_space(text: str, source: str | None = None) -> FinSpace:
    """Parse the poset file format (``space``/``point``/``le`` directives)."""
    name = ""
    points: list[str] = []
    pairs: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        words = line.split()
        if not words:
            continue
        col = len(line) - len(line.lstrip()) + 1
        head, args = words[0], words[1:]

        def arg_col(k: int) -> int:
            pos = line.find(args[k], col - 1 + len(head))
            return pos + 1

        if head == "space":
            if len(args) != 1 or not _IDENT.match(args[0]):
                raise ParseError("expected 'space <name>'", lineno, col, source)
            if points or name:
                raise ParseError("'space' header must come first", lineno, col, source)
            name = args[0]
        elif head == "point":
            if len(args) != 1:
                raise ParseError("expected 'point <id>'", lineno, col, source)
            if not _IDENT.match(args[0]):
                raise ParseError(f"invalid point name {args[0]!r}", lineno, arg_col(0), source)
            if args[0] in points:
                raise ParseError(f"duplicate point {args[0]}", lineno, arg_col(0), source)
            points.append(args[0])
        elif head == "le":
            if len(args) != 2:
                raise ParseError("expected 'le <id> <id>'", lineno, col, source)
            for k, a in enumerate(args):
                if a not in points:
                    raise ParseError(f"unknown point {a}", lineno, arg_col(k), source)
            pairs.append((args[0], args[1], lineno))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col, source)
    pts = tuple(points)
    closure = reflexive_transitive_closure(pts, [(x, y) for x, y, _ in pairs])
    for x, y in closure:
        if x != y and (y, x) in closure:
            line = max((ln for a, b, ln in pairs if {a, b} <= {x, y}), default=0)
            raise ParseError(f"not T0: {x} <= {y} <= {x}", line, 1, source)
    return FinSpace(pts, closure, name)


def parse_map(text: str, source: FinSpace, target: FinSpace, name: str | None = None) -> ContinuousMap:
    """Parse ``<x> -> <y>`` lines into a continuous map; monotonicity is validated."""
    graph: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = re.match(r"\s*(\S+)\s*->\s*(\S+)\s*\Z", line)
        if not m:
            raise ParseError("expected '<point> -> <point>'", lineno, 1, name)
        x, y = m.groups()
        if x not in source:
            raise ParseError(f"unknown source point {x}", lineno, m.start(1) + 1, name)
        if x in graph:
            raise ParseError(f"duplicate point {x}", lineno, m.start(1) + 1, name)
        if y not in target:
            raise ParseError(f"unknown target point {y}", lineno, m.start(2) + 1, name)
        graph[x] = y
    missing = [x for x in source.points if x not in graph]
    if missing:
        raise ParseError(f"no image for source point {point_label(missing[0])}", 0, 0, name)
    return ContinuousMap(source, target, graph)


def load_space(text: str, source: str | None = None) -> FinSpace:
    return parse_space(text, source)
