"""Continuous valuations on finite spaces.

On a finite space every continuous valuation with finite values is simple,
i.e. a finite nonnegative combination of Dirac masses.  Two representations
are provided: :class:`SimpleValuation` (coefficients on points) and
:class:`ValuationTable` (a value for every open set), with ``to_table`` and
``decompose`` converting between them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .extrat import INF, ExtRat, ext, fmt, parse_extrat, parse_rational
from .space import ContinuousMap, FinSpace, ParseError, Point, point_label, product_space


class ValuationError(ValueError):
    pass


class NonRepresentableError(ValuationError):
    """A table could not be written as a nonnegative combination of Diracs."""


def _coef(r) -> Fraction:
    if r is INF:
        raise ValuationError("simple valuations have finite coefficients")
    if isinstance(r, bool) or not isinstance(r, (int, Fraction)):
        raise TypeError(f"coefficient must be a rational, got {r!r}")
    r = Fraction(r)
    if r < 0:
        raise ValuationError(f"negative coefficient {r}")
    return r


class SimpleValuation:
    """A finite combination ``sum r_i * delta_{x_i}`` in canonical form.

    Each point appears once and zero coefficients are dropped, so equality is
    structural.  ``space`` is the finite space the points live in; it is
    ``None`` for valuations over infinite carriers (extended reals, function
    cones, valuations themselves).
    """

    __slots__ = ("terms", "space", "_hash")

    def __init__(self, terms: Mapping | Iterable = (), space: FinSpace | None = None):
        merged: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else ((x, r) for r, x in terms)
        for x, r in items:
            r = _coef(r)
            if space is not None and x not in space:
                raise ValuationError(f"unknown point {point_label(x)}")
            merged[x] = merged.get(x, 0) + r
        self.terms = {x: r for x, r in merged.items() if r != 0}
        self.space = space
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, space: FinSpace | None) -> "SimpleValuation":
        # trusted constructor: terms already merged, positive Fractions
        v = object.__new__(cls)
        v.terms = terms
        v.space = space
        v._hash = None
        return v

    @property
    def points(self) -> frozenset:
        return frozenset(self.terms)

    @property
    def total_mass(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, x: Point) -> Fraction:
        return self.terms.get(x, Fraction(0))

    def mass(self, subset) -> Fraction:
        """Sum of coefficients of points inside ``subset`` (no openness check)."""
        return sum((r for x, r in self.terms.items() if x in subset), Fraction(0))

    def __call__(self, U) -> Fraction:
        return evaluate(self, U)

    def __add__(self, other: "SimpleValuation") -> "SimpleValuation":
        if not isinstance(other, SimpleValuation):
            return NotImplemented
        return add(self, other)

    def __rmul__(self, r) -> "SimpleValuation":
        return scale(r, self)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, SimpleValuation):
            return NotImplemented
        return self.terms == other.terms and self.space == other.space

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self.terms.items()), self.space))
        return self._hash

    def sorted_terms(self) -> list[tuple[Point, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: point_label(t[0]))

    def __repr__(self) -> str:
        if not self.terms:
            return "SimpleValuation(0)"
        body = " + ".join(f"{fmt(r)}*d[{point_label(x)}]" for x, r in self.sorted_terms())
        return f"SimpleValuation({body})"

    def to_text(self) -> str:
        """Lines ``<rational> @ <point>`` sorted by point name."""
        return "".join(f"{fmt(r)} @ {point_label(x)}\n" for x, r in self.sorted_terms())


def zero(space: FinSpace | None = None) -> SimpleValuation:
    return SimpleValuation._raw({}, space)


def dirac(x: Point, space: FinSpace | None = None) -> SimpleValuation:
    if space is not None and x not in space:
        raise ValuationError(f"unknown point {point_label(x)}")
    return SimpleValuation._raw({x: Fraction(1)}, space)


def _same_space(mu: SimpleValuation, nu: SimpleValuation) -> FinSpace | None:
    if mu.space is not nu.space and mu.space != nu.space:
        raise ValuationError("space mismatch")
    return mu.space


def evaluate(nu: SimpleValuation, U) -> Fraction:
    """Measure of the open set ``U``."""
    if nu.space is not None and not nu.space.is_open(U):
        raise ValuationError(f"not an open set: {nu.space.format_subset(U)}")
    return nu.mass(U)


def add(mu: SimpleValuation, nu: SimpleValuation) -> SimpleValuation:
    space = _same_space(mu, nu)
    terms = dict(mu.terms)
    for x, r in nu.terms.items():
        terms[x] = terms[x] + r if x in terms else r
    return SimpleValuation._raw(terms, space)


def scale(r, nu: SimpleValuation) -> SimpleValuation:
    r = _coef(r)
    if r == 0:
        return zero(nu.space)
    if r == 1:
        return nu
    return SimpleValuation._raw({x: r * c for x, c in nu.terms.items()}, nu.space)


def linear_combination(pairs: Iterable[tuple[Fraction, SimpleValuation]], space: FinSpace | None = None) -> SimpleValuation:
    """``sum r_j * nu_j`` over ``(r_j, nu_j)`` pairs."""
    terms: dict = {}
    for r, nu in pairs:
        if type(r) is not Fraction or r < 0:
            r = _coef(r)
        if space is None:
            space = nu.space
        elif nu.space is not space and nu.space != space:
            raise ValuationError("space mismatch")
        if not r:
            continue
        unit = r == 1
        for x, c in nu.terms.items():
            v = c if unit else r * c
            terms[x] = terms[x] + v if x in terms else v
    return SimpleValuation._raw(terms, space)


def stochastic_witness(mu: SimpleValuation, nu: SimpleValuation):
    """First open ``U`` with ``mu(U) > nu(U)``, or ``None``."""
    space = _same_space(mu, nu)
    if space is None:
        raise ValuationError("stochastic order needs a finite space")
    for U in space.opens:
        if mu.mass(U) > nu.mass(U):
            return U
    return None


def stochastic_le(mu: SimpleValuation, nu: SimpleValuation) -> bool:
    return stochastic_witness(mu, nu) is None


def pushforward(f: ContinuousMap, nu: SimpleValuation) -> SimpleValuation:
    """Image valuation ``sum a_i delta_{f(x_i)}``."""
    if nu.space is not None and nu.space != f.source:
        raise ValuationError("space mismatch")
    terms: dict = {}
    for x, r in nu.terms.items():
        y = f(x)
        terms[y] = terms[y] + r if y in terms else r
    return SimpleValuation._raw(terms, f.target)


def pushforward_table(f: ContinuousMap, nu: "SimpleValuation | ValuationTable") -> "ValuationTable":
    """Image valuation by preimages: ``V -> nu(f^-1(V))``."""
    measure = nu.__getitem__ if isinstance(nu, ValuationTable) else nu.mass
    return ValuationTable(f.target, {V: measure(f.preimage(V)) for V in f.target.opens})


def support(nu: SimpleValuation, space: FinSpace | None = None) -> frozenset:
    """Complement of the largest open set of measure zero."""
    space = nu.space if space is None else space
    if space is None:
        raise ValuationError("support needs a finite space")
    null: set = set()
    for U in space.opens:
        if nu.mass(U) == 0:
            null |= U
    return space.full - null


def product_valuation(mu: SimpleValuation, nu: SimpleValuation, space: FinSpace | None = None) -> SimpleValuation:
    if space is None and mu.space is not None and nu.space is not None:
        space = product_space(mu.space, nu.space)
    terms = {(x, y): r * s for x, r in mu.terms.items() for y, s in nu.terms.items()}
    return SimpleValuation._raw(terms, space)


def marginal(nu: SimpleValuation, axis: int, space: FinSpace | None = None) -> SimpleValuation:
    terms: dict = {}
    for xy, r in nu.terms.items():
        p = xy[axis]
        terms[p] = terms[p] + r if p in terms else r
    return SimpleValuation._raw(terms, space)


@dataclass(frozen=True, eq=False)
class ValuationTable:
    """A function from the opens of ``space`` to extended rationals."""

    space: FinSpace
    values: Mapping

    def __post_init__(self) -> None:
        values = {frozenset(U): ext(v) for U, v in dict(self.values).items()}
        for U in values:
            if not self.space.is_open(U):
                raise ValuationError(f"not an open set: {self.space.format_subset(U)}")
        missing = [U for U in self.space.opens if U not in values]
        if missing:
            raise ValuationError(f"table misses open {self.space.format_subset(missing[0])}")
        object.__setattr__(self, "values", values)

    def __getitem__(self, U) -> ExtRat:
        return self.values[frozenset(U)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ValuationTable):
            return NotImplemented
        return self.space == other.space and self.values == other.values

    def __hash__(self) -> int:
        return hash((self.space, frozenset(self.values.items())))

    def is_finite(self) -> bool:
        return all(v is not INF for v in self.values.values())

    def to_text(self) -> str:
        return "".join(f"{self.space.format_subset(U)} = {fmt(self.values[U])}\n" for U in self.space.opens)

    def __repr__(self) -> str:
        body = ", ".join(f"{self.space.format_subset(U)}: {fmt(self.values[U])}" for U in self.space.opens)
        return f"ValuationTable({body})"


def to_table(nu: SimpleValuation, space: FinSpace | None = None) -> ValuationTable:
    space = nu.space if space is None else space
    if space is None:
        raise ValuationError("to_table needs a finite space")
    return ValuationTable(space, {U: nu.mass(U) for U in space.opens})


@dataclass(frozen=True)
class TableReport:
    """Outcome of checking the valuation axioms on a table."""

    ok: bool
    axiom: str | None = None
    witness: tuple = ()
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def describe(self, space: FinSpace) -> str:
        if self.ok:
            return "ok"
        opens = ", ".join(space.format_subset(U) for U in self.witness)
        return f"{self.axiom} violation at ({opens}): {self.detail}"


def _modular_ok(a: ExtRat, b: ExtRat, union: ExtRat, inter: ExtRat) -> bool:
    return a + b == union + inter


def validate_table(t: ValuationTable) -> TableReport:
    """Check strictness, monotonicity and modularity over all open pairs."""
    space = t.space
    opens = space.opens
    v = t.values
    empty = frozenset()
    if v[empty] != 0:
        return TableReport(False, "strictness", (empty,), f"value of empty set is {fmt(v[empty])}")
    for U in opens:
        for V in opens:
            if U < V and v[U] > v[V]:
                return TableReport(False, "monotonicity", (U, V), f"{fmt(v[U])} > {fmt(v[V])}")
    for i, U in enumerate(opens):
        for V in opens[i + 1:]:
            if not _modular_ok(v[U], v[V], v[U | V], v[U & V]):
                return TableReport(
                    False,
                    "modularity",
                    (U, V),
                    f"{fmt(v[U])} + {fmt(v[V])} != {fmt(v[U | V])} + {fmt(v[U & V])}",
                )
    return TableReport(True)


def mobius_function(space: FinSpace) -> dict:
    """Moebius function of the incidence algebra of ``space``: ``mu[x, y]`` for ``x <= y``."""
    mu: dict = {}
    for x in space.points:
        for y in sorted(space.up(x), key=lambda p: len(space.down(p))):
            if x == y:
                mu[x, y] = 1
            else:
                mu[x, y] = -sum(mu[x, z] for z in space.up(x) if z != y and space.leq(z, y))
    return mu


def decompose(t: ValuationTable) -> SimpleValuation:
    """Recover the simple valuation of a valid finite table.

    Uses ``t(up x) = sum_{y >= x} c_y`` inverted with the Moebius function.
    """
    if not t.is_finite():
        raise ValuationError("decompose needs finite values")
    space = t.space
    mu = mobius_function(space)
    coefs: dict = {}
    for x in space.points:
        c = sum((mu[x, y] * t[space.up(y)] for y in space.up(x)), Fraction(0))
        if c < 0:
            raise NonRepresentableError(f"non-representable: coefficient {c} at {point_label(x)}")
        if c:
            coefs[x] = c
    nu = SimpleValuation._raw(coefs, space)
    for U in space.opens:
        if nu.mass(U) != t[U]:
            raise NonRepresentableError(f"non-representable: mismatch on {space.format_subset(U)}")
    return nu


_VAL_LINE = re.compile(r"\s*(\S+)\s*@\s*(\S+)\s*\Z")
_TAB_LINE = re.compile(r"\s*\{([^}]*)\}\s*=\s*(\S+)\s*\Z")


def parse_valuation(text: str, space: FinSpace, source: str | None = None) -> SimpleValuation:
    """Parse ``<rational> @ <point>`` lines (``inf`` is rejected)."""
    terms: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _VAL_LINE.match(line)
        if not m:
            raise ParseError("expected '<rational> @ <point>'", lineno, 1, source)
        coef, point = m.groups()
        if coef == "inf":
            raise ParseError("inf is not allowed in a valuation file", lineno, m.start(1) + 1, source)
        try:
            r = parse_rational(coef)
        except ValueError as e:
            raise ParseError(str(e), lineno, m.start(1) + 1, source) from None
        if point not in space:
            raise ParseError(f"unknown point {point}", lineno, m.start(2) + 1, source)
        terms.append((r, point))
    return SimpleValuation(terms, space)


def parse_table(text: str, space: FinSpace, source: str | None = None) -> ValuationTable:
    """Parse ``{p1,p2,...} = <rational|inf>`` lines covering every open."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _TAB_LINE.match(line)
        if not m:
            raise ParseError("expected '{p1,...} = <value>'", lineno, 1, source)
        names = [n.strip() for n in m.group(1).split(",") if n.strip()]
        for n in names:
            if n not in space:
                raise ParseError(f"unknown point {n}", lineno, m.start(1) + 1, source)
        U = frozenset(names)
        if not space.is_open(U):
            raise ParseError(f"not an up-set: {space.format_subset(U)}", lineno, m.start(1), source)
        if U in values:
            raise ParseError(f"duplicate open {space.format_subset(U)}", lineno, 1, source)
        try:
            values[U] = parse_extrat(m.group(2))
        except ValueError as e:
            raise ParseError(str(e), lineno, m.start(2) + 1, source) from None
    missing = [U for U in space.opens if U not in values]
    if missing:
        raise ParseError(f"table misses open {space.format_subset(missing[0])}", 0, 0, source)
    return ValuationTable(space, values)
