"""Choquet integration of lower semicontinuous functions on finite spaces.

A lower semicontinuous map into the extended reals on a finite space is just
a monotone map.  ``integrate`` evaluates the layer-cake formula
``int_0^inf nu(h > r) dr``, which is a finite step function here.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .extrat import INF, ExtRat, ext, fmt, parse_extrat
from .space import FinSpace, ParseError, Point, point_label
from .valuation import (
    SimpleValuation,
    TableReport,
    ValuationTable,
    dirac,
    product_valuation,
    validate_table,
)

Functional = Callable[["LscFun"], ExtRat]


class IntegralError(ValueError):
    pass


class LscFun:
    """A monotone map from a finite space into the extended rationals."""

    __slots__ = ("space", "values", "_hash", "_levels")

    def __init__(self, space: FinSpace, values: Mapping | Sequence):
        if isinstance(values, Mapping):
            if set(values) != set(space.points):
                raise IntegralError("function must be total on the space")
            vals = tuple(ext(values[p]) for p in space.points)
        else:
            vals = tuple(ext(v) for v in values)
            if len(vals) != len(space):
                raise IntegralError("function must be total on the space")
        self.space = space
        self.values = vals
        self._hash = None
        self._levels = None
        for x, y in space.le:
            if vals[space.index(x)] > vals[space.index(y)]:
                raise IntegralError(
                    f"function is not monotone (not lower semicontinuous): "
                    f"{point_label(x)} <= {point_label(y)} but "
                    f"{fmt(vals[space.index(x)])} > {fmt(vals[space.index(y)])}"
                )

    def __call__(self, x: Point) -> ExtRat:
        return self.values[self.space.index(x)]

    @property
    def levels(self) -> list:
        """Distinct positive finite values in increasing order."""
        if self._levels is None:
            self._levels = sorted({v for v in self.values if v is not INF and v > 0})
        return self._levels

    def as_dict(self) -> dict:
        return dict(zip(self.space.points, self.values))

    def __add__(self, other: "LscFun") -> "LscFun":
        if not isinstance(other, LscFun):
            return NotImplemented
        _check_space(self.space, other.space)
        return LscFun(self.space, [a + b for a, b in zip(self.values, other.values)])

    def __rmul__(self, r) -> "LscFun":
        r = ext(r)
        return LscFun(self.space, [r * a for a in self.values])

    def __le__(self, other: "LscFun") -> bool:
        return all(a <= b for a, b in zip(self.values, other.values))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LscFun):
            return NotImplemented
        return self.values == other.values and self.space == other.space

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.values, self.space))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{point_label(p)}: {fmt(v)}" for p, v in zip(self.space.points, self.values))
        return f"LscFun({body})"

    def to_text(self) -> str:
        return "".join(f"{point_label(p)} -> {fmt(v)}\n" for p, v in zip(self.space.points, self.values))


def _check_space(a: FinSpace, b: FinSpace) -> None:
    if a is not b and a != b:
        raise IntegralError("space mismatch")


def chi(space: FinSpace, U) -> LscFun:
    """Characteristic function of an open set."""
    U = frozenset(U)
    if not space.is_open(U):
        raise IntegralError(f"not an open set: {space.format_subset(U)}")
    return LscFun(space, [Fraction(int(p in U)) for p in space.points])


def constant(space: FinSpace, value) -> LscFun:
    return LscFun(space, [value] * len(space))


def integrate(h: LscFun, nu: SimpleValuation | ValuationTable) -> ExtRat:
    """Layer-cake integral of ``h`` against a simple valuation or a table.

    With the distinct finite values ``0 = v_0 < ... < v_k`` of ``h`` this is
    ``sum_j (v_j - v_{j-1}) * nu(h >= v_j)``, plus ``inf * nu(h = inf)``.
    """
    space = nu.space
    if space is None:
        raise IntegralError("integrate needs a valuation on a finite space")
    _check_space(h.space, space)
    levels = h.levels
    has_inf = INF in h.values
    total: ExtRat = Fraction(0)
    prev = Fraction(0)
    if isinstance(nu, ValuationTable):
        pairs = list(zip(space.points, h.values))
        for v in levels:
            total = total + (v - prev) * nu[frozenset(p for p, hv in pairs if hv >= v)]
            prev = v
        if has_inf:
            total = total + INF * nu[frozenset(p for p, hv in pairs if hv is INF)]
        return total
    # simple valuation: the mass of a layer is a sum over the support
    weighted = [(h.values[space.index(x)], r) for x, r in nu.terms.items()]
    for v in levels:
        layer = sum((r for hv, r in weighted if hv >= v), Fraction(0))
        total = total + (v - prev) * layer
        prev = v
    if has_inf and any(hv is INF for hv, _ in weighted):
        total = INF
    return total


def integrate_direct(h: Callable[[Point], ExtRat], nu: SimpleValuation) -> ExtRat:
    """``sum r_i * h(x_i)`` for a simple valuation; works on any carrier."""
    total: ExtRat = Fraction(0)
    for x, r in nu.terms.items():
        total = total + r * h(x)
    return total


def step_approx(h: LscFun, n: int) -> LscFun:
    """The step function ``2^-n * sum_{k=1}^{n 2^n} chi_{h^-1(k/2^n, inf]}``.

    This is a chain in ``n`` whose supremum is ``h``; note the strict
    inequality, so a positive dyadic value ``v`` is approached from below.
    """
    if n < 1:
        raise IntegralError("n must be a positive integer")
    scale_ = 2 ** n
    cap = n * scale_
    out = []
    for v in h.values:
        if v is INF:
            count = cap
        else:
            # number of k in [1, cap] with k < v * 2^n
            t = v * scale_
            below = t.numerator // t.denominator
            if t.denominator == 1:
                below -= 1
            count = min(max(below, 0), cap)
        out.append(Fraction(count, scale_))
    return LscFun(h.space, out)


def step_approx_by_sum(h: LscFun, n: int) -> LscFun:
    """Same chain as :func:`step_approx`, computed literally as a sum of characteristic functions."""
    space = h.space
    acc = constant(space, 0)
    for k in range(1, n * 2 ** n + 1):
        r = Fraction(k, 2 ** n)
        acc = acc + chi(space, [p for p in space.points if h(p) > r])
    return Fraction(1, 2 ** n) * acc


def valuation_from_functional(phi: Functional, space: FinSpace) -> tuple[ValuationTable, TableReport]:
    """Riesz direction ``phi -> (U -> phi(chi_U))`` with the axiom check report."""
    table = ValuationTable(space, {U: phi(chi(space, U)) for U in space.opens})
    return table, validate_table(table)


def functional_of(nu: SimpleValuation | ValuationTable) -> Functional:
    """Riesz direction ``nu -> (h -> int h dnu)``."""
    return lambda h: integrate(h, nu)


def ss_recover(lam: Callable[[SimpleValuation], ExtRat], space: FinSpace) -> LscFun:
    """Recover ``h`` with ``h(x) = lam(delta_x)`` from a functional on valuations."""
    try:
        return LscFun(space, [lam(dirac(x, space)) for x in space.points])
    except IntegralError as e:
        raise IntegralError(f"recovered function is not lower semicontinuous: {e}") from None


def in_subbasic(nu: SimpleValuation | ValuationTable, h: LscFun, r) -> bool:
    """Membership of ``nu`` in the weak-topology subbasic open ``[h > r]``."""
    r = ext(r)
    if r is INF:
        raise IntegralError("threshold must be finite")
    return integrate(h, nu) > r


def check_linear_functional(
    phi: Functional,
    functions: Iterable[LscFun],
    scalars: Sequence = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)),
):
    """Spot-check ``phi(r h + s k) = r phi(h) + s phi(k)``; return the first failure or ``None``."""
    fs = list(functions)
    for h, k in itertools.product(fs, repeat=2):
        for r, s in itertools.product(scalars, repeat=2):
            lhs = phi(r * h + s * k)
            rhs = r * phi(h) + s * phi(k)
            if lhs != rhs:
                return (r, h, s, k, lhs, rhs)
    return None


@dataclass(frozen=True)
class FubiniResult:
    iterated_x_outer: ExtRat
    product: ExtRat
    iterated_y_outer: ExtRat
    inner_monotone: bool

    @property
    def equal(self) -> bool:
        return self.iterated_x_outer == self.product == self.iterated_y_outer

    def __bool__(self) -> bool:
        return self.equal and self.inner_monotone


def check_fubini(f: LscFun, mu: SimpleValuation, nu: SimpleValuation) -> FubiniResult:
    """Compare both iterated integrals with the integral against ``mu x nu``."""
    X, Y = mu.space, nu.space
    if X is None or Y is None:
        raise IntegralError("Fubini needs valuations on finite spaces")
    if set(f.space.points) != {(x, y) for x in X.points for y in Y.points}:
        raise IntegralError("function is not defined on the product space")
    over_y = [integrate(LscFun(Y, [f((x, y)) for y in Y.points]), nu) for x in X.points]
    over_x = [integrate(LscFun(X, [f((x, y)) for x in X.points]), mu) for y in Y.points]
    inner_monotone = True
    try:
        lhs = integrate(LscFun(X, over_y), mu)
        rhs = integrate(LscFun(Y, over_x), nu)
    except IntegralError:
        inner_monotone = False
        lhs = integrate_direct(dict(zip(X.points, over_y)).__getitem__, mu)
        rhs = integrate_direct(dict(zip(Y.points, over_x)).__getitem__, nu)
    return FubiniResult(lhs, integrate(f, product_valuation(mu, nu, f.space)), rhs, inner_monotone)


_FUN_LINE = re.compile(r"\s*(\S+)\s*->\s*(\S+)\s*\Z")


def parse_function(text: str, space: FinSpace, source: str | None = None) -> LscFun:
    """Parse ``<point> -> <rational|inf>`` lines; monotonicity is validated."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _FUN_LINE.match(line)
        if not m:
            raise ParseError("expected '<point> -> <value>'", lineno, 1, source)
        point, value = m.groups()
        if point not in space:
            raise ParseError(f"unknown point {point}", lineno, m.start(1) + 1, source)
        if point in values:
            raise ParseError(f"duplicate point {point}", lineno, m.start(1) + 1, source)
        try:
            values[point] = parse_extrat(value)
        except ValueError as e:
            raise ParseError(str(e), lineno, m.start(2) + 1, source) from None
    missing = [p for p in space.points if p not in values]
    if missing:
        raise ParseError(f"no value for point {point_label(missing[0])}", 0, 0, source)
    try:
        return LscFun(space, values)
    except IntegralError as e:
        raise ParseError(str(e), 0, 0, source) from None
