"""The valuation monad in Kleisli-triple form.

unit ``x -> delta_x``; extension ``f^dagger(mu)(U) = int_x f(x)(U) dmu``;
multiplication ``m = id^dagger``; functor action ``V f = (unit . f)^dagger``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .extrat import ExtRat, fmt, parse_rational
from .integral import IntegralError, LscFun, integrate
from .report import LawReport
from .space import ContinuousMap, FinSpace, ParseError, Point, point_label
from .valuation import (
    SimpleValuation,
    ValuationError,
    ValuationTable,
    decompose,
    dirac,
    linear_combination,
    stochastic_witness,
)


class KernelError(ValueError):
    pass


class NonContinuousKernel(KernelError):
    """A kernel that is not monotone for the stochastic order."""

    def __init__(self, x: Point, x2: Point, U=None, context: str = "kernel"):
        self.pair = (x, x2)
        self.open = U
        super().__init__(f"non-continuous {context}: {point_label(x)} <= {point_label(x2)} but not f({point_label(x)}) <= f({point_label(x2)})")


class Kernel:
    """A continuous map ``source -> V(target)`` given by its finite graph."""

    __slots__ = ("source", "target", "graph")

    def __init__(self, source: FinSpace, target: FinSpace, graph: Mapping, check: bool = True):
        graph = dict(graph)
        if set(graph) != set(source.points):
            raise KernelError("kernel must be defined on every source point")
        for x, nu in graph.items():
            if nu.space is not target and nu.space != target:
                raise KernelError(f"f({point_label(x)}) is not a valuation on the target space")
        self.source = source
        self.target = target
        self.graph = graph
        if check:
            bad = monotonicity_witness(source, graph)
            if bad is not None:
                raise NonContinuousKernel(*bad)

    @classmethod
    def _raw(cls, source: FinSpace, target: FinSpace, graph: dict) -> "Kernel":
        # trusted constructor: graph total, monotone, values on target
        k = object.__new__(cls)
        k.source, k.target, k.graph = source, target, graph
        return k

    def __call__(self, x: Point) -> SimpleValuation:
        return self.graph[x]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Kernel):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.graph == other.graph

    def __hash__(self) -> int:
        return hash((self.source, self.target, frozenset(self.graph.items())))

    def __repr__(self) -> str:
        body = "; ".join(f"{point_label(x)} => {self.graph[x]!r}" for x in self.source.points)
        return f"Kernel({body})"

    def to_text(self) -> str:
        """Kernel file: ``point <x> => <r> @ <y>, ...`` (``0 @ <y>`` for the zero valuation)."""
        lines = []
        for x in self.source.points:
            nu = self.graph[x]
            terms = [f"{fmt(r)} @ {point_label(y)}" for y, r in nu.sorted_terms()]
            if not terms:
                terms = [f"0 @ {point_label(self.target.points[0])}"]
            lines.append(f"point {point_label(x)} => " + ", ".join(terms))
        return "\n".join(lines) + "\n"


def monotonicity_witness(source: FinSpace, graph: Mapping):
    """First ``(x, x2, U)`` with ``x <= x2`` and ``graph[x](U) > graph[x2](U)``."""
    for x, x2 in source.le:
        if x != x2:
            U = stochastic_witness(graph[x], graph[x2])
            if U is not None:
                return x, x2, U
    return None


def unit(x: Point, space: FinSpace | None = None) -> SimpleValuation:
    return dirac(x, space)


def unit_kernel(space: FinSpace) -> Kernel:
    return Kernel._raw(space, space, {x: dirac(x, space) for x in space.points})


def _check_source(f: Kernel, mu: SimpleValuation) -> None:
    if mu.space is not f.source and mu.space != f.source:
        raise ValuationError("space mismatch")


def apply_extension(f: Kernel, mu: SimpleValuation) -> SimpleValuation:
    """``f^dagger(mu)`` as the linear combination ``sum r_i f(x_i)``."""
    _check_source(f, mu)
    return linear_combination(((r, f.graph[x]) for x, r in mu.terms.items()), f.target)


def extension_table(f: Kernel, mu: SimpleValuation) -> ValuationTable:
    """``f^dagger(mu)`` by its defining integral ``U -> int_x f(x)(U) dmu``."""
    _check_source(f, mu)
    X, Y = f.source, f.target
    values = {}
    for U in Y.opens:
        try:
            g = LscFun(X, [f.graph[x].mass(U) for x in X.points])
        except IntegralError as e:
            raise NonContinuousKernel(*(monotonicity_witness(X, f.graph) or (None, None))) from e
        values[U] = integrate(g, mu)
    return ValuationTable(Y, values)


def extend(f: Kernel, check: bool = False) -> Callable[[SimpleValuation], SimpleValuation]:
    """Kleisli extension of ``f``.

    With ``check=True`` every application also evaluates the defining
    integral on all opens and raises if the two computations disagree.
    """

    def f_dagger(mu: SimpleValuation) -> SimpleValuation:
        out = apply_extension(f, mu)
        if check:
            table = extension_table(f, mu)
            if decompose(table) != out:
                raise AssertionError(f"extension mismatch for {mu!r}")
        return out

    return f_dagger


def kleisli_compose(g: Kernel, f: Kernel) -> Kernel:
    """The kernel ``g^dagger . f``."""
    if f.target != g.source:
        raise KernelError("kernels do not compose")
    return Kernel._raw(f.source, g.target, {x: apply_extension(g, f.graph[x]) for x in f.source.points})


class MetaValuation(SimpleValuation):
    """A simple valuation whose points are simple valuations on one space."""

    __slots__ = ()

    def __init__(self, terms: Mapping | Iterable = ()):
        super().__init__(terms, None)
        spaces = {nu.space for nu in self.terms}
        for nu in self.terms:
            if not isinstance(nu, SimpleValuation):
                raise ValuationError("meta-valuation points must be simple valuations")
        if len(spaces) > 1:
            raise ValuationError("mixed spaces in meta-valuation")

    @property
    def inner_space(self) -> FinSpace | None:
        return next((nu.space for nu in self.terms), None)


def multiply(w: MetaValuation, space: FinSpace | None = None) -> SimpleValuation:
    """``m(w) = sum R_j nu_j``: flatten a valuation on valuations."""
    if len({nu.space for nu in w.terms}) > 1:
        raise ValuationError("mixed spaces in meta-valuation")
    space = w.inner_space if space is None else space
    return linear_combination(((R, nu) for nu, R in w.terms.items()), space)


def valuation_space(valuations: Iterable[SimpleValuation]) -> FinSpace:
    """Finite space of the given valuations under the stochastic order."""
    vals = list(dict.fromkeys(valuations))
    le = [(a, b) for a in vals for b in vals if stochastic_witness(a, b) is None]
    return FinSpace(tuple(vals), frozenset(le))


def multiply_via_extend(w: MetaValuation) -> SimpleValuation:
    """``m = id^dagger`` with ``id`` the identity kernel on the inner valuations."""
    inner = w.inner_space
    if inner is None:
        raise ValuationError("empty meta-valuation has no inner space; pass one to multiply")
    vs = valuation_space(w.terms)
    ident = Kernel(vs, inner, {nu: nu for nu in vs.points})
    return extend(ident)(SimpleValuation(w.terms, vs))


def functor_map(f: ContinuousMap) -> Callable[[SimpleValuation], SimpleValuation]:
    """``V f = (unit . f)^dagger``."""
    k = Kernel(f.source, f.target, {x: dirac(f(x), f.target) for x in f.source.points})
    return extend(k)


def check_unit_law(mu: SimpleValuation, report: LawReport | None = None) -> LawReport:
    """Law (i): ``unit^dagger = id``."""
    report = LawReport() if report is None else report
    out = apply_extension(unit_kernel(mu.space), mu)
    ok = out == mu
    report.record("manes_i_unit_extension_is_identity", ok, None if ok else {"mu": mu})
    return report


def check_left_unit(f: Kernel, report: LawReport | None = None) -> LawReport:
    """Law (ii): ``f^dagger . unit = f`` at every source point."""
    report = LawReport() if report is None else report
    law = report.law("manes_ii_extension_after_unit")
    for x in f.source.points:
        out = apply_extension(f, dirac(x, f.source))
        ok = out == f.graph[x]
        law.record(ok, None if ok else {"f": f, "x": x})
    return report


def check_associativity(f: Kernel, g: Kernel, mus: Iterable[SimpleValuation], report: LawReport | None = None) -> LawReport:
    """Law (iii): ``g^dagger . f^dagger = (g^dagger . f)^dagger``."""
    report = LawReport() if report is None else report
    law = report.law("manes_iii_associativity")
    gf = kleisli_compose(g, f)
    for mu in mus:
        lhs = apply_extension(g, apply_extension(f, mu))
        rhs = apply_extension(gf, mu)
        ok = lhs == rhs
        law.record(ok, None if ok else {"f": f, "g": g, "mu": mu})
    return report


def check_manes_laws(
    valuations: Iterable[SimpleValuation] = (),
    kernels: Iterable[Kernel] = (),
    composable: Iterable[tuple[Kernel, Kernel, Iterable[SimpleValuation]]] = (),
    report: LawReport | None = None,
) -> LawReport:
    """Run laws (i)-(iii) on the supplied valuations, kernels and kernel pairs."""
    report = LawReport() if report is None else report
    for mu in valuations:
        check_unit_law(mu, report)
    for f in kernels:
        check_left_unit(f, report)
    for f, g, mus in composable:
        check_associativity(f, g, mus, report)
    return report


@dataclass(frozen=True)
class DisintegrationResult:
    lhs: ExtRat
    rhs: ExtRat
    inner_monotone: bool

    def __bool__(self) -> bool:
        return self.inner_monotone and self.lhs == self.rhs


def check_disintegration(h: LscFun, f: Kernel, mu: SimpleValuation) -> DisintegrationResult:
    """``int h d(f^dagger mu)`` against ``int_x (int h df(x)) dmu``."""
    if h.space != f.target:
        raise KernelError("function is not on the kernel's target")
    lhs = integrate(h, apply_extension(f, mu))
    inner = [integrate(h, f.graph[x]) for x in f.source.points]
    try:
        rhs = integrate(LscFun(f.source, inner), mu)
        monotone = True
    except IntegralError:
        monotone = False
        lookup = dict(zip(f.source.points, inner))
        rhs = sum((r * lookup[x] for x, r in mu.terms.items()), Fraction(0))
    return DisintegrationResult(lhs, rhs, monotone)


def parse_kernel(text: str, source: FinSpace, target: FinSpace, name: str | None = None) -> Kernel:
    """Parse ``point <x> => <r> @ <y> [, <r> @ <y>]*`` blocks."""
    head = re.compile(r"\s*point\s+(\S+)\s*=>\s*(.*)\Z")
    term = re.compile(r"\s*(\S+)\s*@\s*(\S+)\s*\Z")
    graph: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = head.match(line)
        if not m:
            raise ParseError("expected 'point <x> => <r> @ <y>, ...'", lineno, 1, name)
        x = m.group(1)
        if x not in source:
            raise ParseError(f"unknown source point {x}", lineno, m.start(1) + 1, name)
        if x in graph:
            raise ParseError(f"duplicate block for {x}", lineno, m.start(1) + 1, name)
        terms = []
        offset = m.start(2)
        for chunk in m.group(2).split(","):
            tm = term.match(chunk)
            if not tm:
                raise ParseError("expected '<rational> @ <point>'", lineno, offset + 1, name)
            try:
                r = parse_rational(tm.group(1))
            except ValueError as e:
                raise ParseError(str(e), lineno, offset + tm.start(1) + 1, name) from None
            if tm.group(2) not in target:
                raise ParseError(f"unknown target point {tm.group(2)}", lineno, offset + tm.start(2) + 1, name)
            terms.append((r, tm.group(2)))
            offset += len(chunk) + 1
        graph[x] = SimpleValuation(terms, target)
    missing = [x for x in source.points if x not in graph]
    if missing:
        raise ParseError(f"no block for source point {point_label(missing[0])}", 0, 0, name)
    return Kernel(source, target, graph)
