"""Barycentres and algebras of the valuation monad on finite cones.

For a lattice cone the barycentre of a simple valuation is the join of its
support; this is also the value of the standard barycentre map
``sum r_i delta_{x_i} -> sum r_i . x_i`` computed with the cone operations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .cone import (
    CONE_SCALARS,
    ConeError,
    FiniteCone,
    dual_cone,
    is_linear,
    is_monotone_map,
)
from .integral import LscFun, integrate, integrate_direct
from .monad import MetaValuation, multiply
from .report import LawReport
from .space import FinSpace, Point, point_label
from .valuation import SimpleValuation, dirac, evaluate, support

Alpha = Callable[[SimpleValuation], object]


class AlgebraError(ValueError):
    pass


def _lattice_space(C: FiniteCone) -> FinSpace:
    if C.kind != "lattice":
        raise ConeError("this operation needs a lattice cone")
    return C.lattice.space


def _on_carrier(nu: SimpleValuation, C: FiniteCone) -> SimpleValuation:
    """Reattach ``nu`` to the lattice's space if it was built without one."""
    S = _lattice_space(C)
    if nu.space is None:
        return SimpleValuation(nu.terms, S)
    if nu.space != S:
        raise AlgebraError("valuation does not live on the cone's carrier")
    return nu


def barycentre_search(nu: SimpleValuation, C: FiniteCone) -> frozenset:
    """Every ``b`` with ``Lambda(b) = int Lambda dnu`` for all dual functionals."""
    S = _lattice_space(C)
    nu = _on_carrier(nu, C)
    duals = dual_cone(C)
    targets = [(lam, integrate(LscFun(S, lam.graph), nu)) for lam in duals]
    return frozenset(b for b in C.carrier if all(lam(b) == v for lam, v in targets))


def lattice_barycentre(nu: SimpleValuation, C: FiniteCone, check: bool = True) -> Point:
    """``join(supp nu)``; with ``check`` also compared against :func:`barycentre_search`."""
    nu = _on_carrier(nu, C)
    b = C.lattice.join_all(C.lattice.space.sorted_points(support(nu)))
    if check:
        found = barycentre_search(nu, C)
        if found != {b}:
            raise AssertionError(f"barycentre search gave {sorted(map(point_label, found))}, join of support is {point_label(b)}")
    return b


def standard_barycentre(nu: SimpleValuation, C: FiniteCone):
    """``sum r_i . x_i`` folded with the cone operations."""
    if C.kind == "lattice":
        nu = _on_carrier(nu, C)
    for x in nu.terms:
        if not C.contains(x):
            raise AlgebraError(f"{x!r} is not in the cone")
    terms = sorted(nu.terms.items(), key=lambda t: str(t[0]))
    return C.combination((r, x) for x, r in terms)


def funspace_barycentre(nu: SimpleValuation, X: FinSpace) -> LscFun:
    """Pointwise ``x -> sum_j R_j f_j(x)`` for ``nu = sum_j R_j delta_{f_j}``."""
    for f in nu.terms:
        if not isinstance(f, LscFun) or f.space != X:
            raise AlgebraError("valuation points must be functions on the given space")
    return LscFun(X, [integrate_direct(lambda f, x=x: f(x), nu) for x in X.points])


def funspace_barycentre_witness(nu: SimpleValuation, X: FinSpace, mus: Iterable[SimpleValuation]):
    """First ``mu`` where ``int b dmu != int (f -> int f dmu) dnu``, or ``None``.

    The functionals tested are the Riesz ones ``f -> int f dmu``.
    """
    b = funspace_barycentre(nu, X)
    for mu in mus:
        lhs = integrate(b, mu)
        rhs = integrate_direct(lambda f: integrate(f, mu), nu)
        if lhs != rhs:
            return mu
    return None


@dataclass
class AlgebraMap:
    """A structure map ``V_s C -> C``."""

    cone: FiniteCone
    alpha: Alpha
    name: str = ""

    def __call__(self, nu: SimpleValuation):
        return self.alpha(nu)

    @classmethod
    def lattice_beta(cls, C: FiniteCone) -> "AlgebraMap":
        return cls(C, lambda nu: lattice_barycentre(nu, C, check=False), "beta")

    @classmethod
    def standard(cls, C: FiniteCone) -> "AlgebraMap":
        return cls(C, lambda nu: standard_barycentre(nu, C), "standard")


def push_alpha(alpha: AlgebraMap, w: MetaValuation) -> SimpleValuation:
    """``V_s alpha(w) = sum_j R_j delta_{alpha(nu_j)}``."""
    space = alpha.cone.lattice.space if alpha.cone.kind == "lattice" else None
    return SimpleValuation([(R, alpha(nu)) for nu, R in w.terms.items()], space)


def check_algebra_laws(
    alpha: AlgebraMap,
    metas: Iterable[MetaValuation],
    points: Iterable | None = None,
    report: LawReport | None = None,
) -> LawReport:
    """``alpha . unit = id`` on ``points`` and ``alpha . m = alpha . V_s alpha`` on ``metas``."""
    report = LawReport() if report is None else report
    C = alpha.cone
    space = C.lattice.space if C.kind == "lattice" else None
    if points is None:
        points = C.carrier
    for x in points:
        out = alpha(dirac(x, space))
        report.record("algebra_unit", out == x, None if out == x else {"x": x})
    for w in metas:
        lhs = alpha(multiply(w, space))
        rhs = alpha(push_alpha(alpha, w))
        report.record("algebra_multiplication", lhs == rhs, None if lhs == rhs else {"w": w, "lhs": lhs, "rhs": rhs})
    return report


@dataclass
class InducedCone:
    """Operations ``x + y = alpha(delta_x + delta_y)``, ``r.x = alpha(r delta_x)``."""

    add: dict
    scale: dict
    zero: object
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def induced_cone(alpha: AlgebraMap, scalars: Sequence = CONE_SCALARS) -> InducedCone:
    """Rebuild the cone operations from ``alpha`` and compare with the originals."""
    C = alpha.cone
    space = _lattice_space(C)
    pts = C.carrier
    add = {(x, y): alpha(dirac(x, space) + dirac(y, space)) for x in pts for y in pts}
    sc = {(r, x): alpha(r * dirac(x, space)) for r in scalars for x in pts}
    z = alpha(SimpleValuation({}, space))
    out = InducedCone(add, sc, z)
    for (x, y), v in add.items():
        if v != C.add(x, y):
            out.mismatches.append(("add", x, y, v, C.add(x, y)))
    for (r, x), v in sc.items():
        if v != C.scale(r, x):
            out.mismatches.append(("scale", r, x, v, C.scale(r, x)))
    if z != C.zero:
        out.mismatches.append(("zero", z, C.zero))
    return out


def push_map(f: Mapping | Callable, nu: SimpleValuation, space: FinSpace | None) -> SimpleValuation:
    """``V_s f(nu) = sum r_i delta_{f(x_i)}`` for an arbitrary carrier map."""
    get = f.__getitem__ if isinstance(f, Mapping) else f
    return SimpleValuation([(r, get(x)) for x, r in nu.terms.items()], space)


@dataclass(frozen=True)
class MorphismVerdict:
    linear: bool
    morphism: bool
    witness: object = None

    @property
    def agree(self) -> bool:
        return self.linear == self.morphism


def morphism_iff_linear(
    f: Mapping,
    alpha: AlgebraMap,
    beta: AlgebraMap,
    valuations: Iterable[SimpleValuation],
) -> MorphismVerdict:
    """Linearity of ``f`` against the square ``f . alpha = beta . V_s f``."""
    C, D = alpha.cone, beta.cone
    get = f.__getitem__
    if not is_monotone_map(get, C, D):
        raise AlgebraError("f is not monotone")
    linear = is_linear(get, C, D)
    witness = None
    for nu in valuations:
        if get(alpha(nu)) != beta(push_map(f, nu, D.lattice.space)):
            witness = nu
            break
    return MorphismVerdict(linear, witness is None, witness)


def extend_linear(f: Mapping, X: FinSpace, C: FiniteCone) -> Callable[[SimpleValuation], object]:
    """The linear extension ``sum r_i delta_{x_i} -> sum r_i . f(x_i)`` of a monotone ``f``."""
    for x, y in X.le:
        if not C.leq(f[x], f[y]):
            raise AlgebraError(f"f is not monotone: {point_label(x)} <= {point_label(y)}")

    def fbar(nu: SimpleValuation):
        if nu.space is not None and nu.space != X:
            raise AlgebraError("valuation is not on the domain of f")
        terms = sorted(nu.terms.items(), key=lambda t: point_label(t[0]))
        return C.combination((r, f[x]) for x, r in terms)

    return fbar


def extension_uniqueness_witness(fbar: Callable, other: Callable, X: FinSpace, valuations: Iterable[SimpleValuation]):
    """A valuation where two extensions agreeing on Dirac masses differ, or ``None``.

    Raises if they already disagree on a Dirac mass.
    """
    for x in X.points:
        if fbar(dirac(x, X)) != other(dirac(x, X)):
            raise AlgebraError(f"extensions differ at delta_{point_label(x)}")
    for nu in valuations:
        if fbar(nu) != other(nu):
            return nu
    return None


def beta_halfspace_equiv(nu: SimpleValuation, U: Iterable, C: FiniteCone) -> bool:
    """``beta(nu) in U`` for a half-space ``U = C - down(x0)``; checked against ``nu(U) > 0``."""
    S = _lattice_space(C)
    U = frozenset(U)
    x0 = next((x for x in C.carrier if frozenset(C.carrier) - S.down(x) == U), None)
    if x0 is None:
        raise AlgebraError(f"{S.format_subset(U)} is not of the form C - down(x0)")
    nu = _on_carrier(nu, C)
    inside = lattice_barycentre(nu, C, check=False) in U
    positive = evaluate(nu, U) > 0
    if inside != positive:
        raise AssertionError(f"half-space equivalence fails for {nu!r}")
    return inside


def join_monotone(C: FiniteCone) -> bool:
    """Joint continuity of the join on a finite lattice: monotone in each argument."""
    pts = C.carrier
    return all(
        C.leq(C.add(x, y), C.add(x2, y2))
        for x, x2, y, y2 in itertools.product(pts, repeat=4)
        if C.leq(x, x2) and C.leq(y, y2)
    )


def lattice_valuations(C: FiniteCone, coeffs: Sequence = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1))) -> list[SimpleValuation]:
    """Every valuation on the lattice's points with coefficients in ``coeffs``."""
    S = _lattice_space(C)
    return [SimpleValuation(dict(zip(S.points, cs)), S) for cs in itertools.product(coeffs, repeat=len(S))]
