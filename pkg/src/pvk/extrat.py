"""Exact nonnegative rationals extended with infinity.

Finite values are plain :class:`fractions.Fraction` instances; infinity is the
singleton :data:`INF`.  ``Fraction`` defers to ``INF`` for mixed arithmetic and
comparisons, so ordinary ``+``, ``*``, ``<`` and ``sum`` just work.

Arithmetic follows the cone conventions: ``r + inf = inf``, ``0 * inf = 0`` and
``r * inf = inf`` for ``r != 0``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union


class _Infinity:
    __slots__ = ()
    _instance: "_Infinity | None" = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return (_Infinity, ())

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __hash__(self) -> int:
        return hash("pvk.INF")

    def __eq__(self, other: object) -> bool:
        return other is self

    def __ne__(self, other: object) -> bool:
        return other is not self

    def __lt__(self, other: object) -> bool:
        if other is self or isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __le__(self, other: object) -> bool:
        if other is self:
            return True
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if other is self:
            return False
        if isinstance(other, (int, Fraction)):
            return True
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if other is self or isinstance(other, (int, Fraction)):
            return True
        return NotImplemented

    def __add__(self, other: object) -> "_Infinity":
        if other is self or isinstance(other, (int, Fraction)):
            if isinstance(other, (int, Fraction)) and other < 0:
                raise ValueError("negative operand in extended nonnegative arithmetic")
            return self
        return NotImplemented

    __radd__ = __add__

    def __mul__(self, other: object) -> "ExtRat":
        if other is self:
            return self
        if isinstance(other, (int, Fraction)):
            if other < 0:
                raise ValueError("negative operand in extended nonnegative arithmetic")
            return Fraction(0) if other == 0 else self
        return NotImplemented

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return True


INF = _Infinity()

ExtRat = Union[Fraction, _Infinity]


def is_finite(x: ExtRat) -> bool:
    return x is not INF


def ext(x: "int | str | Fraction | _Infinity") -> ExtRat:
    """Coerce ints, fractions, ``"p/q"`` strings and ``"inf"`` to an ExtRat."""
    if x is INF:
        return INF
    if isinstance(x, str):
        return parse_extrat(x)
    if isinstance(x, bool):
        raise TypeError("booleans are not extended rationals")
    if isinstance(x, (int, Fraction)):
        value = Fraction(x)
        if value < 0:
            raise ValueError(f"negative value {value}")
        return value
    raise TypeError(f"cannot coerce {x!r} to an extended rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer; infinity and signs are rejected."""
    text = text.strip()
    num, sep, den = text.partition("/")
    if not num.isdigit() or (sep and not den.isdigit()):
        raise ValueError(f"not a nonnegative rational: {text!r}")
    q = int(den) if sep else 1
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), q)


def parse_extrat(text: str) -> ExtRat:
    if text.strip() == "inf":
        return INF
    return parse_rational(text)


def fmt(x: ExtRat) -> str:
    """Render exactly: ``inf``, ``p/q`` or an integer."""
    if x is INF:
        return "inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def ext_sum(values) -> ExtRat:
    total: ExtRat = Fraction(0)
    for v in values:
        total = total + v
    return total
