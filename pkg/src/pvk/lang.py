"""A small kernel language evaluated exactly in the simple-valuation monad.

::

    space D {a b}
    bind x <- mix 1/2: dirac a, 1/2: dirac b;
    case x { a => dirac b | _ => scale 1/2 dirac a }

``dirac`` is the unit, ``bind`` the Kleisli extension, ``mix``, ``scale`` and
``add`` are linear combinations of valuations.  ``case`` and parentheses are
extensions of the core grammar; ``case`` lets a bound variable select a
branch, which is how kernels that are not built from ``dirac x`` are written.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Union

from .extrat import fmt
from .monad import Kernel, KernelError, apply_extension, monotonicity_witness
from .space import FinSpace, ParseError, Point, SpaceError, point_label
from .valuation import SimpleValuation, dirac, linear_combination

KEYWORDS = {"space", "le", "dirac", "mix", "bind", "scale", "add", "case"}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym><-|=>|[{}:,;|()\-])
    """,
    re.VERBOSE,
)


class EvalError(KernelError):
    """A well-formed program whose denotation is undefined."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}" if line else message)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, source: str | None = None) -> list[Token]:
    out: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col, source)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


# AST


@dataclass(frozen=True)
class Atom:
    name: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Dirac:
    atom: Atom


@dataclass(frozen=True)
class Mix:
    items: tuple  # of (Fraction, Expr)


@dataclass(frozen=True)
class Bind:
    var: str
    head: "Expr"
    body: "Expr"
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Scale:
    weight: Fraction
    expr: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Case:
    atom: Atom
    arms: tuple  # of (point name, Expr)
    default: "Expr | None" = None


Expr = Union[Dirac, Mix, Bind, Scale, Add, Case]


@dataclass(frozen=True)
class Program:
    space: FinSpace
    body: Expr

    @property
    def name(self) -> str:
        return self.space.name

    def to_source(self) -> str:
        return format_program(self)


# parser


class _Parser:
    def __init__(self, tokens: list[Token], source: str | None):
        self.toks = tokens
        self.i = 0
        self.source = source
        self.points: dict[str, Point] = {}
        self.scope: list[str] = []
        self.bound_anywhere: set[str] = set()

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col, self.source)

    def describe(self, tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    def expect(self, text: str) -> Token:
        tok = self.tok
        if tok.text != text or tok.kind not in ("sym", "ident"):
            raise self.error(f"expected {text!r}, found {self.describe(tok)}")
        self.i += 1
        return tok

    def name(self, what: str) -> Token:
        tok = self.tok
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.i += 1
            return tok
        if tok.kind == "number" and "/" not in tok.text:
            self.i += 1
            return tok
        raise self.error(f"expected {what}, found {self.describe(tok)}")

    def rational(self) -> Fraction:
        tok = self.tok
        if tok.kind == "sym" and tok.text == "-":
            raise self.error("negative weight")
        if tok.kind != "number":
            raise self.error(f"expected a rational weight, found {self.describe(tok)}")
        self.i += 1
        num, _, den = tok.text.partition("/")
        if den and int(den) == 0:
            raise self.error("zero denominator", tok)
        return Fraction(int(num), int(den or 1))

    def program(self) -> Program:
        self.expect("space")
        name = self.name("a space name").text
        self.expect("{")
        pts: list[str] = []
        while self.tok.text != "}":
            tok = self.name("a point name")
            if tok.text in self.points:
                raise self.error(f"duplicate point {tok.text!r}", tok)
            self.points[tok.text] = tok.text
            pts.append(tok.text)
        if not pts:
            raise self.error("a space needs at least one point")
        self.expect("}")
        pairs = []
        while self.tok.kind == "ident" and self.tok.text == "le":
            le_tok = self.tok
            self.i += 1
            a, b = self.point_ref(), self.point_ref()
            pairs.append((a, b))
            try:
                FinSpace.from_pairs(pts, pairs)
            except SpaceError as e:
                raise self.error(str(e), le_tok) from None
        space = FinSpace.from_pairs(pts, pairs, name)
        self._collect_binders()
        body = self.expr()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.describe(self.tok)} after the program")
        return Program(space, body)

    def _collect_binders(self) -> None:
        for j in range(self.i, len(self.toks) - 1):
            if self.toks[j].text == "bind" and self.toks[j + 1].kind == "ident":
                self.bound_anywhere.add(self.toks[j + 1].text)

    def point_ref(self) -> str:
        tok = self.name("a point name")
        if tok.text not in self.points:
            raise self.error(f"unknown point {tok.text!r}", tok)
        return tok.text

    def atom(self) -> Atom:
        tok = self.name("a point or variable")
        if tok.text not in self.scope and tok.text not in self.points:
            if tok.text in self.bound_anywhere:
                raise self.error(f"unbound variable {tok.text!r}", tok)
            raise self.error(f"unknown point {tok.text!r}", tok)
        return Atom(tok.text, tok.line, tok.col)

    def expr(self) -> Expr:
        tok = self.tok
        if tok.kind == "sym" and tok.text == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind != "ident" or tok.text not in KEYWORDS - {"space", "le"}:
            raise self.error(f"expected an expression, found {self.describe(tok)}")
        self.i += 1
        if tok.text == "dirac":
            return Dirac(self.atom())
        if tok.text == "mix":
            items = [self.weighted()]
            while self.tok.text == "," and self.tok.kind == "sym":
                self.i += 1
                items.append(self.weighted())
            return Mix(tuple(items))
        if tok.text == "bind":
            var = self.name("a variable name")
            if var.text in self.points:
                raise self.error(f"variable {var.text!r} shadows a point", var)
            self.expect("<-")
            head = self.expr()
            self.expect(";")
            self.scope.append(var.text)
            try:
                body = self.expr()
            finally:
                self.scope.pop()
            return Bind(var.text, head, body, tok.line, tok.col)
        if tok.text == "scale":
            r = self.rational()
            return Scale(r, self.expr())
        if tok.text == "add":
            left = self.expr()
            return Add(left, self.expr())
        return self.case()

    def weighted(self) -> tuple:
        r = self.rational()
        self.expect(":")
        return (r, self.expr())

    def case(self) -> Case:
        scrutinee = self.atom()
        self.expect("{")
        arms: list = []
        default = None
        while True:
            if self.tok.kind == "ident" and self.tok.text == "_":
                self.i += 1
                self.expect("=>")
                default = self.expr()
                break
            tok = self.tok
            p = self.point_ref()
            if any(p == q for q, _ in arms):
                raise self.error(f"duplicate case for {p!r}", tok)
            self.expect("=>")
            arms.append((p, self.expr()))
            if self.tok.text != "|":
                break
            self.i += 1
        self.expect("}")
        return Case(scrutinee, tuple(arms), default)


def parse(text: str, source: str | None = None) -> Program:
    """Parse a program; errors are :class:`ParseError` with line and column."""
    return _Parser(tokenize(text, source), source).program()


# evaluation


def _resolve(atom: Atom, env: Mapping[str, Point]) -> Point:
    return env[atom.name] if atom.name in env else atom.name


def denote(e: Expr, space: FinSpace, env: Mapping[str, Point] | None = None) -> SimpleValuation:
    """The valuation an expression denotes in ``env``."""
    env = {} if env is None else env
    if isinstance(e, Dirac):
        return dirac(_resolve(e.atom, env), space)
    if isinstance(e, Mix):
        return linear_combination(((r, denote(x, space, env)) for r, x in e.items), space)
    if isinstance(e, Scale):
        return linear_combination([(e.weight, denote(e.expr, space, env))], space)
    if isinstance(e, Add):
        return denote(e.left, space, env) + denote(e.right, space, env)
    if isinstance(e, Case):
        p = _resolve(e.atom, env)
        for q, arm in e.arms:
            if q == p:
                return denote(arm, space, env)
        if e.default is None:
            raise EvalError(f"no case for point {point_label(p)}", e.atom.line, e.atom.col)
        return denote(e.default, space, env)
    if isinstance(e, Bind):
        mu = denote(e.head, space, env)
        graph = {p: denote(e.body, space, {**env, e.var: p}) for p in space.points}
        bad = monotonicity_witness(space, graph)
        if bad is not None:
            x, x2, _ = bad
            raise EvalError(
                f"non-continuous kernel at bind: {e.var} = {point_label(x)} <= {point_label(x2)} "
                f"but the body at {point_label(x)} is not below the body at {point_label(x2)}",
                e.line,
                e.col,
            )
        return apply_extension(Kernel(space, space, graph, check=False), mu)
    raise TypeError(f"not an expression: {e!r}")


def evaluate(p: Program) -> SimpleValuation:
    return denote(p.body, p.space)


def run(text: str, source: str | None = None) -> str:
    """Parse, evaluate and render as ``<rational> @ <point>`` lines."""
    return evaluate(parse(text, source)).to_text()


def check_program_equiv(p: Program, q: Program) -> bool:
    if p.space != q.space:
        raise EvalError("space mismatch")
    return evaluate(p) == evaluate(q)


# printing and rewriting


def format_expr(e: Expr) -> str:
    if isinstance(e, Dirac):
        return f"dirac {e.atom.name}"
    if isinstance(e, Mix):
        return "mix " + ", ".join(f"{fmt(r)}: {_wrap(x, Mix)}" for r, x in e.items)
    if isinstance(e, Scale):
        return f"scale {fmt(e.weight)} {_wrap(e.expr)}"
    if isinstance(e, Add):
        return f"add {_wrap(e.left)} {_wrap(e.right)}"
    if isinstance(e, Case):
        arms = [f"{q} => {format_expr(x)}" for q, x in e.arms]
        if e.default is not None:
            arms.append(f"_ => {format_expr(e.default)}")
        return f"case {e.atom.name} {{ " + " | ".join(arms) + " }"
    if isinstance(e, Bind):
        return f"bind {e.var} <- {_wrap(e.head)}; {format_expr(e.body)}"
    raise TypeError(f"not an expression: {e!r}")


def _wrap(e: Expr, *extra) -> str:
    # parenthesize anything that could swallow the following tokens
    if isinstance(e, (Bind, Add, Scale, Mix) + extra):
        return f"({format_expr(e)})"
    return format_expr(e)


def format_program(p: Program) -> str:
    s = p.space
    header = f"space {s.name or 'X'} {{{' '.join(point_label(x) for x in s.points)}}}"
    les = "".join(f"\nle {point_label(a)} {point_label(b)}" for a, b in s.covers())
    return f"{header}{les}\n{format_expr(p.body)}\n"


def substitute(e: Expr, var: str, point: str) -> Expr:
    """``e[var := point]``, respecting shadowing."""

    def atom(a: Atom) -> Atom:
        return Atom(point, a.line, a.col) if a.name == var else a

    if isinstance(e, Dirac):
        return Dirac(atom(e.atom))
    if isinstance(e, Mix):
        return Mix(tuple((r, substitute(x, var, point)) for r, x in e.items))
    if isinstance(e, Scale):
        return Scale(e.weight, substitute(e.expr, var, point))
    if isinstance(e, Add):
        return Add(substitute(e.left, var, point), substitute(e.right, var, point))
    if isinstance(e, Case):
        arms = tuple((q, substitute(x, var, point)) for q, x in e.arms)
        default = None if e.default is None else substitute(e.default, var, point)
        return Case(atom(e.atom), arms, default)
    if isinstance(e, Bind):
        body = e.body if e.var == var else substitute(e.body, var, point)
        return Bind(e.var, substitute(e.head, var, point), body, e.line, e.col)
    raise TypeError(f"not an expression: {e!r}")


def valuation_expr(nu: SimpleValuation, space: FinSpace) -> Expr:
    """A ``mix`` of Dirac masses denoting ``nu`` (``mix 0: dirac p`` for zero)."""
    terms = nu.sorted_terms()
    if not terms:
        return Mix(((Fraction(0), Dirac(Atom(point_label(space.points[0])))),))
    return Mix(tuple((r, Dirac(Atom(point_label(x)))) for x, r in terms))


def kernel_expr(k: Kernel, var: str) -> Expr:
    """``case var { p => <k(p)> | ... }`` denoting the kernel ``k``."""
    arms = tuple((point_label(p), valuation_expr(k.graph[p], k.target)) for p in k.source.points)
    return Case(Atom(var), arms)


# monad-law program schemas


@dataclass(frozen=True)
class EquivInstance:
    law: str
    left: Program
    right: Program


def law_instances(rng: random.Random, space: FinSpace, max_den: int = 4) -> Iterator[EquivInstance]:
    """One left-unit, one right-unit and one associativity pair on ``space``."""
    from .sampling import random_kernel, random_valuation

    pts = [point_label(p) for p in space.points]
    k1 = random_kernel(rng, space, space, max_den)
    k2 = random_kernel(rng, space, space, max_den)
    mu = valuation_expr(random_valuation(rng, space, max_den), space)
    a = rng.choice(pts)
    body = kernel_expr(k1, "x")
    yield EquivInstance("left_unit", Program(space, Bind("x", Dirac(Atom(a)), body)), Program(space, substitute(body, "x", a)))
    yield EquivInstance("right_unit", Program(space, Bind("x", mu, Dirac(Atom("x")))), Program(space, mu))
    e2, e3 = kernel_expr(k1, "x"), kernel_expr(k2, "y")
    yield EquivInstance(
        "associativity",
        Program(space, Bind("y", Bind("x", mu, e2), e3)),
        Program(space, Bind("x", mu, Bind("y", e2, e3))),
    )
