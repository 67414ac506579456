"""The ``pvk`` command line.

Exit codes: 0 success, 1 domain error (a law or axiom fails, a kernel is not
continuous, ...), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import checks
from .algebra import AlgebraError, lattice_barycentre, standard_barycentre
from .cone import ConeError, FiniteCone, SeparationError, dual_cone, keimel_separate, parse_subset
from .extrat import fmt
from .integral import IntegralError, integrate, parse_function
from .lang import EvalError, evaluate, parse
from .monad import Kernel, KernelError, apply_extension, extension_table, parse_kernel
from .space import FinSpace, ParseError, SpaceError, check_lattice, parse_map, parse_space, point_label
from .valuation import (
    NonRepresentableError,
    ValuationError,
    decompose,
    parse_table,
    parse_valuation,
    pushforward,
    validate_table,
)

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2

DOMAIN_ERRORS = (
    AlgebraError,
    ConeError,
    EvalError,
    IntegralError,
    KernelError,
    SpaceError,
    ValuationError,
)


class DomainFailure(Exception):
    """A well-formed request whose answer is a failure (exit code 1)."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read file: {e.strerror}", source=path) from None


def _space(path: str) -> FinSpace:
    return parse_space(_read(path), path)


def _lattice_cone(path: str) -> FiniteCone:
    s = _space(path)
    try:
        return FiniteCone.of_lattice(check_lattice(s))
    except SpaceError as e:
        raise ParseError(f"not a lattice: {e}", source=path) from None


# single-shot commands


def cmd_opens(args) -> str:
    s = _space(args.space)
    return "".join(s.format_subset(U) + "\n" for U in s.opens)


def cmd_integrate(args) -> str:
    s = _space(args.space)
    h = parse_function(_read(args.function), s, args.function)
    if args.valuation:
        nu = parse_valuation(_read(args.valuation), s, args.valuation)
    else:
        nu = parse_table(_read(args.table), s, args.table)
        res = validate_table(nu)
        if not res:
            raise DomainFailure(f"{args.table}: {res.describe(s)}")
    return fmt(integrate(h, nu)) + "\n"


def cmd_decompose(args) -> str:
    s = _space(args.space)
    t = parse_table(_read(args.table), s, args.table)
    res = validate_table(t)
    if not res:
        raise DomainFailure(f"{args.table}: {res.describe(s)}")
    try:
        return decompose(t).to_text()
    except NonRepresentableError as e:
        raise DomainFailure(f"{args.table}: {e}") from None


def cmd_pushforward(args) -> str:
    X, Y = _space(args.source), _space(args.target)
    text = _read(args.map)
    try:
        f = parse_map(text, X, Y, args.map)
    except SpaceError as e:
        raise DomainFailure(f"{args.map}: {e}") from None
    nu = parse_valuation(_read(args.valuation), X, args.valuation)
    return pushforward(f, nu).to_text()


def cmd_bind(args) -> str:
    X, Y = _space(args.source), _space(args.target)
    try:
        k = parse_kernel(_read(args.kernel), X, Y, args.kernel)
    except KernelError as e:
        raise DomainFailure(f"{args.kernel}: {e}") from None
    mu = parse_valuation(_read(args.valuation), X, args.valuation)
    out = apply_extension(k, mu)
    if args.check:
        # the integral formula, computed through tables and decomposed
        res = validate_table(extension_table(k, mu))
        if not res:
            raise DomainFailure(f"extension table: {res.describe(Y)}")
        via = decompose(extension_table(k, mu))
        if via != out:
            raise DomainFailure("sum formula and integral formula disagree")
    return out.to_text()


def cmd_barycentre(args) -> str:
    C = _lattice_cone(args.lattice)
    S = C.lattice.space
    nu = parse_valuation(_read(args.valuation), S, args.valuation)
    b = lattice_barycentre(nu, C, check=True)
    if standard_barycentre(nu, C) != b:
        raise DomainFailure("standard barycentre disagrees with the join of the support")
    return point_label(b) + "\n"


def cmd_dual(args) -> str:
    C = _lattice_cone(args.lattice)
    S = C.lattice.space
    lines = []
    for x0, lam in zip(C.carrier, dual_cone(C)):
        U = [x for x in S.sorted_points(C.carrier) if lam(x) != 0]
        lines.append(f"{point_label(x0)}: inf * chi{S.format_subset(U)}\n")
    return "".join(lines)


def cmd_separate(args) -> str:
    C = _lattice_cone(args.lattice)
    A = parse_subset(args.convex, C)
    U = parse_subset(args.open, C)
    try:
        lam = keimel_separate(A, U, C)
    except SeparationError as e:
        raise DomainFailure(str(e)) from None
    return lam.to_text()


def cmd_eval(args) -> str:
    prog = parse(_read(args.program), args.program)
    return evaluate(prog).to_text()


# law suites


def _render(value: Any) -> str:
    if hasattr(value, "to_text"):
        return value.to_text()
    if isinstance(value, str):
        return value if value.endswith("\n") else value + "\n"
    return repr(value) + "\n"


def _sections(witness: Any) -> list[tuple[str, str]]:
    """Counterexample files; kernels drag their spaces along."""
    if not isinstance(witness, dict):
        return [("witness", _render(witness))]
    out: dict[str, str] = {}
    for key, value in witness.items():
        if isinstance(value, Kernel):
            out.setdefault(f"{key}.source.poset", value.source.to_text())
            out.setdefault(f"{key}.target.poset", value.target.to_text())
            out[key if "." in key else f"{key}.ker"] = value.to_text()
        else:
            out[key] = _render(value)
    return list(out.items())


def _seed(text: str) -> int:
    try:
        seed = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return seed


def cmd_check(args) -> tuple[str, int]:
    report = checks.run_suite(args.suite, args.max_size, args.trials, args.seed, args.inject_fault)
    header = {
        "suite": args.suite,
        "seed": args.seed,
        "prng": checks.PRNG,
        "max_size": args.max_size,
        "trials": args.trials,
        "fault": args.inject_fault,
    }
    lines: list[str] = []
    if args.format == "json":
        lines.append(json.dumps({"record": "header", **header}, sort_keys=True))
        for r in report.laws.values():
            rec = {"record": "law", "law": r.name, "passed": r.passed, "failed": r.failed}
            if r.counterexample is not None:
                rec["counterexample"] = dict(_sections(r.counterexample))
            lines.append(json.dumps(rec, sort_keys=True))
        lines.append(json.dumps({"record": "summary", "ok": report.ok, "failures": report.failures}, sort_keys=True))
    else:
        bounds = f"max-size={'default' if args.max_size is None else args.max_size} trials={'default' if args.trials is None else args.trials}"
        fault = f" fault={args.inject_fault}" if args.inject_fault else ""
        lines.append(f"# pvk check suite={args.suite} seed={args.seed} prng={checks.PRNG} {bounds}{fault}")
        lines.extend(report.summary().splitlines())
        for r in report.laws.values():
            if r.counterexample is None:
                continue
            lines.append(f"# counterexample for {r.name}")
            for name, body in _sections(r.counterexample):
                lines.append(f"--- {name}")
                lines.extend(body.rstrip("\n").splitlines())
        verdict = "ok" if report.ok else f"{report.failures} failure(s)"
        lines.append(f"# result: {verdict}")
    return "\n".join(lines) + "\n", EXIT_OK if report.ok else EXIT_DOMAIN


# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pvk", description="Exact valuations, integrals and barycentres on finite T0 spaces.")
    p.add_argument("--inject-fault", choices=checks.FAULTS, default=None, help="mutate a law check (self-test of the suites)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("opens", help="list the open sets of a space")
    s.add_argument("--space", required=True)
    s.set_defaults(fn=cmd_opens)

    s = sub.add_parser("integrate", help="integrate a function against a valuation or table")
    s.add_argument("--space", required=True)
    s.add_argument("--function", required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--valuation")
    g.add_argument("--table")
    s.set_defaults(fn=cmd_integrate)

    s = sub.add_parser("decompose", help="validate a table and write it as a simple valuation")
    s.add_argument("--space", required=True)
    s.add_argument("--table", required=True)
    s.set_defaults(fn=cmd_decompose)

    s = sub.add_parser("pushforward", help="image of a valuation under a continuous map")
    s.add_argument("--source", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--map", required=True)
    s.add_argument("--valuation", required=True)
    s.set_defaults(fn=cmd_pushforward)

    s = sub.add_parser("bind", help="Kleisli extension of a kernel applied to a valuation")
    s.add_argument("--source", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--kernel", required=True)
    s.add_argument("--valuation", required=True)
    s.add_argument("--check", action="store_true", help="cross-check against the integral formula")
    s.set_defaults(fn=cmd_bind)

    s = sub.add_parser("barycentre", help="barycentre of a valuation on a lattice cone")
    s.add_argument("--lattice", required=True)
    s.add_argument("--valuation", required=True)
    s.set_defaults(fn=cmd_barycentre)

    s = sub.add_parser("dual", help="the dual cone of a lattice cone")
    s.add_argument("--lattice", required=True)
    s.set_defaults(fn=cmd_dual)

    s = sub.add_parser("separate", help="separate a convex set from a disjoint open convex set")
    s.add_argument("--lattice", required=True)
    s.add_argument("--convex", required=True, help='comma-separated points, e.g. "0,b"')
    s.add_argument("--open", required=True, help='comma-separated points, e.g. "a,1"')
    s.set_defaults(fn=cmd_separate)

    s = sub.add_parser("eval", help="evaluate a kernel-language program")
    s.add_argument("program")
    s.set_defaults(fn=cmd_eval)

    s = sub.add_parser("check", help="run a law suite")
    s.add_argument("--suite", required=True, choices=checks.SUITES)
    s.add_argument("--max-size", type=int, default=None)
    s.add_argument("--trials", type=int, default=None)
    s.add_argument("--seed", type=_seed, default=None, help="default: $PVK_SEED, else 0")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(fn=cmd_check)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "check" and args.seed is None:
        env = os.environ.get("PVK_SEED")
        try:
            args.seed = _seed(env) if env else 0
        except argparse.ArgumentTypeError as e:
            parser.error(f"PVK_SEED: {e}")
    try:
        with checks.injected_fault(args.inject_fault):
            result = args.fn(args)
    except ParseError as e:
        print(f"pvk: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DomainFailure as e:
        print(f"pvk: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except DOMAIN_ERRORS as e:
        print(f"pvk: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    out, code = result if isinstance(result, tuple) else (result, EXIT_OK)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
