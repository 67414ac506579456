"""A short tour of the library on the demo data.

Run from the repository root:  python demos/tour.py
"""

from __future__ import annotations

from pathlib import Path

from pvk import (
    FiniteCone,
    check_lattice,
    decompose,
    dual_cone,
    fmt,
    integrate,
    keimel_separate,
    lattice_barycentre,
    parse_function,
    parse_space,
    parse_table,
    parse_valuation,
    step_approx,
    to_table,
    validate_table,
)

DATA = Path(__file__).parent / "data"


def load(name: str) -> str:
    return (DATA / name).read_text()


def main() -> None:
    s2 = parse_space(load("s2.poset"), "s2.poset")
    print("opens of the two-point chain:", [s2.format_subset(U) for U in s2.opens])

    nu = parse_valuation(load("s2_half.val"), s2)
    h = parse_function(load("s2_h.fun"), s2)
    print("integral of h against nu:", fmt(integrate(h, nu)))
    for n in range(1, 5):
        hn = step_approx(h, n)
        print(f"  step approximation n={n}: integral {fmt(integrate(hn, nu))}")

    # tables and their Moebius inversion
    table = to_table(nu)
    print("nu as a table:")
    print(table.to_text(), end="")
    print("decomposed again:", decompose(table).to_text().strip().replace("\n", ", "))
    bad = parse_table(load("s2_bad.vtab"), s2)
    print("s2_bad.vtab:", validate_table(bad).describe(s2))

    # the diamond as a cone with join as addition
    m = parse_space(load("m.poset"), "m.poset")
    C = FiniteCone.of_lattice(check_lattice(m))
    mu = parse_valuation(load("m_ab.val"), m)
    print("barycentre of 1/2 delta_a + 1/4 delta_b:", lattice_barycentre(mu, C))
    for x0, lam in zip(C.carrier, dual_cone(C)):
        print(f"  dual functional for {x0}:", {x: fmt(lam(x)) for x in m.points})
    sep = keimel_separate({"0", "a"}, {"b", "1"}, C)
    print("separating {0,a} from {b,1}:", sep.to_text().strip().replace("\n", ", "))


if __name__ == "__main__":
    main()
