from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import settings

from pvk.cone import FiniteCone
from pvk.sampling import diamond
from pvk.space import FinSpace

settings.register_profile("pvk", max_examples=60, deadline=None)
settings.load_profile("pvk")

F = Fraction


@pytest.fixture
def S2() -> FinSpace:
    return FinSpace.chain(["bot", "top"], "S2")


@pytest.fixture
def D2() -> FinSpace:
    return FinSpace.discrete(["a", "b"], "D2")


@pytest.fixture
def M():
    return diamond()


@pytest.fixture
def MC(M) -> FiniteCone:
    return FiniteCone.of_lattice(M)


# acceptance lines, printed after the run
ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance():
    def record(n: int, ok: bool, detail: str) -> None:
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE[n] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
