"""Pass/fail bookkeeping shared by the law checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class LawResult:
    name: str
    passed: int = 0
    failed: int = 0
    counterexample: Any = None

    def record(self, ok: bool, witness: Any = None) -> bool:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if self.counterexample is None:
                self.counterexample = witness
        return ok

    @property
    def ok(self) -> bool:
        return self.failed == 0


@dataclass
class LawReport:
    laws: dict[str, LawResult] = field(default_factory=dict)

    def law(self, name: str) -> LawResult:
        if name not in self.laws:
            self.laws[name] = LawResult(name)
        return self.laws[name]

    def record(self, name: str, ok: bool, witness: Any = None) -> bool:
        return self.law(name).record(ok, witness)

    def merge(self, other: "LawReport") -> "LawReport":
        for name, res in other.laws.items():
            mine = self.law(name)
            mine.passed += res.passed
            mine.failed += res.failed
            if mine.counterexample is None:
                mine.counterexample = res.counterexample
        return self

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.laws.values())

    @property
    def failures(self) -> int:
        return sum(r.failed for r in self.laws.values())

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        return "\n".join(
            f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.passed} passed, {r.failed} failed" for r in self.laws.values()
        )
