"""Small result records shared by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    """One named verification item.  ``lhs``/``rhs`` are kept for failures."""

    name: str
    ok: bool
    lhs: str | None = None
    rhs: str | None = None
    detail: str = ""

    def line(self) -> str:
        s = f"{'PASS' if self.ok else 'FAIL'}  {self.name}"
        if self.detail:
            s += f"  ({self.detail})"
        if not self.ok and self.lhs is not None:
            s += f"\n      lhs: {self.lhs}\n      rhs: {self.rhs}"
        return s


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    def add(self, name, ok, lhs=None, rhs=None, detail="") -> Check:
        c = Check(name, bool(ok), None if lhs is None else str(lhs), None if rhs is None else str(rhs), detail)
        self.checks.append(c)
        return c

    def equal(self, name, lhs, rhs, detail="") -> Check:
        ok = lhs == rhs
        return self.add(name, ok, lhs if not ok else None, rhs if not ok else None, detail)

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def __str__(self):
        return "\n".join([self.title] + ["  " + c.line() for c in self.checks])
