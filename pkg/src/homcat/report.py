"""Small result record shared by the self-checking operations."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    name: str
    ok: bool = True
    checks: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def record(self, cond: bool, what: str):
        self.checks += 1
        if not cond:
            self.ok = False
            self.failures.append(what)
        return cond

    def merge(self, other: "CheckReport", prefix=""):
        self.checks += other.checks
        if not other.ok:
            self.ok = False
            self.failures.extend(prefix + f for f in other.failures)
        self.notes.extend(other.notes)
        return self

    def lines(self):
        out = [f"{self.name}: {'pass' if self.ok else 'FAIL'} ({self.checks} checks)"]
        for k, v in self.details.items():
            out.append(f"  {k}: {v}")
        out.extend(f"  note: {n}" for n in self.notes)
        out.extend(f"  failure: {f}" for f in self.failures)
        return out

    def __str__(self):
        return "\n".join(self.lines())
