"""Report objects shared by the law checkers and verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    law: str
    where: str
    detail: str

    def __str__(self):
        return f"{self.law} at {self.where}: {self.detail}"


@dataclass
class LawReport:
    """Outcome of a batch of diagram checks.

    ``excused`` counts instances skipped because a depth-truncated value
    overflowed its bound; they are neither passes nor failures.
    ``exhaustive`` is cleared whenever a checker falls back to sampling or
    caps the number of instances.
    """

    subject: str
    checked: int = 0
    excused: int = 0
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    max_violations: int = 50
    exhaustive: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, law: str, where, detail: str):
        if len(self.violations) < self.max_violations:
            self.violations.append(Violation(law, str(where), detail))

    def expect(self, law: str, where, lhs, rhs) -> bool:
        self.checked += 1
        if lhs == rhs:
            return True
        self.fail(law, where, f"{lhs!r} != {rhs!r}")
        return False

    def merge(self, other: "LawReport") -> "LawReport":
        self.checked += other.checked
        self.excused += other.excused
        for v in other.violations:
            if len(self.violations) < self.max_violations:
                self.violations.append(v)
        self.notes.extend(other.notes)
        self.exhaustive = self.exhaustive and other.exhaustive
        return self

    def as_dict(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "checked": self.checked,
            "excused": self.excused,
            "exhaustive": self.exhaustive,
            "violations": [
                {"law": v.law, "where": v.where, "detail": v.detail} for v in self.violations
            ],
            "notes": list(self.notes),
        }

    def __str__(self):
        head = f"{self.subject}: {'ok' if self.ok else 'FAILED'} ({self.checked} checks"
        head += f", {self.excused} excused by truncation)" if self.excused else ")"
        return "\n".join([head] + [f"  {v}" for v in self.violations] + [f"  note: {n}" for n in self.notes])
