"""Pass/fail bookkeeping shared by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["Check", "Report"]


@dataclass
class Check:
    name: str
    passed: bool
    witness: object = None

    def to_json(self):
        d = {"name": self.name, "passed": bool(self.passed)}
        if self.witness is not None:
            d["witness"] = _jsonable(self.witness)
        return d


def _jsonable(x):
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    def add(self, name, passed, witness=None):
        self.checks.append(Check(name, bool(passed), witness))
        return bool(passed)

    def extend(self, other):
        """Absorb another report's checks, prefixing their names with its title."""
        for c in other.checks:
            self.checks.append(Check(f"{other.title}: {c.name}", c.passed, c.witness))
        return self

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __len__(self):
        return len(self.checks)

    def to_json(self):
        return {
            "title": self.title,
            "ok": self.ok,
            "n_checks": len(self.checks),
            "n_failed": len(self.failures()),
            "checks": [c.to_json() for c in self.checks],
        }

    def lines(self, verbose=False):
        out = [f"[{'PASS' if self.ok else 'FAIL'}] {self.title} ({len(self.checks)} checks)"]
        for c in self.checks:
            if verbose or not c.passed:
                tail = f"  -- {c.witness}" if (c.witness is not None and not c.passed) else ""
                out.append(f"    {'ok ' if c.passed else 'BAD'} {c.name}{tail}")
        return out

    def __str__(self):
        return "\n".join(self.lines())
