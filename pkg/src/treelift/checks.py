"""Outcome records shared by every identity check."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    """Outcome of one identity check.

    ``values`` carries the computed quantities; ``witness`` is non-empty
    exactly when the check failed and names what disagreed.
    """

    name: str
    passed: bool
    values: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)
    note: str = ""

    def __bool__(self):
        return self.passed

    def __post_init__(self):
        if not self.passed and not self.witness:
            self.witness = {"reason": "unspecified failure"}


def combine(name, results, values=None):
    """Fold several sub-results into one; the first failure becomes the witness."""
    results = list(results)
    bad = next((r for r in results if not r.passed), None)
    witness = {}
    if bad is not None:
        witness = {"failed": bad.name, **bad.witness}
    return CheckResult(name, bad is None, values or {"cases": len(results)}, witness)
