"""Slow, independent cross-checks for the engine and the repetition check."""
from __future__ import annotations

from dataclasses import dataclass, field

from .checker import Status, check, check_flat
from .engine import Fact, KnowledgeBase
from .model import LabeledLayout
from .transform import DEFAULT_UNWIND_CAP, unwind


def naive_closure(kb: KnowledgeBase) -> set[Fact]:
    """Apply every rule to the current facts until a whole pass adds nothing."""
    atoms = kb.atoms
    rules = [([atoms[p] for p in r.premises], [atoms[h] for h in r.heads]) for r in kb.rules]
    known = {atoms[k] for k in kb.facts}
    changed = True
    while changed:
        changed = False
        for premises, heads in rules:
            if all(p in known for p in premises):
                for h in heads:
                    if h not in known:
                        known.add(h)
                        changed = True
    return known


@dataclass
class UnwindingReport:
    status: Status
    members: list[tuple[LabeledLayout, Status]] = field(default_factory=list)

    @property
    def violations(self) -> list[LabeledLayout]:
        """Unwindings rejected although the layout itself was accepted."""
        if self.status is not Status.DESERIALIZABLE:
            return []
        return [m for m, s in self.members if s is not Status.DESERIALIZABLE]

    @property
    def all_members_deserializable(self) -> bool:
        return all(s is Status.DESERIALIZABLE for _, s in self.members)

    @property
    def consistent(self) -> bool:
        return not self.violations

    @property
    def notes(self) -> list[str]:
        # informational only: acceptance of every unwinding proves nothing about the layout
        if self.status is Status.NON_DESERIALIZABLE and self.all_members_deserializable:
            return ["layout rejected although every enumerated unwinding is deserializable"]
        return []


def cross_check_unwindings(layout: LabeledLayout, n: int = 2, cap: int = DEFAULT_UNWIND_CAP) -> UnwindingReport:
    report = UnwindingReport(check(layout).status)
    for member in unwind(layout, n, cap):
        report.members.append((member, check_flat(member).status))
    return report
