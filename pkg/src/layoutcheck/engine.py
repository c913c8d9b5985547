"""Forward chaining over ground definite Horn clauses.

A knowledge base is propositional over an indexed universe of atoms: rules
name their premises and conclusions by atom index.  Each rule keeps a
counter of premises not yet known; popping an atom from the agenda
decrements the counter of every rule it occurs in, and a rule whose counter
reaches zero fires.  Every atom is popped at most once, so a run is linear
in the total size of the rules.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence, Set
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from .model import format_label


class Fact(NamedTuple):
    pred: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        parts = (format_label(a) if isinstance(a, tuple) else str(a) for a in self.args)
        return f"{self.pred}({','.join(parts)})"


class GroundRule(NamedTuple):
    id: str
    premises: tuple[int, ...]
    heads: tuple[int, ...]


class RuleTable(Sequence):
    """Rules stored column-wise; GroundRule objects are built on access."""

    def __init__(self, ids: Sequence[str], premises: list[tuple[int, ...]], heads: list[tuple[int, ...]]):
        if not len(ids) == len(premises) == len(heads):
            raise ValueError("rule columns differ in length")
        self.ids = ids
        self.premises = premises
        self.heads = heads

    @classmethod
    def of(cls, rules: Iterable[GroundRule]) -> RuleTable:
        rules = list(rules)
        return cls([r.id for r in rules], [r.premises for r in rules], [r.heads for r in rules])

    def __len__(self) -> int:
        return len(self.premises)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[j] for j in range(*k.indices(len(self)))]
        return GroundRule(self.ids[k], self.premises[k], self.heads[k])


@dataclass(frozen=True)
class KnowledgeBase:
    atoms: Sequence[Fact]
    facts: tuple[int, ...]
    rules: Sequence[GroundRule]

    def __post_init__(self):
        if not isinstance(self.rules, RuleTable):
            object.__setattr__(self, "rules", RuleTable.of(self.rules))
        if not all(self.rules.heads):
            bad = next(r for r in self.rules if not r.heads)
            raise ValueError(f"rule {bad.id} has no conclusion")

    @classmethod
    def from_clauses(
        cls,
        facts: Iterable[Fact],
        rules: Iterable[tuple[str, Iterable[Fact], Iterable[Fact]]],
        universe: Iterable[Fact] = (),
    ) -> KnowledgeBase:
        """Build a knowledge base from Fact-level clauses, interning atoms in order of appearance."""
        index: dict[Fact, int] = {}

        def intern(f: Fact) -> int:
            return index.setdefault(f, len(index))

        for f in universe:
            intern(f)
        fact_ids = tuple(intern(f) for f in facts)
        ground = [
            GroundRule(rid, tuple(map(intern, premises)), tuple(map(intern, heads))) for rid, premises, heads in rules
        ]
        return cls(tuple(index), fact_ids, ground)

    @cached_property
    def index(self) -> dict[Fact, int]:
        return {f: k for k, f in enumerate(self.atoms)}

    @property
    def initial_facts(self) -> list[Fact]:
        return [self.atoms[k] for k in self.facts]

    def describe(self, rule: GroundRule) -> str:
        body = " & ".join(str(self.atoms[p]) for p in rule.premises) or "true"
        return f"{rule.id}: {body} => {' & '.join(str(self.atoms[h]) for h in rule.heads)}"

    def size(self) -> int:
        table = self.rules
        return len(self.facts) + sum(map(len, table.premises)) + sum(map(len, table.heads))


class Closure(Set):
    """The atoms of a knowledge base known after inference (a read-only set of Facts)."""

    def __init__(self, kb: KnowledgeBase, known: bytearray):
        self.kb = kb
        self.known = known

    def __contains__(self, fact) -> bool:
        k = self.kb.index.get(fact)
        return k is not None and bool(self.known[k])

    def has(self, atom: int) -> bool:
        return bool(self.known[atom])

    def __iter__(self):
        atoms = self.kb.atoms
        return (atoms[k] for k, bit in enumerate(self.known) if bit)

    def __len__(self) -> int:
        return sum(self.known)

    def __repr__(self) -> str:
        return f"Closure({len(self)} of {len(self.known)} atoms)"


@dataclass(frozen=True)
class Derivation:
    rule: str
    premises: tuple[Fact, ...]
    step: int


class InferenceGraph:
    """First derivation of every derived atom; initial atoms are axioms."""

    def __init__(self, kb: KnowledgeBase, axiom_ids: list[int], steps: list[int], derived: list[int], ends: list[int]):
        self.kb = kb
        self.axiom_ids = axiom_ids
        # step k fired rule steps[k] and first derived derived[ends[k-1]:ends[k]]
        self.steps = steps
        self.derived = derived
        self.ends = ends

    @property
    def firings(self) -> list[tuple[int, list[int]]]:
        """(rule index, atoms first derived) for every step, in order."""
        out, start = [], 0
        for ridx, end in zip(self.steps, self.ends):
            out.append((ridx, self.derived[start:end]))
            start = end
        return out

    @cached_property
    def axioms(self) -> list[Fact]:
        return [self.kb.atoms[k] for k in self.axiom_ids]

    @cached_property
    def derivations(self) -> dict[Fact, Derivation]:
        atoms, rules = self.kb.atoms, self.kb.rules
        out = {}
        for step, (ridx, derived) in enumerate(self.firings):
            rule = rules[ridx]
            d = Derivation(rule.id, tuple(atoms[p] for p in rule.premises), step)
            for k in derived:
                out[atoms[k]] = d
        return out

    def facts(self) -> list[Fact]:
        return self.axioms + list(self.derivations)

    def __len__(self) -> int:
        return len(self.axiom_ids) + len(self.derived)

    @property
    def rules_fired(self) -> int:
        return len(self.steps)

    @property
    def facts_derived(self) -> int:
        return len(self.derived)


def infer(kb: KnowledgeBase) -> tuple[Closure, InferenceGraph]:
    heads = kb.rules.heads
    watchers: list[list[int]] = [[] for _ in range(len(kb.atoms))]
    waiting: list[int] = []
    for idx, premises in enumerate(kb.rules.premises):
        n = len(premises)
        if n == 2:
            a, b = premises
            watchers[a].append(idx)
            if a == b:
                n = 1
            else:
                watchers[b].append(idx)
        else:
            if n > 2 and len(set(premises)) < n:
                premises = tuple(dict.fromkeys(premises))
                n = len(premises)
            for p in premises:
                watchers[p].append(idx)
        waiting.append(n)

    known = bytearray(len(kb.atoms))
    agenda: deque[int] = deque()
    axioms: list[int] = []
    for k in kb.facts:
        if not known[k]:
            known[k] = 1
            axioms.append(k)
            agenda.append(k)

    steps: list[int] = []
    derived: list[int] = []
    ends: list[int] = []
    ready = [idx for idx, n in enumerate(waiting) if not n]
    while True:
        for idx in ready:
            fresh = False
            for h in heads[idx]:
                if not known[h]:
                    known[h] = 1
                    agenda.append(h)
                    derived.append(h)
                    fresh = True
            if fresh:
                steps.append(idx)
                ends.append(len(derived))
        if not agenda:
            break
        ready = []
        for idx in watchers[agenda.popleft()]:
            waiting[idx] -= 1
            if not waiting[idx]:
                ready.append(idx)
    return Closure(kb, known), InferenceGraph(kb, axioms, steps, derived, ends)


def topological_order(graph: InferenceGraph) -> list[tuple[str, tuple[Fact, ...]]]:
    """Rule instances in firing order, each with the facts it derived first."""
    atoms, rules = graph.kb.atoms, graph.kb.rules
    return [(rules[ridx].id, tuple(atoms[k] for k in derived)) for ridx, derived in graph.firings]
