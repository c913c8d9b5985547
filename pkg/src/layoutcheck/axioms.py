"""Grounding a layout into the propositional parser knowledge base.

Label arithmetic (``a + 1``, ``a + s``, ``b . 0``) is carried out here, so
the engine only ever sees ground atoms.
"""
from __future__ import annotations

from bisect import bisect_right
from collections.abc import Sequence

from .engine import Fact, KnowledgeBase, RuleTable
from .model import Const, Fixed, Label, LabeledLayout, Pointer, Repetition, format_label, require_valid


def beg(label: Label) -> Fact:
    return Fact("beg", (label,))


def len_(label: Label) -> Fact:
    return Fact("len", (label,))


def val(label: Label) -> Fact:
    return Fact("val", (label,))


def replen(label: Label) -> Fact:
    return Fact("replen", (label,))


def span(offset: Label, width: int, at: Label) -> Fact:
    return Fact("span", (offset, width, at))


def rep(at: Label, count: int) -> Fact:
    return Fact("rep", (at, count))


def _boundary_labels(layout: LabeledLayout) -> list[Label]:
    labels = [lab for lab, _ in layout.entries]
    labels.extend(scope + (size,) for scope, size in layout.scopes)
    return labels


def fact_universe(layout: LabeledLayout) -> frozenset[Fact]:
    atoms = set()
    for lab in _boundary_labels(layout):
        atoms.update((beg(lab), len_(lab), val(lab)))
    for lab, it in layout.entries:
        if isinstance(it, Pointer):
            atoms.add(span(it.offset, it.span, lab))
        elif isinstance(it, Repetition):
            atoms.update((replen(lab), rep(lab, len(it.body))))
    return frozenset(atoms)


def fact_universe_size(layout: LabeledLayout) -> int:
    n = 3 * (len(layout.entries) + len(layout.scopes))
    for _, it in layout.entries:
        if isinstance(it, Pointer):
            n += 1
        elif isinstance(it, Repetition):
            n += 2
    return n


_UNARY = ("beg", "len", "val")


class AtomTable(Sequence):
    """The atoms of a grounded layout, materialized as Facts only on access.

    Scope blocks come first (``beg``, ``len``, ``val`` for each of the
    ``size + 1`` boundaries of the scope), then the ``extra`` atoms.
    """

    def __init__(self):
        self.bases: list[int] = []
        self.blocks: list[tuple[Label, int]] = []
        self.extra: list[Fact] = []
        self.block_end = 0

    def add_scope(self, scope: Label, size: int) -> int:
        base = self.block_end
        self.bases.append(base)
        self.blocks.append((scope, size + 1))
        self.block_end += 3 * (size + 1)
        return base

    def add(self, fact: Fact) -> int:
        self.extra.append(fact)
        return self.block_end + len(self.extra) - 1

    def __len__(self) -> int:
        return self.block_end + len(self.extra)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[j] for j in range(*k.indices(len(self)))]
        if k < 0:
            k += len(self)
        if not 0 <= k < len(self):
            raise IndexError(k)
        if k >= self.block_end:
            return self.extra[k - self.block_end]
        b = bisect_right(self.bases, k) - 1
        scope, width = self.blocks[b]
        kind, a = divmod(k - self.bases[b], width)
        return Fact(_UNARY[kind], (scope + (a,),))


class RuleIds(Sequence):
    """Rule names: three per position of every scope (computed on access), then the extra rules."""

    _KINDS = ("Forward", "Backward", "Join")

    def __init__(self):
        self.bases: list[int] = []
        self.prefixes: list[str] = []
        self.extra: list[str] = []
        self.block_end = 0

    def add_scope(self, scope: Label, size: int) -> None:
        self.bases.append(self.block_end)
        self.prefixes.append(f"{format_label(scope)}." if scope else "")
        self.block_end += 3 * size

    def __len__(self) -> int:
        return self.block_end + len(self.extra)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[j] for j in range(*k.indices(len(self)))]
        if k < 0:
            k += len(self)
        if not 0 <= k < len(self):
            raise IndexError(k)
        if k >= self.block_end:
            return self.extra[k - self.block_end]
        b = bisect_right(self.bases, k) - 1
        a, kind = divmod(k - self.bases[b], 3)
        return f"{self._KINDS[kind]}@{self.prefixes[b]}{a}"


class Grounding:
    """The knowledge base of a layout plus the atom ids of its beg/len/val facts.

    Atoms are numbered scope by scope (``beg``, then ``len``, then ``val`` of
    every boundary), followed by one ``span`` per pointer and
    ``rep``/``replen`` per repetition, so grounding never hashes a fact.
    """

    def __init__(self, layout: LabeledLayout, *, checked: bool = False):
        if not checked:
            require_valid(layout)
        self.layout = layout
        atoms = AtomTable()
        new = atoms.add
        self.begs: dict[Label, range] = {}
        self.lens: dict[Label, range] = {}
        self.vals: dict[Label, range] = {}
        for scope, size in layout.scopes:
            base = atoms.add_scope(scope, size)
            k = size + 1
            self.begs[scope] = range(base, base + k)
            self.lens[scope] = range(base + k, base + 2 * k)
            self.vals[scope] = range(base + 2 * k, base + 3 * k)
        self.replens: dict[Label, int] = {}

        begs, lens, vals = self.begs, self.lens, self.vals
        facts: list[int] = [begs[()][0]]
        ids = RuleIds()
        premises: list[tuple[int, ...]] = []
        heads: list[tuple[int, ...]] = []

        # Forward/Backward/Join for every position, scope by scope
        for scope, size in layout.scopes:
            ids.add_scope(scope, size)
            b, ln, vl = begs[scope][0], lens[scope][0], vals[scope][0]
            for a in range(size):
                b0, b1, la, va = b + a, b + a + 1, ln + a, vl + a
                premises += ((b0, la), (b1, la), (b0, b1))
                heads += ((va, b1), (b0, va), (la,))

        def rule(name: str, body: tuple[int, ...], head: int) -> None:
            ids.extra.append(name)
            premises.append(body)
            heads.append((head,))

        for lab, it in layout.entries:
            scope, a = lab[:-1], lab[-1]
            if isinstance(it, (Fixed, Const, Pointer)):
                facts.append(lens[scope][a])
            if isinstance(it, Const):
                facts.append(begs[scope][a])
            elif isinstance(it, Pointer):
                fact = new(span(it.offset, it.span, lab))
                facts.append(fact)
                if it.offset == scope and it.span > 1:
                    # the pointer names its own repetition and reaches past it: when the
                    # repetition occurs zero times the pointer is absent but the fields it
                    # bounds remain, so it cannot justify any jump
                    continue
                target = begs[it.offset[:-1]]
                lo, hi = target[it.offset[-1]], target[it.offset[-1] + it.span]
                tag = f"({format_label(it.offset)},{it.span},{format_label(lab)})"
                v = vals[scope][a]
                rule(f"JumpRight@{tag}", (fact, v, lo), hi)
                rule(f"JumpLeft@{tag}", (fact, v, hi), lo)
            elif isinstance(it, Repetition):
                size = len(it.body)
                fact = new(rep(lab, size))
                length = self.replens[lab] = new(replen(lab))
                facts.append(fact)
                here, after = begs[scope][a], begs[scope][a + 1]
                inner = begs[lab]
                name = format_label(lab)
                rule(f"RepLenAx@{name}", (fact, here, after), length)
                rule(f"rephead@{name}", (fact, here), inner[0])
                rule(f"reptail@{name}", (fact, after), inner[size])

        self.kb = KnowledgeBase(atoms, tuple(dict.fromkeys(facts)), RuleTable(ids, premises, heads))

    def len_atom(self, label: Label) -> int:
        return self.lens[label[:-1]][label[-1]]

    def replen_atom(self, label: Label) -> int:
        return self.replens[label]


def ground_axioms(layout: LabeledLayout, *, checked: bool = False) -> KnowledgeBase:
    return Grounding(layout, checked=checked).kb
