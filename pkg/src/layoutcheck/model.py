"""Layout items, position labels and structural validation.

A layout is a tuple of items.  Pointer offsets are absolute position paths,
e.g. ``(1, 0)`` is the first child of the repetition standing at top-level
position 1.  Labels are assigned purely by position, so a bare tuple of
items (a "tree") already determines every label.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Union

Label = tuple[int, ...]


class LayoutError(ValueError):
    """A layout is not acceptable for the requested operation."""


class InvalidLayoutError(LayoutError):
    def __init__(self, report: ValidationReport):
        self.report = report
        lines = "; ".join(f"{format_label(v.label)}: {v.message}" for v in report.violations)
        super().__init__(f"invalid layout ({lines})")


@dataclass(frozen=True)
class Fixed:
    def __str__(self) -> str:
        return "f"


@dataclass(frozen=True)
class Var:
    def __str__(self) -> str:
        return "v"


@dataclass(frozen=True)
class Const:
    """Syncword: a known bit pattern whose start the parser can always locate."""

    def __str__(self) -> str:
        return "c"


@dataclass(frozen=True)
class Pointer:
    offset: Label
    span: int

    def __post_init__(self):
        if not self.offset or any(c < 0 for c in self.offset):
            raise LayoutError(f"bad pointer offset {self.offset!r}")
        if self.span < 0:
            raise LayoutError(f"negative pointer span {self.span}")

    def __str__(self) -> str:
        return f"p({format_label(self.offset)},{self.span})"


@dataclass(frozen=True)
class Repetition:
    body: tuple[Item, ...] = ()

    def __post_init__(self):
        if not isinstance(self.body, tuple):
            object.__setattr__(self, "body", tuple(self.body))


Item = Union[Fixed, Var, Const, Pointer, Repetition]
Tree = tuple[Item, ...]

F, V, C = Fixed(), Var(), Const()


def format_label(label: Label) -> str:
    return ".".join(str(c) for c in label)


def parse_label(text: str) -> Label:
    return tuple(int(c) for c in text.split("."))


def pointer_range(p: Pointer) -> frozenset[Label]:
    """Labels bounded by ``p``: the half-open run ``offset .. offset+span`` in the offset's scope."""
    scope, first = p.offset[:-1], p.offset[-1]
    return frozenset(scope + (k,) for k in range(first, first + p.span))


@dataclass(frozen=True)
class LabeledLayout:
    """A tree together with the position label of every item (document order)."""

    tree: Tree
    entries: tuple[tuple[Label, Item], ...]
    scopes: tuple[tuple[Label, int], ...]

    def __len__(self) -> int:
        return len(self.tree)

    def __str__(self) -> str:
        from .dsl import print_dsl

        return print_dsl(self.tree)

    @cached_property
    def item_at(self) -> dict[Label, Item]:
        return dict(self.entries)

    @cached_property
    def scope_sizes(self) -> dict[Label, int]:
        return dict(self.scopes)

    def scope_size(self, scope: Label) -> int:
        return self.scope_sizes[scope]

    def labels_of(self, kind: type) -> list[Label]:
        return [lab for lab, it in self.entries if isinstance(it, kind)]

    @property
    def pointers(self) -> list[tuple[Label, Pointer]]:
        return [(lab, it) for lab, it in self.entries if isinstance(it, Pointer)]

    @property
    def varfields(self) -> list[Label]:
        return self.labels_of(Var)

    @property
    def repetitions(self) -> list[Label]:
        return self.labels_of(Repetition)

    @property
    def is_flat(self) -> bool:
        return not any(isinstance(it, Repetition) for _, it in self.entries)


def label_layout(tree) -> LabeledLayout:
    tree = tuple(tree)
    entries: list[tuple[Label, Item]] = []
    scopes: list[tuple[Label, int]] = []

    def visit(items: Tree, scope: Label) -> None:
        scopes.append((scope, len(items)))
        for k, it in enumerate(items):
            lab = scope + (k,)
            entries.append((lab, it))
            if isinstance(it, Repetition):
                visit(it.body, lab)

    visit(tree, ())
    return LabeledLayout(tree, tuple(entries), tuple(scopes))


# -- validation --------------------------------------------------------------

BOUNDS = "bounds-L"
NESTING = "nesting-(1)"
REP_SPAN = "rep-span-(2)"
TOP_SPAN = "top-span-(3)"


@dataclass(frozen=True)
class Violation:
    label: Label
    constraint: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()
    warnings: tuple[Violation, ...] = field(default=(), compare=False)

    @property
    def valid(self) -> bool:
        return not self.violations


def validate(layout: LabeledLayout) -> ValidationReport:
    """Check every pointer against the scoping and span rules.

    A pointer at ``s.d`` may target a sibling ``s.c`` or its own enclosing
    repetition ``s``; anything else could name an item that occurs an
    unbounded number of times.  The span may not run past the end of the
    scope holding the offset.
    """
    flat = layout.is_flat
    violations: list[Violation] = []
    warnings: list[Violation] = []
    for lab, p in layout.pointers:
        scope = lab[:-1]
        off = p.offset
        if off[:-1] == scope:
            pass
        elif scope and off == scope:
            warnings.append(Violation(lab, NESTING, "offset names the enclosing repetition"))
        else:
            violations.append(
                Violation(lab, NESTING, f"offset {format_label(off)} is neither a sibling nor the enclosing repetition")
            )
            continue
        size = layout.scope_size(off[:-1])
        first = off[-1]
        if first >= size:
            violations.append(Violation(lab, BOUNDS, f"offset {format_label(off)} outside a scope of {size} items"))
        elif p.span > size - first:
            cid = BOUNDS if flat else (TOP_SPAN if len(off) == 1 else REP_SPAN)
            violations.append(Violation(lab, cid, f"span {p.span} exceeds the {size - first} items left after the offset"))
    return ValidationReport(tuple(violations), tuple(warnings))


def require_valid(layout: LabeledLayout) -> None:
    report = validate(layout)
    if not report.valid:
        raise InvalidLayoutError(report)


def iter_pointers(items: Tree) -> Iterator[Pointer]:
    for it in items:
        if isinstance(it, Pointer):
            yield it
        elif isinstance(it, Repetition):
            yield from iter_pointers(it.body)
