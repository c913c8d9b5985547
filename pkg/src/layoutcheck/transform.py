"""Reverse, shift, body duplication and unwinding of layouts."""
from __future__ import annotations

from itertools import product
from typing import Iterator

from .model import (
    Item,
    Label,
    LabeledLayout,
    LayoutError,
    Pointer,
    Repetition,
    Tree,
    label_layout,
    require_valid,
)

DEFAULT_UNWIND_CAP = 1000


class UnwindLimitError(LayoutError):
    pass


def _map_offsets(items: Tree, fn) -> Tree:
    out: list[Item] = []
    for it in items:
        if isinstance(it, Pointer):
            out.append(Pointer(fn(it.offset), it.span))
        elif isinstance(it, Repetition):
            out.append(Repetition(_map_offsets(it.body, fn)))
        else:
            out.append(it)
    return tuple(out)


def shift(fragment, n: int, scope: Label = ()) -> Tree:
    """Move a fragment ``n`` positions to the right within ``scope``.

    Only offsets pointing inside the fragment's own frame (strictly below
    ``scope``) are rebased; offsets into enclosing scopes stay put.
    """
    depth = len(scope)

    def move(off: Label) -> Label:
        if len(off) > depth and off[:depth] == scope:
            return off[:depth] + (off[depth] + n,) + off[depth + 1 :]
        return off

    return _map_offsets(tuple(fragment), move)


def reverse(layout: LabeledLayout) -> LabeledLayout:
    """Mirror the top level of a layout; repetitions move as whole items.

    Top-level pointers keep their span and get offset ``|l| - (a + b)``.  A
    zero-span pointer bounds nothing; its offset is mirrored as a position
    (``|l| - 1 - a``) so it stays inside the layout.  Offsets inside a moved
    repetition follow the repetition to its new place.
    """
    require_valid(layout)
    size = len(layout.tree)

    def nested(off: Label) -> Label:
        if len(off) == 1:
            raise LayoutError("cannot reverse: a repetition body points at a top-level position")
        return (size - 1 - off[0],) + off[1:]

    out: list[Item] = []
    for it in reversed(layout.tree):
        if isinstance(it, Pointer):
            a, b = it.offset[0], it.span
            out.append(Pointer((size - (a + b) if b else size - 1 - a,), b))
        elif isinstance(it, Repetition):
            out.append(Repetition(_map_offsets(it.body, nested)))
        else:
            out.append(it)
    return label_layout(out)


def duplicate_repetitions(layout: LabeledLayout) -> LabeledLayout:
    """Replace every repetition body ``r`` with ``r`` followed by ``r`` shifted by ``|r|``.

    Inner repetitions are doubled before the bodies that contain them.
    """

    def dup(items: Tree, scope: Label) -> Tree:
        out: list[Item] = []
        for k, it in enumerate(items):
            if isinstance(it, Repetition):
                here = scope + (k,)
                body = dup(it.body, here)
                out.append(Repetition(body + shift(body, len(body), here)))
            else:
                out.append(it)
        return tuple(out)

    return label_layout(dup(layout.tree, ()))


def source_label(label: Label, original: LabeledLayout) -> Label:
    """Map a label of ``duplicate_repetitions(original)`` back to ``original``."""
    out: Label = ()
    for depth, c in enumerate(label):
        if depth:
            size = original.scope_size(out)
            c = c % size if size else c
        out = out + (c,)
    return out


# -- unwinding -----------------------------------------------------------------


def _expansions(items: Tree, scope: Label, ctx: tuple, n: int) -> Iterator[list]:
    """Every way to unwind ``items``: lists of ('item', ...) / ('bound', ...) events."""
    options = []
    for k, it in enumerate(items):
        lab = scope + (k,)
        if isinstance(it, Repetition):
            options.append(list(_rep_expansions(it, lab, ctx, n)))
        else:
            options.append([[("item", it, ctx, lab)]])
    end = ("bound", ctx, scope + (len(items),))
    for combo in product(*options):
        events: list = []
        for k, chunk in enumerate(combo):
            events.append(("bound", ctx, scope + (k,)))
            events.extend(chunk)
        events.append(end)
        yield events


def _rep_expansions(rep: Repetition, lab: Label, ctx: tuple, n: int) -> Iterator[list]:
    for copies in range(n + 1):
        per_copy = [list(_expansions(rep.body, lab, ctx + (i,), n)) for i in range(copies)]
        for combo in product(*per_copy):
            yield [e for chunk in combo for e in chunk]


def _flatten(events: list) -> Tree:
    bounds: dict = {}
    placed: list = []
    for ev in events:
        if ev[0] == "bound":
            bounds.setdefault((ev[1], ev[2]), len(placed))
        else:
            placed.append(ev[1:])
    size = len(placed)
    out: list[Item] = []
    for it, ctx, lab in placed:
        if isinstance(it, Pointer):
            off = it.offset
            octx = ctx[: len(off) - 1]
            start = bounds[(octx, off)]
            stop = bounds[(octx, off[:-1] + (off[-1] + it.span,))]
            if start >= size:
                # an empty range left dangling past the end collapses onto the last item
                start = stop = max(size - 1, 0)
            out.append(Pointer((start,), stop - start))
        else:
            out.append(it)
    return tuple(out)


def unwind(layout: LabeledLayout, n: int, cap: int = DEFAULT_UNWIND_CAP) -> list[LabeledLayout]:
    """All flat layouts obtained by unwinding each repetition occurrence 0..n times.

    Pointer offsets and spans are recomputed so they keep bounding the same
    stream positions.  Raises UnwindLimitError past ``cap`` unwindings.
    """
    require_valid(layout)
    seen: dict[Tree, None] = {}
    for count, events in enumerate(_expansions(layout.tree, (), (), n), 1):
        if count > cap:
            raise UnwindLimitError(f"more than {cap} unwindings at n={n}")
        seen.setdefault(_flatten(events), None)
    return [label_layout(t) for t in seen]
