"""Layout clean-up passes: shrinking and pruning pointers, forward-only test."""
from __future__ import annotations

from .model import Fixed, Item, LabeledLayout, LayoutError, Pointer, Repetition, Var, label_layout, require_valid


def _is_target(it: Item) -> bool:
    return isinstance(it, (Var, Repetition))


def shrink_pointers(layout: LabeledLayout) -> LabeledLayout:
    """Narrow each pointer's range to start and end on a varfield or repetition.

    Pointers whose range holds no such item are left for prune_pointers.
    """
    require_valid(layout)
    if not layout.is_flat:
        raise LayoutError("shrink_pointers works on repetition-free layouts")
    tree = layout.tree
    # nearest target at or after / at or before each position
    size = len(tree)
    next_t = [size] * (size + 1)
    for k in range(size - 1, -1, -1):
        next_t[k] = k if _is_target(tree[k]) else next_t[k + 1]
    prev_t = [-1] * (size + 1)
    for k in range(size):
        prev_t[k + 1] = k if _is_target(tree[k]) else prev_t[k]

    out: list[Item] = []
    for it in tree:
        if isinstance(it, Pointer) and it.span:
            lo, hi = it.offset[0], it.offset[0] + it.span
            first, last = next_t[lo], prev_t[hi]
            if first < hi:
                it = Pointer((first,), last - first + 1)
        out.append(it)
    return label_layout(out)


def prune_pointers(layout: LabeledLayout) -> LabeledLayout:
    """Turn pointers that bound no varfield or repetition into fixed fields.

    The field keeps its place in the stream; only its meaning is dropped.
    """
    require_valid(layout)
    item_at = layout.item_at

    def useless(p: Pointer) -> bool:
        scope, a = p.offset[:-1], p.offset[-1]
        return not any(_is_target(item_at[scope + (k,)]) for k in range(a, a + p.span))

    def walk(items) -> tuple:
        out: list[Item] = []
        for it in items:
            if isinstance(it, Pointer) and useless(it):
                out.append(Fixed())
            elif isinstance(it, Repetition):
                out.append(Repetition(walk(it.body)))
            else:
                out.append(it)
        return tuple(out)

    return label_layout(walk(layout.tree))


def is_forward_only(layout: LabeledLayout) -> bool:
    """True when no pointer sits after the item its offset names.

    A pointer naming its own enclosing repetition counts as backward, since
    the repetition starts before the pointer.
    """
    require_valid(layout)
    for lab, p in layout.pointers:
        if p.offset[:-1] != lab[:-1] or lab[-1] > p.offset[-1]:
            return False
    return True
