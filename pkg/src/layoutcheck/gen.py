"""Random layouts and knowledge bases for property testing.

Layouts are valid by construction: every pointer is placed after the size
of its target scope is fixed.
"""
from __future__ import annotations

import random

from .engine import Fact, GroundRule, KnowledgeBase
from .model import Fixed, Item, Label, Pointer, Repetition, Tree, Var
from .transform import shift

# f, v, p, [ ]
ITEM_WEIGHTS = (40, 25, 25, 10)


def _pointer(rng: random.Random, scope: Label, size: int, parent_size: int | None, parent_rate: float) -> Pointer:
    if scope and parent_size is not None and rng.random() < parent_rate:
        room = parent_size - scope[-1]
        return Pointer(scope, rng.randint(0, room))
    a = rng.randrange(size)
    lo = 0 if rng.random() < 0.1 else 1
    return Pointer(scope + (a,), rng.randint(lo, size - a))


def random_tree(
    rng: random.Random,
    max_items: int = 8,
    max_depth: int = 2,
    *,
    min_items: int = 1,
    max_body: int = 4,
    weights: tuple[int, int, int, int] = ITEM_WEIGHTS,
    parent_rate: float = 0.15,
) -> Tree:
    """A random valid layout with repetitions nested at most ``max_depth`` deep."""

    def build(scope: Label, size: int, depth: int, parent_size: int | None) -> Tree:
        kinds = rng.choices("fvpr" if depth < max_depth else "fvp", weights[: 4 if depth < max_depth else 3], k=size)
        items: list[Item] = []
        for k, kind in enumerate(kinds):
            if kind == "f":
                items.append(Fixed())
            elif kind == "v":
                items.append(Var())
            elif kind == "p":
                items.append(_pointer(rng, scope, size, parent_size, parent_rate))
            else:
                inner = rng.randint(0, max_body) if rng.random() < 0.1 else rng.randint(1, max_body)
                items.append(Repetition(build(scope + (k,), inner, depth + 1, size)))
        return tuple(items)

    return build((), rng.randint(min_items, max_items), 0, None)


def random_flat(rng: random.Random, max_items: int = 8, *, min_items: int = 1) -> Tree:
    return random_tree(rng, max_items, 0, min_items=min_items)


def random_repetition_tree(rng: random.Random, max_items: int = 6, max_depth: int = 2, **options) -> Tree:
    """Like random_tree, but retries until at least one repetition is present."""
    while True:
        tree = random_tree(rng, max_items, max_depth, **options)
        if any(isinstance(it, Repetition) for it in _walk(tree)):
            return tree


def _walk(items: Tree):
    for it in items:
        yield it
        if isinstance(it, Repetition):
            yield from _walk(it.body)


def random_kb(rng: random.Random, max_atoms: int = 40, max_rules: int = 120) -> KnowledgeBase:
    atoms = tuple(Fact(f"a{k}") for k in range(rng.randint(1, max_atoms)))
    ids = range(len(atoms))
    facts = tuple(rng.sample(ids, rng.randint(0, min(5, len(atoms)))))
    rules = []
    for k in range(rng.randint(0, max_rules)):
        premises = tuple(rng.choices(ids, k=rng.randint(0, 3)))
        heads = tuple(rng.choices(ids, k=rng.randint(1, 2)))
        rules.append(GroundRule(f"r{k}", premises, heads))
    return KnowledgeBase(atoms, facts, tuple(rules))


def bounded_copies(fragment: Tree, copies: int) -> Tree:
    """``p(1, copies*|r|)`` followed by ``copies`` back-to-back copies of ``r``.

    Each copy is shifted to its position (the first starts at 1), so one
    copy gives the ONCE layout and two give TWICE.
    """
    size = len(fragment)
    out: list[Item] = [Pointer((1,), copies * size)]
    for k in range(copies):
        out.extend(shift(fragment, 1 + k * size))
    return tuple(out)
