"""Deserializability verdicts and the bounding-pointer diagnostic."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .axioms import Grounding
from .engine import Closure, InferenceGraph, KnowledgeBase, infer
from .model import Label, LabeledLayout, LayoutError, Var, Repetition, format_label, pointer_range, require_valid
from .transform import duplicate_repetitions, source_label

VARFIELD = "varfield-len"
REPETITION = "repetition-replen"


class Status(str, Enum):
    DESERIALIZABLE = "Deserializable"
    NON_DESERIALIZABLE = "NonDeserializable"


@dataclass(frozen=True)
class Missing:
    label: Label
    kind: str
    source: Label


@dataclass
class Verdict:
    status: Status
    missing: list[Missing]
    layout: LabeledLayout  # the layout actually grounded (duplicated for `check`)
    kb: KnowledgeBase
    closure: Closure = field(repr=False)
    graph: InferenceGraph = field(repr=False)

    @property
    def deserializable(self) -> bool:
        return self.status is Status.DESERIALIZABLE

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "missing": [
                {"label": format_label(m.label), "kind": m.kind, "source": format_label(m.source)}
                for m in self.missing
            ],
            "factsDerived": self.graph.facts_derived,
            "rulesFired": self.graph.rules_fired,
        }


def _decide(grounded: LabeledLayout, original: LabeledLayout, checked: bool = True) -> Verdict:
    grounding = Grounding(grounded, checked=checked)
    kb = grounding.kb
    closure, graph = infer(kb)
    missing = []
    for lab, it in grounded.entries:
        if isinstance(it, Var) and not closure.has(grounding.len_atom(lab)):
            missing.append(Missing(lab, VARFIELD, source_label(lab, original)))
        elif isinstance(it, Repetition) and not closure.has(grounding.replen_atom(lab)):
            missing.append(Missing(lab, REPETITION, source_label(lab, original)))
    status = Status.NON_DESERIALIZABLE if missing else Status.DESERIALIZABLE
    return Verdict(status, missing, grounded, kb, closure, graph)


def check_flat(layout: LabeledLayout) -> Verdict:
    """Verdict for a repetition-free layout."""
    require_valid(layout)
    if not layout.is_flat:
        raise LayoutError("check_flat needs a repetition-free layout; use check")
    return _decide(layout, layout)


def check(layout: LabeledLayout) -> Verdict:
    """Verdict with repetitions: every body is doubled before grounding.

    Missing labels refer to the doubled layout; ``Missing.source`` maps them
    back to the input.
    """
    require_valid(layout)
    return _decide(duplicate_repetitions(layout), layout)


def check_flat_unsound(layout: LabeledLayout) -> Verdict:
    """Ground repetitions without doubling their bodies.

    This lumps every occurrence of a repeated field under one label and can
    wrongly accept ``p(1,1) [ v ]``; kept to compare against ``check``.
    """
    require_valid(layout)
    return _decide(layout, layout)


@dataclass(frozen=True)
class BoundingReport:
    bounds: dict[Label, tuple[Label, ...]]

    @property
    def satisfied(self) -> bool:
        return all(self.bounds.values())

    @property
    def unbounded(self) -> list[Label]:
        return [lab for lab, ptrs in self.bounds.items() if not ptrs]


def necessary_condition(layout: LabeledLayout) -> BoundingReport:
    """For each varfield and repetition, the pointers whose range covers it.

    A deserializable layout has at least one for every entry.  Constant
    fields are not counted as bounding, so layouts with syncwords may be
    deserializable while failing this condition.
    """
    require_valid(layout)
    covered: dict[Label, list[Label]] = {}
    for lab, p in layout.pointers:
        for target in pointer_range(p):
            covered.setdefault(target, []).append(lab)
    targets = layout.labels_of((Var, Repetition))
    return BoundingReport({t: tuple(covered.get(t, ())) for t in targets})
