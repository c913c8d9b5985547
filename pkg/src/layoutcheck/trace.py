"""Derivation traces and graph / knowledge-base exports."""
from __future__ import annotations

import json
from dataclasses import dataclass

from .engine import Fact, InferenceGraph, KnowledgeBase, topological_order
from .model import Label, LabeledLayout, Repetition, format_label


@dataclass(frozen=True)
class TraceRow:
    step: int
    rule: str
    derived: tuple[Fact, ...]
    begs: frozenset[Label]
    vals: frozenset[Label]

    def consumed(self, layout: LabeledLayout) -> list[Label]:
        return [lab for lab in _fields(layout) if lab in self.vals]

    def buffered(self, layout: LabeledLayout) -> list[Label]:
        return [
            lab
            for lab in _fields(layout)
            if lab not in self.vals and lab in self.begs and _next(lab) in self.begs
        ]


def _next(lab: Label) -> Label:
    return lab[:-1] + (lab[-1] + 1,)


def _fields(layout: LabeledLayout) -> list[Label]:
    return [lab for lab, it in layout.entries if not isinstance(it, Repetition)]


def render_trace(graph: InferenceGraph, layout: LabeledLayout) -> list[TraceRow]:
    """One row per fired rule instance, with the Beg/Val labels known after it."""
    begs = {f.args[0] for f in graph.axioms if f.pred == "beg"}
    vals = {f.args[0] for f in graph.axioms if f.pred == "val"}
    rows = []
    for step, (rule, derived) in enumerate(topological_order(graph)):
        for f in derived:
            if f.pred == "beg":
                begs.add(f.args[0])
            elif f.pred == "val":
                vals.add(f.args[0])
        rows.append(TraceRow(step, rule, derived, frozenset(begs), frozenset(vals)))
    return rows


def format_trace(rows: list[TraceRow]) -> str:
    width = max((len(r.rule) for r in rows), default=4)
    lines = []
    for r in rows:
        derived = ", ".join(map(str, r.derived))
        lines.append(f"{r.step:>4}  {r.rule:<{width}}  {derived}")
    return "\n".join(lines)


def format_art(rows: list[TraceRow], layout: LabeledLayout) -> str:
    """Grid of fields per step: '#' consumed, '~' buffered, '.' not yet placed."""
    fields = _fields(layout)
    cols = [format_label(lab) for lab in fields]
    cw = max((len(c) for c in cols), default=1)
    width = max((len(r.rule) for r in rows), default=4)
    head = " " * (width + 2) + " ".join(c.rjust(cw) for c in cols)
    lines = [head]
    for r in rows:
        cells = []
        for lab in fields:
            if lab in r.vals:
                mark = "#"
            elif lab in r.begs and _next(lab) in r.begs:
                mark = "~"
            else:
                mark = "."
            cells.append(mark.rjust(cw))
        lines.append(f"{r.rule:<{width}}  " + " ".join(cells))
    return "\n".join(lines)


def _arg(a):
    return format_label(a) if isinstance(a, tuple) else a


def graph_to_json(graph: InferenceGraph) -> dict:
    """``{"facts": [{id, predicate, args, derivedBy, premises}]}``; axioms have derivedBy null."""
    out = []
    for f in graph.facts():
        d = graph.derivations.get(f)
        out.append(
            {
                "id": str(f),
                "predicate": f.pred,
                "args": [_arg(a) for a in f.args],
                "derivedBy": d.rule if d else None,
                "premises": [str(p) for p in d.premises] if d else [],
            }
        )
    return {"facts": out}


def _dot_id(f: Fact) -> str:
    return json.dumps(str(f))


def graph_to_dot(graph: InferenceGraph) -> str:
    lines = ["digraph inference {"]
    for f in graph.axioms:
        lines.append(f"  {_dot_id(f)} [shape=box];")
    for f, d in graph.derivations.items():
        lines.append(f"  {_dot_id(f)};")
        for p in d.premises:
            lines.append(f"  {_dot_id(p)} -> {_dot_id(f)} [label={json.dumps(d.rule)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_graph(graph: InferenceGraph, format: str) -> str:
    if format == "dot":
        return graph_to_dot(graph)
    if format == "json":
        return json.dumps(graph_to_json(graph), indent=2) + "\n"
    raise ValueError(f"unsupported graph format {format!r}")


def kb_to_json(kb: KnowledgeBase) -> dict:
    atoms = kb.atoms
    return {
        "universe": [str(f) for f in atoms],
        "facts": [str(atoms[k]) for k in kb.facts],
        "rules": [
            {"id": r.id, "premises": [str(atoms[p]) for p in r.premises], "heads": [str(atoms[h]) for h in r.heads]}
            for r in kb.rules
        ],
    }
