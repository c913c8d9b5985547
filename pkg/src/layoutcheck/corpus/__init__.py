"""Regression layouts with their expected verdicts and properties.

``manifest.json`` lists ``{name, file, expectation, note}``; each
``.lay`` file holds one layout.  Supported expectation keys:

``check`` / ``checkFlatUnsound``
    verdict status string.
``necessaryCondition``
    whether every varfield and repetition is bounded by some pointer.
``bounds``
    label -> labels of the pointers bounding it.
``forwardOnly``, ``reverse``, ``shrink``
    result of the matching transform (layouts as canonical text).
``shift``
    ``{n, result}``.
``unwind``
    ``{n, members}``.
``traceStart``
    leading rule ids of the derivation trace.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from ..checker import check, check_flat_unsound, necessary_condition
from ..dsl import parse_dsl, parse_layout, print_dsl
from ..engine import topological_order
from ..model import format_label, parse_label
from ..preprocess import is_forward_only, shrink_pointers
from ..transform import reverse, shift, unwind


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    file: str
    text: str
    expectation: dict
    note: str


def corpus() -> list[CorpusEntry]:
    root = resources.files(__name__)
    manifest = json.loads((root / "manifest.json").read_text(encoding="utf-8"))
    return [
        CorpusEntry(m["name"], m["file"], (root / m["file"]).read_text(encoding="utf-8"), m["expectation"], m["note"])
        for m in manifest
    ]


def _observe(key: str, want, entry: CorpusEntry):
    layout = parse_layout(entry.text)
    if key == "check":
        return check(layout).status.value
    if key == "checkFlatUnsound":
        return check_flat_unsound(layout).status.value
    if key == "necessaryCondition":
        return necessary_condition(layout).satisfied
    if key == "bounds":
        report = necessary_condition(layout)
        return {t: [format_label(p) for p in report.bounds[parse_label(t)]] for t in want}
    if key == "forwardOnly":
        return is_forward_only(layout)
    if key == "reverse":
        return str(reverse(layout))
    if key == "shrink":
        return str(shrink_pointers(layout))
    if key == "shift":
        return {"n": want["n"], "result": print_dsl(shift(parse_dsl(entry.text), want["n"]))}
    if key == "unwind":
        return {"n": want["n"], "members": [str(m) for m in unwind(layout, want["n"])]}
    if key == "traceStart":
        order = [rule for rule, _ in topological_order(check(layout).graph)]
        return order[: len(want)]
    raise KeyError(f"unknown expectation {key!r}")


def failures(entry: CorpusEntry) -> list[str]:
    """Human-readable mismatches between an entry's expectation and what the tools produce."""
    out = []
    for key, want in entry.expectation.items():
        got = _observe(key, want, entry)
        if got != want:
            out.append(f"{entry.name}: {key} expected {want!r}, got {got!r}")
    return out
