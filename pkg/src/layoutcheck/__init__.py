"""Decide whether a bit layout can be parsed unambiguously.

A layout is compiled into a ground Horn knowledge base describing what a
parser can learn about field boundaries and lengths; forward chaining then
tells whether the length of every variable field is determined.

>>> from layoutcheck import parse_layout, check
>>> check(parse_layout("p(2,1) f v f")).status.value
'Deserializable'
"""
from .checker import Status, Verdict, check, check_flat, check_flat_unsound, necessary_condition
from .dsl import ParseError, parse_dsl, parse_layout, print_dsl
from .model import LabeledLayout, LayoutError, label_layout, pointer_range, validate
from .preprocess import is_forward_only, prune_pointers, shrink_pointers
from .transform import duplicate_repetitions, reverse, shift, unwind

__all__ = [
    "LabeledLayout",
    "LayoutError",
    "ParseError",
    "Status",
    "Verdict",
    "check",
    "check_flat",
    "check_flat_unsound",
    "duplicate_repetitions",
    "is_forward_only",
    "label_layout",
    "necessary_condition",
    "parse_dsl",
    "parse_layout",
    "pointer_range",
    "print_dsl",
    "prune_pointers",
    "reverse",
    "shift",
    "shrink_pointers",
    "unwind",
    "validate",
]
