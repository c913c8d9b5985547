"""Text syntax for layouts (``.lay`` files).

    layout := item*
    item   := "f" | "v" | "c" | "p(" path "," nat ")" | "[" layout "]"
    path   := nat ("." nat)*

``#`` starts a comment running to the end of the line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .model import Const, Fixed, Item, LabeledLayout, Pointer, Repetition, Tree, Var, format_label, label_layout

_TOKEN = re.compile(r"\s+|#[^\n]*|(?P<nat>\d+)|(?P<word>[A-Za-z_]\w*)|(?P<punct>[()\[\],.])|(?P<bad>.)")


@dataclass(frozen=True)
class SourceSpan:
    begin: int
    end: int


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan, expected: str = ""):
        self.message = message
        self.span = span
        self.expected = expected
        hint = f" (expected {expected})" if expected else ""
        super().__init__(f"{message}{hint} at byte {span.begin}")


def _tokens(text: str) -> list[tuple[str, str, int, int]]:
    out = []
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        if kind is None:
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group()!r}", _span(text, m.start(), m.end()))
        out.append((kind, m.group(), m.start(), m.end()))
    return out


def _span(text: str, begin: int, end: int) -> SourceSpan:
    b = len(text[:begin].encode("utf-8"))
    return SourceSpan(b, b + len(text[begin:end].encode("utf-8")))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def fail(self, message: str, expected: str = ""):
        tok = self.peek()
        if tok is None:
            n = len(self.text)
            raise ParseError(message, _span(self.text, n, n), expected)
        raise ParseError(message, _span(self.text, tok[2], tok[3]), expected)

    def expect(self, value: str) -> None:
        tok = self.peek()
        if tok is None or tok[1] != value:
            self.fail(f"unexpected {'end of input' if tok is None else repr(tok[1])}", repr(value))
        self.pos += 1

    def nat(self) -> int:
        tok = self.peek()
        if tok is None or tok[0] != "nat":
            self.fail(f"unexpected {'end of input' if tok is None else repr(tok[1])}", "a natural number")
        self.pos += 1
        return int(tok[1])

    def layout(self, closing: str | None) -> Tree:
        items: list[Item] = []
        while True:
            tok = self.peek()
            if tok is None:
                if closing:
                    self.fail("unterminated repetition", repr(closing))
                return tuple(items)
            if tok[1] == closing:
                return tuple(items)
            items.append(self.item())

    def item(self) -> Item:
        kind, value, _, _ = self.peek()
        if value == "[":
            self.pos += 1
            body = self.layout("]")
            self.expect("]")
            return Repetition(body)
        if kind == "word":
            self.pos += 1
            if value == "f":
                return Fixed()
            if value == "v":
                return Var()
            if value == "c":
                return Const()
            if value == "p":
                self.expect("(")
                path = [self.nat()]
                while self.peek() is not None and self.peek()[1] == ".":
                    self.pos += 1
                    path.append(self.nat())
                self.expect(",")
                span = self.nat()
                self.expect(")")
                return Pointer(tuple(path), span)
            self.pos -= 1
        self.fail(f"unexpected {value!r}", "an item (f, v, c, p(...) or [)")


def parse_dsl(text: str) -> Tree:
    return _Parser(text).layout(None)


def parse_layout(text: str) -> LabeledLayout:
    return label_layout(parse_dsl(text))


def _print_item(it: Item) -> str:
    if isinstance(it, Pointer):
        return f"p({format_label(it.offset)},{it.span})"
    if isinstance(it, Repetition):
        inner = print_dsl(it.body)
        return f"[ {inner} ]" if inner else "[ ]"
    return str(it)


def print_dsl(tree) -> str:
    return " ".join(_print_item(it) for it in tree)
