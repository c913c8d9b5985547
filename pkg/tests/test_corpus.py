import pytest

from layoutcheck.checker import check
from layoutcheck.corpus import corpus, failures
from layoutcheck.dsl import parse_layout
from layoutcheck.model import validate

ENTRIES = corpus()


def test_manifest_is_not_empty():
    assert len(ENTRIES) >= 20
    assert len({e.name for e in ENTRIES}) == len(ENTRIES)


@pytest.mark.parametrize("entry", ENTRIES, ids=[e.name for e in ENTRIES])
def test_entry(entry):
    assert validate(parse_layout(entry.text)).valid
    assert failures(entry) == []


def test_every_entry_with_a_verdict_is_checked():
    with_verdict = [e for e in ENTRIES if "check" in e.expectation]
    assert all(check(parse_layout(e.text)).status.value == e.expectation["check"] for e in with_verdict)
    assert {e.expectation["check"] for e in with_verdict} == {"Deserializable", "NonDeserializable"}
