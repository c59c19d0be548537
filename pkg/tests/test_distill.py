import pytest

from amrdistill.distill import (CompressedDocument, MonthOutOfRange, compress_context,
                                compress_document, dedup_adjacent, name_of, realize_surface,
                                reconstruct_temporal)
from amrdistill.penman import UnknownVariable, parse_penman
from amrdistill.stats import SignificanceResult


def pick(*pairs, sentence=0):
    return [SignificanceResult(label, 1.0, 1.0, 0.1, True, False, var, sentence) for var, label in pairs]


@pytest.mark.parametrize("penman, expected", [
    ("(d / date-entity :month 7 :year 2025)", "July 2025"),
    ("(d / date-entity :year 1999)", "1999"),
    ("(d / date-entity :day 4 :month 7 :year 1776)", "July 4, 1776"),
    ("(d / date-entity :month 3 :day 15)", "March 15"),
    ("(d / date-entity :month 12)", "December"),
    ("(d / date-entity :day 9)", None),
])
def test_reconstruct_temporal(penman, expected):
    assert reconstruct_temporal(parse_penman(penman), "d") == expected


def test_reconstruct_temporal_errors():
    with pytest.raises(MonthOutOfRange):
        reconstruct_temporal(parse_penman("(d / date-entity :month 13)"), "d")
    with pytest.raises(UnknownVariable):
        reconstruct_temporal(parse_penman("(d / date-entity :month 1)"), "x")
    assert reconstruct_temporal(parse_penman("(b / boy)"), "b") is None


def test_dedup_adjacent():
    assert dedup_adjacent(["Paris", "Paris", "France"]) == ["Paris", "France"]
    assert dedup_adjacent(["a", "b", "a"]) == ["a", "b", "a"]
    assert dedup_adjacent([]) == []


@pytest.mark.parametrize("label, source, expected", [
    ("establish-01", "The prize was established in 1901 by a will.", "established"),
    ("boy", "The boy ran.", "boy"),
    ("govern-01", "", "govern"),
    ("bear-02", "Curie was born in Warsaw.", "born"),
    ("study-01", "She studied physics.", "studied"),
    ("run-01", "Nobody here.", "run"),
    ("New York", "He moved to New York, then left.", "New York"),
])
def test_realize_surface(label, source, expected):
    assert realize_surface(label, source) == expected


def test_realize_keeps_source_casing():
    assert realize_surface("paris", "We saw Paris.") == "Paris"


def test_name_of():
    g = parse_penman('(c / city :name (n / name :op2 "York" :op1 "New"))')
    assert name_of(g, "n") == "New York"
    assert name_of(g, "c") is None


def test_compress_boy():
    g = parse_penman("(b / boy)")
    doc = compress_document([g], pick(("b", "boy")), "The boy ran.", "d0")
    assert doc.text == "boy"
    assert doc.concepts == ("boy",)


def test_compress_date_slot():
    g = parse_penman("(f / found-01 :time (d / date-entity :month 7 :year 2025))")
    doc = compress_document([g], pick(("d", "date-entity")), "It was founded in July 2025.")
    assert doc.text == "July 2025"


def test_compress_empty_selection():
    g = parse_penman("(b / boy)")
    doc = compress_document([g], [], "The boy ran.")
    assert doc.text == "" and doc.concepts == ()


def test_compress_orders_by_sentence_then_graph():
    g0 = parse_penman("(r / run-02 :ARG0 (b / boy))", 0)
    g1 = parse_penman("(s / see-01 :ARG1 (d / dog))", 1)
    sel = pick(("d", "dog"), sentence=1) + pick(("b", "boy"), ("r", "run-02"), sentence=0)
    doc = compress_document([g1, g0], sel, "The boy ran. He saw a dog.")
    assert doc.text == "ran boy dog"


def test_compress_never_exceeds_source():
    g = parse_penman('(p / person :name (n / name :op1 "Ada" :op2 "Lovelace") :mod (f / famous))')
    doc = compress_document([g], pick(("p", "person"), ("n", "name"), ("f", "famous")), "Lovelace wrote.")
    assert len(doc.text.split()) <= 2


def test_compressed_document_rejects_adjacent_duplicates():
    with pytest.raises(ValueError):
        CompressedDocument("d", ("a", "a"), "a a")


def test_compress_context():
    a = CompressedDocument("a", ("boy", "ran"), "boy ran")
    b = CompressedDocument("b", ("July 2025",), "July 2025")
    assert compress_context([a, b]).text == "boy ran\nJuly 2025"
    assert compress_context([a]).text == "boy ran"
    assert compress_context([CompressedDocument("x"), CompressedDocument("y")]).text == ""
