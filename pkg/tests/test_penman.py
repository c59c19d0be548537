import pytest

from amrdistill.penman import (AmrGraph, ConceptNode, Constant, DanglingReference,
                               DuplicateVariable, EmptyInput, PenmanSyntaxError, Relation,
                               UnbalancedParens, UnknownVariable, attributes_of, concept_nodes,
                               parse_penman, serialize_penman, strip_sense_suffix)

WANT = "(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))"
DATE = "(d / date-entity :month 7 :year 2025)"


def test_minimal_graph():
    g = parse_penman("(b / boy)")
    assert g.root == "b"
    assert list(g.nodes) == ["b"]
    assert g.nodes["b"].label == "boy"
    assert g.relations == ()


def test_reentrancy_targets_existing_node():
    g = parse_penman(WANT)
    assert len(g.nodes) == 3
    assert len(g.relations) == 3
    assert Relation("g", ":ARG0", "b") in g.relations
    assert g.nodes["w"].node_kind == "predicate"


def test_date_entity_attributes_are_integer_constants():
    g = parse_penman(DATE)
    assert len(g.nodes) == 1
    assert [r.target for r in g.relations] == [Constant(7, "integer"), Constant(2025, "integer")]
    assert all(r.is_attribute for r in g.relations)
    assert g.nodes["d"].node_kind == "special"


def test_serialize_minimal():
    assert serialize_penman(AmrGraph("b", {"b": ConceptNode("b", "boy")})) == "(b / boy)"


def test_round_trip_want():
    g = parse_penman(WANT)
    assert serialize_penman(g) == WANT
    assert parse_penman(serialize_penman(g)) == g


def test_quoted_literal_preserved():
    text = '(c / city :name (n / name :op1 "New York"))'
    g = parse_penman(text)
    assert attributes_of(g, "n") == [(":op1", Constant("New York", "string"))]
    assert serialize_penman(g) == text


def test_escaped_quote_round_trip():
    text = r'(n / name :op1 "say \"hi\"")'
    g = parse_penman(text)
    assert attributes_of(g, "n")[0][1].value == 'say "hi"'
    assert parse_penman(serialize_penman(g)) == g


def test_reference_before_definition_round_trips():
    g = parse_penman("(a / x :ARG0 b :ARG1 (b / y :mod (c / z)))")
    again = parse_penman(serialize_penman(g))
    assert again == g
    assert hash(again) == hash(g)


def test_alignments_and_metadata():
    text = "# ::snt The boy.\n(b / boy~e.1 :quant 2~e.0)"
    g = parse_penman(text)
    assert g.nodes["b"].alignment == (1,)
    assert attributes_of(g, "b")[0][1].alignment == (0,)
    assert serialize_penman(g) == "(b / boy~e.1 :quant 2~e.0)"


def test_concept_nodes_order():
    assert [n.label for n in concept_nodes(parse_penman(WANT))] == ["want-01", "boy", "go-02"]
    assert [n.label for n in concept_nodes(parse_penman("(b / boy)"))] == ["boy"]
    assert [n.label for n in concept_nodes(parse_penman(DATE))] == ["date-entity"]


def test_attributes_of():
    g = parse_penman(DATE)
    assert attributes_of(g, "d") == [(":month", Constant(7, "integer")),
                                     (":year", Constant(2025, "integer"))]
    assert attributes_of(parse_penman(WANT), "b") == []
    with pytest.raises(UnknownVariable):
        attributes_of(g, "zz")


def test_symbol_constants():
    g = parse_penman("(r / run-01 :polarity - :mode imperative)")
    assert [c.kind for _, c in attributes_of(g, "r")] == ["symbol", "symbol"]


@pytest.mark.parametrize("text, exc", [
    ("", EmptyInput),
    ("   \n# only metadata\n", EmptyInput),
    ("(b / boy", UnbalancedParens),
    ("(b / boy))", UnbalancedParens),
    ("(b / boy :ARG0 (b / girl))", DuplicateVariable),
    ("(w / want-01 :ARG0 x)", DanglingReference),
    ("(b boy)", PenmanSyntaxError),
    ("(b / boy) (g / girl)", PenmanSyntaxError),
])
def test_errors(text, exc):
    with pytest.raises(exc):
        parse_penman(text)


def test_unbalanced_is_syntax_error_with_position():
    with pytest.raises(PenmanSyntaxError) as info:
        parse_penman("(b / boy))")
    assert info.value.position is not None


def test_graph_validation():
    with pytest.raises(ValueError):
        AmrGraph("x", {"b": ConceptNode("b", "boy")})
    with pytest.raises(ValueError):
        AmrGraph("b", {"b": ConceptNode("b", "boy")}, (Relation("b", ":ARG0", "q"),))
    with pytest.raises(ValueError):
        ConceptNode("b", "")


def test_strip_sense_suffix():
    assert strip_sense_suffix("establish-01") == "establish"
    assert strip_sense_suffix("date-entity") == "date-entity"
    assert strip_sense_suffix("boy") == "boy"
