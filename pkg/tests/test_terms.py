import pytest

from kgrec.terms import (
    BlankNode,
    Datatype,
    Iri,
    Literal,
    TermError,
    Triple,
    Variable,
    parse_datetime,
    sort_key,
)


def test_iri_rejects_empty_and_whitespace():
    with pytest.raises(TermError):
        Iri("")
    with pytest.raises(TermError):
        Iri("http://example.org/a b")


def test_literal_lexical_validation():
    Literal("42", Datatype.INTEGER)
    Literal("-3", Datatype.INTEGER)
    Literal("3.25", Datatype.FLOAT)
    Literal("true", Datatype.BOOLEAN)
    Literal("2023-05-01T00:00:00", Datatype.DATETIME)
    with pytest.raises(TermError):
        Literal("4.2", Datatype.INTEGER)
    with pytest.raises(TermError):
        Literal("yes", Datatype.BOOLEAN)
    with pytest.raises(TermError):
        Literal("not-a-date", Datatype.DATETIME)


def test_language_tag_only_on_strings():
    Literal("noir", Datatype.STRING, language="fr")
    with pytest.raises(TermError):
        Literal("5", Datatype.INTEGER, language="fr")


def test_literal_values():
    assert Literal("42", Datatype.INTEGER).value() == 42
    assert Literal("2.5", Datatype.FLOAT).value() == 2.5
    assert Literal("false", Datatype.BOOLEAN).value() is False
    assert parse_datetime("2023-05-01T10:30:00Z").hour == 10


def test_triple_invariants():
    s = Iri("http://example.org/s")
    p = Iri("http://example.org/p")
    with pytest.raises(TermError):
        Triple(Literal("x"), p, s)  # literal subject
    with pytest.raises(TermError):
        Triple(s, Literal("x"), s)  # literal predicate
    with pytest.raises(TermError):
        Triple(s, BlankNode("b"), s)  # blank predicate
    Triple(BlankNode("b"), p, Literal("x"))


def test_variable_name_rule():
    Variable("color1")
    with pytest.raises(TermError):
        Variable("1color")
    with pytest.raises(TermError):
        Variable("")


def test_sort_key_total_order():
    terms = [
        None,
        BlankNode("b"),
        Iri("http://example.org/a"),
        Literal("10", Datatype.INTEGER),
        Literal("9.5", Datatype.FLOAT),
        Literal("abc"),
        Literal("2020-01-01T00:00:00", Datatype.DATETIME),
    ]
    ordered = sorted(terms, key=sort_key)
    assert ordered[0] is None
    assert isinstance(ordered[1], BlankNode)
    assert isinstance(ordered[2], Iri)
    # numerics compare by value across datatypes
    numeric = [t for t in ordered if isinstance(t, Literal) and t.is_numeric()]
    assert [t.lexical for t in numeric] == ["9.5", "10"]
