"""RDF term and triple model.

Terms are immutable and hashable so graphs can use plain set semantics.
The datatype space is deliberately small: string, integer, float, boolean
and dateTime cover everything the vehicle domain uses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Optional, Union


class TermError(ValueError):
    """Raised when a term or triple violates a model invariant."""


class Datatype(Enum):
    STRING = "string"
    INTEGER = "integer"
    FLOAT = "float"
    BOOLEAN = "boolean"
    DATETIME = "dateTime"

    @property
    def iri(self) -> str:
        return _CANONICAL_DATATYPE_IRIS[self]


# Canonical IRIs use the same spelling as the rest of the vocabulary
# (see vocab.XSD); the standard www.w3.org spelling is accepted on input.
_XSD = "http://w3.org/2001/XMLSchema#"
_XSD_WWW = "http://www.w3.org/2001/XMLSchema#"

_CANONICAL_DATATYPE_IRIS = {
    Datatype.STRING: _XSD + "string",
    Datatype.INTEGER: _XSD + "integer",
    Datatype.FLOAT: _XSD + "float",
    Datatype.BOOLEAN: _XSD + "boolean",
    Datatype.DATETIME: _XSD + "dateTime",
}

DATATYPE_BY_IRI: dict[str, Datatype] = {}
for _ns in (_XSD, _XSD_WWW):
    DATATYPE_BY_IRI[_ns + "string"] = Datatype.STRING
    for _local in ("int", "integer", "long"):
        DATATYPE_BY_IRI[_ns + _local] = Datatype.INTEGER
    for _local in ("float", "double", "decimal"):
        DATATYPE_BY_IRI[_ns + _local] = Datatype.FLOAT
    DATATYPE_BY_IRI[_ns + "boolean"] = Datatype.BOOLEAN
    DATATYPE_BY_IRI[_ns + "dateTime"] = Datatype.DATETIME


_INTEGER_RE = re.compile(r"^[+-]?[0-9]+$")
_FLOAT_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$|^[+-]?INF$|^NaN$")
_BOOLEAN_LEXICALS = {"true", "false", "1", "0"}


def parse_datetime(lexical: str) -> datetime:
    """ISO-8601 parser tolerant of a trailing Z (Python 3.10 is not)."""
    text = lexical.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        return datetime.fromisoformat(text)
    except ValueError as exc:
        raise TermError(f"invalid dateTime lexical form: {lexical!r}") from exc


def _check_lexical(lexical: str, datatype: Datatype) -> None:
    if datatype is Datatype.INTEGER and not _INTEGER_RE.match(lexical):
        raise TermError(f"invalid integer lexical form: {lexical!r}")
    if datatype is Datatype.FLOAT and not _FLOAT_RE.match(lexical):
        raise TermError(f"invalid float lexical form: {lexical!r}")
    if datatype is Datatype.BOOLEAN and lexical not in _BOOLEAN_LEXICALS:
        raise TermError(f"invalid boolean lexical form: {lexical!r}")
    if datatype is Datatype.DATETIME:
        parse_datetime(lexical)


_WHITESPACE_RE = re.compile(r"\s")


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not self.value:
            raise TermError("IRI must be non-empty")
        if _WHITESPACE_RE.search(self.value):
            raise TermError(f"IRI contains whitespace: {self.value!r}")

    def __repr__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: Datatype = Datatype.STRING
    language: Optional[str] = None

    def __post_init__(self) -> None:
        if self.language is not None and self.datatype is not Datatype.STRING:
            raise TermError("language tag only allowed on string literals")
        _check_lexical(self.lexical, self.datatype)

    def value(self) -> Union[str, int, float, bool, datetime]:
        """The lexical form interpreted in the literal's value space."""
        if self.datatype is Datatype.INTEGER:
            return int(self.lexical)
        if self.datatype is Datatype.FLOAT:
            return float(self.lexical.replace("INF", "inf"))
        if self.datatype is Datatype.BOOLEAN:
            return self.lexical in ("true", "1")
        if self.datatype is Datatype.DATETIME:
            return parse_datetime(self.lexical)
        return self.lexical

    def is_numeric(self) -> bool:
        return self.datatype in (Datatype.INTEGER, Datatype.FLOAT)

    def __repr__(self) -> str:
        if self.language:
            return f'"{self.lexical}"@{self.language}'
        if self.datatype is Datatype.STRING:
            return f'"{self.lexical}"'
        return f'"{self.lexical}"^^xsd:{self.datatype.value}'


@dataclass(frozen=True, slots=True)
class BlankNode:
    label: str

    def __post_init__(self) -> None:
        if not self.label:
            raise TermError("blank node label must be non-empty")

    def __repr__(self) -> str:
        return f"_:{self.label}"


Term = Union[Iri, Literal, BlankNode]


@dataclass(frozen=True, slots=True)
class Variable:
    """A query/rule variable; not an RDF term but shares the term places."""

    name: str

    def __post_init__(self) -> None:
        if not re.match(r"^[A-Za-z][A-Za-z0-9]*$", self.name):
            raise TermError(f"invalid variable name: {self.name!r}")

    def __repr__(self) -> str:
        return f"?{self.name}"


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self) -> None:
        if isinstance(self.subject, Literal):
            raise TermError("triple subject must not be a literal")
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise TermError(f"invalid triple subject: {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise TermError(f"triple predicate must be an IRI: {self.predicate!r}")
        if not isinstance(self.object, (Iri, Literal, BlankNode)):
            raise TermError(f"invalid triple object: {self.object!r}")

    def __repr__(self) -> str:
        return f"({self.subject!r} {self.predicate!r} {self.object!r})"


def integer(value: int) -> Literal:
    return Literal(str(int(value)), Datatype.INTEGER)


def double(value: float) -> Literal:
    return Literal(repr(float(value)), Datatype.FLOAT)


def boolean(value: bool) -> Literal:
    return Literal("true" if value else "false", Datatype.BOOLEAN)


def string(value: str) -> Literal:
    return Literal(value, Datatype.STRING)


def sort_key(term: Optional[Term]) -> tuple:
    """Total, deterministic order over terms: blanks, IRIs, then literals
    (numerics by value before other literals by datatype and lexical form).
    Used by ORDER BY and anywhere a stable term order is needed."""
    if term is None:
        return (0, 0, 0.0, "", "")
    if isinstance(term, BlankNode):
        return (1, 0, 0.0, term.label, "")
    if isinstance(term, Iri):
        return (2, 0, 0.0, term.value, "")
    if term.is_numeric():
        return (3, 0, float(term.value()), term.lexical, "")
    return (3, 1 + list(Datatype).index(term.datatype), 0.0, term.lexical,
            term.language or "")
