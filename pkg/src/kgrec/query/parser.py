"""SELECT query parser for the dialect used by the constraint compiler:
PREFIX declarations, a basic graph pattern with FILTERs, and the
DISTINCT / ORDER BY / LIMIT / OFFSET modifiers. Keywords are
case-insensitive."""

from __future__ import annotations

import re
from typing import Optional

from ..terms import (
    DATATYPE_BY_IRI,
    Datatype,
    Iri,
    Literal,
    TermError,
    Variable,
)
from ..vocab import RDF_TYPE
from .ast import (
    And,
    Comparison,
    Contains,
    Expr,
    Not,
    Or,
    QueryAst,
    Str,
    TriplePattern,
    validate_query,
)


class QueryParseError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_KEYWORDS = {
    "PREFIX", "SELECT", "WHERE", "FILTER", "DISTINCT",
    "ORDER", "BY", "ASC", "DESC", "LIMIT", "OFFSET",
}
_FUNCTIONS = {"CONTAINS", "STR"}

_TOKEN_RE = re.compile(
    r"""
      (?P<WS>\s+|\#[^\n]*)
    | (?P<IRIREF><[^<>\s]*>)
    | (?P<VAR>\?[A-Za-z][A-Za-z0-9]*)
    | (?P<STRING>"(?:[^"\\]|\\.)*")
    | (?P<DECIMAL>[+-]?(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?)
    | (?P<INTEGER>[+-]?\d+)
    | (?P<PNAME>(?:[A-Za-z_][\w\-]*)?:(?:[\w\-]+(?:\.[\w\-]+)*)?)
    | (?P<NAME>[A-Za-z_][\w\-]*)
    | (?P<PUNCT><=|>=|!=|&&|\|\||\^\^|[{}().,*<>=!;])
    """,
    re.X,
)

_ECHAR = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "\\": "\\"}


def _unescape(raw: str) -> str:
    out = []
    i = 0
    while i < len(raw):
        ch = raw[i]
        if ch == "\\" and i + 1 < len(raw):
            nxt = raw[i + 1]
            if nxt in _ECHAR:
                out.append(_ECHAR[nxt])
                i += 2
                continue
            if nxt == "u" and i + 5 < len(raw):
                out.append(chr(int(raw[i + 2:i + 6], 16)))
                i += 6
                continue
        out.append(ch)
        i += 1
    return "".join(out)


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int) -> None:
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise QueryParseError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        raw = m.group()
        if kind != "WS":
            tokens.append(_Token(kind, raw, line, m.start() - line_start + 1))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + raw.rfind("\n") + 1
        pos = m.end()
    tokens.append(_Token("EOF", "", line, pos - line_start + 1))
    return tokens


class _QueryParser:
    def __init__(self, text: str) -> None:
        self.tokens = _tokenize(text)
        self.index = 0
        self.query = QueryAst()

    # -- token helpers ----------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def next(self) -> _Token:
        token = self.tokens[self.index]
        if token.kind != "EOF":
            self.index += 1
        return token

    def error(self, message: str, token: Optional[_Token] = None) -> QueryParseError:
        token = token or self.peek()
        return QueryParseError(message, token.line, token.col)

    def at_keyword(self, word: str) -> bool:
        t = self.peek()
        return t.kind == "NAME" and t.text.upper() == word

    def expect_keyword(self, word: str) -> None:
        if not self.at_keyword(word):
            raise self.error(f"expected {word}")
        self.next()

    def expect_punct(self, symbol: str) -> None:
        t = self.peek()
        if t.kind != "PUNCT" or t.text != symbol:
            raise self.error(f"expected {symbol!r}")
        self.next()

    def at_punct(self, symbol: str) -> bool:
        t = self.peek()
        return t.kind == "PUNCT" and t.text == symbol

    # -- grammar ----------------------------------------------------------

    def parse(self) -> QueryAst:
        while self.at_keyword("PREFIX"):
            self.next()
            self._parse_prefix_decl()
        self.expect_keyword("SELECT")
        if self.at_keyword("DISTINCT"):
            self.next()
            self.query.distinct = True
        self._parse_projection()
        self.expect_keyword("WHERE")
        self.expect_punct("{")
        self._parse_group()
        self._parse_modifiers()
        if self.peek().kind != "EOF":
            raise self.error(f"unexpected trailing token {self.peek().text!r}")
        try:
            return validate_query(self.query)
        except TermError as exc:
            raise self.error(str(exc)) from exc

    def _parse_prefix_decl(self) -> None:
        t = self.next()
        if t.kind != "PNAME" or not t.text.endswith(":"):
            raise self.error("expected prefix label ending in ':'", t)
        label = t.text[:-1]
        iri = self.next()
        if iri.kind != "IRIREF":
            raise self.error("expected namespace IRI", iri)
        self.query.prefixes[label] = iri.text[1:-1]

    def _parse_projection(self) -> None:
        if self.at_punct("*"):
            self.next()
            self.query.projection = None
            return
        names: list[Variable] = []
        while self.peek().kind == "VAR":
            names.append(Variable(self.next().text[1:]))
        if not names:
            raise self.error("expected '*' or at least one ?variable")
        self.query.projection = names

    def _parse_group(self) -> None:
        while True:
            if self.at_punct("}"):
                self.next()
                return
            if self.peek().kind == "EOF":
                raise self.error("unterminated WHERE group")
            if self.at_keyword("FILTER"):
                self.next()
                self.query.filters.append(self._parse_constraint())
                if self.at_punct("."):
                    self.next()
                continue
            pattern = self._parse_triple_pattern()
            self.query.patterns.append(pattern)
            if self.at_punct("."):
                self.next()
            elif not self.at_punct("}"):
                raise self.error("expected '.' after triple pattern")

    def _parse_triple_pattern(self) -> TriplePattern:
        s = self._parse_term(allow_literal=False)
        p = self._parse_term(allow_literal=False, predicate=True)
        o = self._parse_term(allow_literal=True)
        try:
            return TriplePattern(s, p, o)
        except TermError as exc:
            raise self.error(str(exc)) from exc

    def _parse_term(self, allow_literal: bool, predicate: bool = False):
        t = self.peek()
        if t.kind == "VAR":
            self.next()
            return Variable(t.text[1:])
        if t.kind == "IRIREF":
            self.next()
            return Iri(t.text[1:-1])
        if t.kind == "PNAME":
            self.next()
            return Iri(self._resolve_pname(t))
        if t.kind == "NAME" and t.text == "a" and predicate:
            self.next()
            return Iri(RDF_TYPE)
        if allow_literal and t.kind == "STRING":
            return self._parse_literal()
        if allow_literal and t.kind in ("INTEGER", "DECIMAL"):
            self.next()
            datatype = Datatype.INTEGER if t.kind == "INTEGER" else Datatype.FLOAT
            return Literal(t.text, datatype)
        raise self.error(f"unexpected token {t.text!r} in triple pattern", t)

    def _resolve_pname(self, token: _Token) -> str:
        prefix, _, local = token.text.partition(":")
        if prefix not in self.query.prefixes:
            raise self.error(f"undeclared prefix {prefix!r}", token)
        return self.query.prefixes[prefix] + local

    def _parse_literal(self) -> Literal:
        t = self.next()
        lexical = _unescape(t.text[1:-1])
        if self.at_punct("^^"):
            self.next()
            dt_token = self.next()
            if dt_token.kind == "IRIREF":
                iri = dt_token.text[1:-1]
            elif dt_token.kind == "PNAME":
                iri = self._resolve_pname(dt_token)
            else:
                raise self.error("expected datatype after ^^", dt_token)
            datatype = DATATYPE_BY_IRI.get(iri)
            if datatype is None:
                raise self.error(f"unsupported datatype {iri!r}", dt_token)
            try:
                return Literal(lexical, datatype)
            except TermError as exc:
                raise self.error(str(exc), dt_token) from exc
        return Literal(lexical)

    # -- filter expressions -------------------------------------------------

    def _parse_constraint(self) -> Expr:
        if self.at_punct("("):
            self.next()
            expr = self._parse_or()
            self.expect_punct(")")
            return expr
        if self.peek().kind == "NAME" and self.peek().text.upper() in _FUNCTIONS:
            return self._parse_function()
        raise self.error("expected '(' or a function call after FILTER")

    def _parse_or(self) -> Expr:
        left = self._parse_and()
        while self.at_punct("||"):
            self.next()
            left = Or(left, self._parse_and())
        return left

    def _parse_and(self) -> Expr:
        left = self._parse_unary()
        while self.at_punct("&&"):
            self.next()
            left = And(left, self._parse_unary())
        return left

    def _parse_unary(self) -> Expr:
        if self.at_punct("!"):
            self.next()
            return Not(self._parse_unary())
        return self._parse_relational()

    def _parse_relational(self) -> Expr:
        left = self._parse_primary()
        t = self.peek()
        if t.kind == "PUNCT" and t.text in ("<", "<=", ">", ">=", "=", "!="):
            self.next()
            right = self._parse_primary()
            return Comparison(t.text, left, right)
        return left

    def _parse_primary(self) -> Expr:
        t = self.peek()
        if t.kind == "PUNCT" and t.text == "(":
            self.next()
            expr = self._parse_or()
            self.expect_punct(")")
            return expr
        if t.kind == "NAME" and t.text.upper() in _FUNCTIONS:
            return self._parse_function()
        if t.kind == "VAR":
            self.next()
            return Variable(t.text[1:])
        if t.kind == "STRING":
            return self._parse_literal()
        if t.kind in ("INTEGER", "DECIMAL"):
            self.next()
            datatype = Datatype.INTEGER if t.kind == "INTEGER" else Datatype.FLOAT
            return Literal(t.text, datatype)
        if t.kind == "NAME" and t.text in ("true", "false"):
            self.next()
            return Literal(t.text, Datatype.BOOLEAN)
        if t.kind == "IRIREF":
            self.next()
            return Iri(t.text[1:-1])
        if t.kind == "PNAME":
            self.next()
            return Iri(self._resolve_pname(t))
        raise self.error(f"unexpected token {t.text!r} in expression", t)

    def _parse_function(self) -> Expr:
        name = self.next().text.upper()
        self.expect_punct("(")
        args = [self._parse_or()]
        while self.at_punct(","):
            self.next()
            args.append(self._parse_or())
        self.expect_punct(")")
        if name == "CONTAINS":
            if len(args) != 2:
                raise self.error("contains() takes two arguments")
            return Contains(args[0], args[1])
        if len(args) != 1:
            raise self.error("str() takes one argument")
        return Str(args[0])

    # -- solution modifiers --------------------------------------------------

    def _parse_modifiers(self) -> None:
        while True:
            if self.at_keyword("ORDER"):
                self.next()
                self.expect_keyword("BY")
                self._parse_order_conditions()
            elif self.at_keyword("LIMIT"):
                self.next()
                self.query.limit = self._parse_count("LIMIT")
            elif self.at_keyword("OFFSET"):
                self.next()
                self.query.offset = self._parse_count("OFFSET")
            else:
                return

    def _parse_order_conditions(self) -> None:
        found = False
        while True:
            direction = "asc"
            if self.at_keyword("ASC") or self.at_keyword("DESC"):
                direction = self.next().text.lower()
                self.expect_punct("(")
                var_token = self.next()
                if var_token.kind != "VAR":
                    raise self.error("expected ?variable", var_token)
                self.expect_punct(")")
                self.query.order_by.append(
                    (Variable(var_token.text[1:]), direction))
                found = True
            elif self.peek().kind == "VAR":
                self.query.order_by.append(
                    (Variable(self.next().text[1:]), direction))
                found = True
            else:
                if not found:
                    raise self.error("expected order condition after ORDER BY")
                return

    def _parse_count(self, keyword: str) -> int:
        t = self.next()
        if t.kind != "INTEGER":
            raise self.error(f"expected integer after {keyword}", t)
        value = int(t.text)
        if value < 0:
            raise self.error(f"{keyword} must be non-negative", t)
        return value


def parse_query(text: str) -> QueryAst:
    return _QueryParser(text).parse()
