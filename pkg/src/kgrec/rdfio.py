"""Flat-file RDF input/output.

Two input syntaxes are supported: N-Triples (one triple per line) and a
Turtle subset covering @prefix, prefixed names, the `a` keyword, `;`/`,`
abbreviations, typed literals and language tags. Collections, quoted
triples and bare numeric shorthand are intentionally outside the subset.

Output is canonical N-Triples: one line per triple, lines sorted, suitable
for byte-level round-trip comparison.
"""

from __future__ import annotations

from .graph import Graph
from .terms import (
    DATATYPE_BY_IRI,
    BlankNode,
    Datatype,
    Iri,
    Literal,
    Term,
    TermError,
    Triple,
)
from .vocab import RDF_TYPE

_PN_LOCAL_CHARS = set(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_-"
)
_ECHAR = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "\\": "\\", "b": "\b", "f": "\f"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class _Scanner:
    """Character scanner with line/column tracking."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.col)

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def peek2(self) -> str:
        return self.text[self.pos : self.pos + 2]

    def advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def skip_ws(self) -> None:
        while not self.eof():
            ch = self.peek()
            if ch in " \t\r\n":
                self.advance()
            elif ch == "#":
                while not self.eof() and self.peek() != "\n":
                    self.advance()
            else:
                return

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}, found {self.peek()!r}")
        self.advance()

    def read_iriref(self) -> str:
        self.expect("<")
        out = []
        while True:
            if self.eof():
                raise self.error("unterminated IRI")
            ch = self.advance()
            if ch == ">":
                return "".join(out)
            out.append(ch)

    def read_string(self) -> str:
        self.expect('"')
        out = []
        while True:
            if self.eof():
                raise self.error("unterminated string literal")
            ch = self.advance()
            if ch == '"':
                return "".join(out)
            if ch == "\\":
                esc = self.advance() if not self.eof() else ""
                if esc in _ECHAR:
                    out.append(_ECHAR[esc])
                elif esc == "u":
                    out.append(chr(int(self._hex(4), 16)))
                elif esc == "U":
                    out.append(chr(int(self._hex(8), 16)))
                else:
                    raise self.error(f"invalid escape \\{esc}")
            else:
                out.append(ch)

    def _hex(self, n: int) -> str:
        digits = self.text[self.pos : self.pos + n]
        if len(digits) < n or any(d not in "0123456789abcdefABCDEF" for d in digits):
            raise self.error("invalid unicode escape")
        for _ in range(n):
            self.advance()
        return digits

    def read_name(self) -> str:
        """A prefixed-name segment; inner dots allowed, trailing dot is not
        consumed so the statement terminator survives."""
        out = []
        while not self.eof():
            ch = self.peek()
            if ch in _PN_LOCAL_CHARS:
                out.append(self.advance())
            elif ch == "." and len(self.text) > self.pos + 1 and self.text[
                self.pos + 1
            ] in _PN_LOCAL_CHARS:
                out.append(self.advance())
            else:
                break
        return "".join(out)


class _DocumentParser:
    def __init__(self, text: str, turtle: bool) -> None:
        self.sc = _Scanner(text)
        self.turtle = turtle
        self.graph = Graph()

    def parse(self) -> Graph:
        sc = self.sc
        while True:
            sc.skip_ws()
            if sc.eof():
                return self.graph
            if self.turtle and sc.peek() == "@":
                self._parse_prefix()
            else:
                self._parse_statement()

    def _parse_prefix(self) -> None:
        sc = self.sc
        sc.advance()
        keyword = sc.read_name()
        if keyword != "prefix":
            raise sc.error(f"unknown directive @{keyword}")
        sc.skip_ws()
        label = sc.read_name()
        sc.expect(":")
        sc.skip_ws()
        namespace = sc.read_iriref()
        sc.skip_ws()
        sc.expect(".")
        self.graph.prefixes[label] = namespace

    def _parse_statement(self) -> None:
        sc = self.sc
        subject = self._parse_term(position="subject")
        sc.skip_ws()
        while True:
            predicate = self._parse_term(position="predicate")
            sc.skip_ws()
            while True:
                obj = self._parse_term(position="object")
                self._emit(subject, predicate, obj)
                sc.skip_ws()
                if self.turtle and sc.peek() == ",":
                    sc.advance()
                    sc.skip_ws()
                    continue
                break
            if self.turtle and sc.peek() == ";":
                sc.advance()
                sc.skip_ws()
                if sc.peek() == ".":  # dangling semicolon before the dot
                    break
                continue
            break
        sc.expect(".")

    def _emit(self, s: Term, p: Term, o: Term) -> None:
        try:
            self.graph.add(Triple(s, p, o))
        except TermError as exc:
            raise self.sc.error(str(exc)) from exc

    def _parse_term(self, position: str) -> Term:
        sc = self.sc
        ch = sc.peek()
        if ch == "<":
            return Iri(sc.read_iriref())
        if ch == '"':
            return self._parse_literal()
        if sc.peek2() == "_:":
            sc.advance()
            sc.advance()
            label = sc.read_name()
            if not label:
                raise sc.error("empty blank node label")
            return BlankNode(label)
        if self.turtle:
            name = sc.read_name()
            if name == "a" and sc.peek() != ":" and position == "predicate":
                return Iri(RDF_TYPE)
            if sc.peek() == ":":
                sc.advance()
                local = sc.read_name()
                return Iri(self._resolve(name, local))
            raise sc.error(f"unexpected token {name or ch!r} in {position}")
        raise sc.error(f"unexpected character {ch!r} in {position}")

    def _resolve(self, prefix: str, local: str) -> str:
        try:
            return self.graph.prefixes[prefix] + local
        except KeyError:
            raise self.sc.error(f"undeclared prefix {prefix!r}:") from None

    def _parse_literal(self) -> Literal:
        sc = self.sc
        lexical = sc.read_string()
        if sc.peek2() == "^^":
            sc.advance()
            sc.advance()
            if sc.peek() == "<":
                datatype_iri = sc.read_iriref()
            elif self.turtle:
                prefix = sc.read_name()
                sc.expect(":")
                datatype_iri = self._resolve(prefix, sc.read_name())
            else:
                raise sc.error("expected datatype IRI after ^^")
            datatype = DATATYPE_BY_IRI.get(datatype_iri)
            if datatype is None:
                raise sc.error(f"unsupported datatype {datatype_iri!r}")
            try:
                return Literal(lexical, datatype)
            except TermError as exc:
                raise sc.error(str(exc)) from exc
        if sc.peek() == "@":
            sc.advance()
            tag = sc.read_name()
            if not tag:
                raise sc.error("empty language tag")
            return Literal(lexical, Datatype.STRING, language=tag)
        return Literal(lexical)


def parse_ntriples(text: str) -> Graph:
    return _DocumentParser(text, turtle=False).parse()


def parse_turtle(text: str) -> Graph:
    return _DocumentParser(text, turtle=True).parse()


def parse_document(text: str, format: str = "turtle") -> Graph:
    if format in ("ntriples", "nt"):
        return parse_ntriples(text)
    if format in ("turtle", "turtle-subset", "ttl"):
        return parse_turtle(text)
    raise ValueError(f"unknown format {format!r}")


def guess_format(path: str) -> str:
    return "ntriples" if str(path).endswith((".nt", ".ntriples")) else "turtle"


def _escape(text: str) -> str:
    out = text.replace("\\", "\\\\").replace('"', '\\"')
    return out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")


def serialize_term(term: Term) -> str:
    if isinstance(term, Iri):
        return f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    if isinstance(term, Literal):
        base = f'"{_escape(term.lexical)}"'
        if term.language:
            return f"{base}@{term.language}"
        if term.datatype is Datatype.STRING:
            return base
        return f"{base}^^<{term.datatype.iri}>"
    raise TermError(f"not a serializable term: {term!r}")


def serialize_ntriples(graph: Graph) -> str:
    """Canonical form: SPO term order per line, lines sorted."""
    lines = [
        f"{serialize_term(t.subject)} {serialize_term(t.predicate)} "
        f"{serialize_term(t.object)} ."
        for t in graph
    ]
    return "".join(line + "\n" for line in sorted(lines))


def load_path(path: str) -> Graph:
    with open(path, encoding="utf-8") as handle:
        return parse_document(handle.read(), guess_format(path))
