"""Query abstract syntax: basic graph patterns, filter expression trees
and solution modifiers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from ..terms import Iri, Term, TermError, Variable


class QueryScopeError(ValueError):
    """A projected, filtered or ordered variable is not bound by any
    triple pattern."""


@dataclass(frozen=True)
class TriplePattern:
    subject: Union[Term, Variable]
    predicate: Union[Term, Variable]
    object: Union[Term, Variable]

    def __post_init__(self) -> None:
        if not isinstance(self.predicate, (Iri, Variable)):
            raise TermError(
                f"pattern predicate must be an IRI or variable: "
                f"{self.predicate!r}")

    def variables(self) -> Iterator[Variable]:
        for part in (self.subject, self.predicate, self.object):
            if isinstance(part, Variable):
                yield part


@dataclass(frozen=True)
class Comparison:
    op: str  # < <= > >= = !=
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class Contains:
    haystack: "Expr"
    needle: "Expr"


@dataclass(frozen=True)
class Str:
    operand: "Expr"


FilterExpr = Union[Comparison, And, Or, Not, Contains, Str]
Expr = Union[FilterExpr, Variable, Term]


def expr_variables(expr: Expr) -> Iterator[Variable]:
    if isinstance(expr, Variable):
        yield expr
    elif isinstance(expr, Comparison):
        yield from expr_variables(expr.left)
        yield from expr_variables(expr.right)
    elif isinstance(expr, (And, Or)):
        yield from expr_variables(expr.left)
        yield from expr_variables(expr.right)
    elif isinstance(expr, Not):
        yield from expr_variables(expr.operand)
    elif isinstance(expr, Contains):
        yield from expr_variables(expr.haystack)
        yield from expr_variables(expr.needle)
    elif isinstance(expr, Str):
        yield from expr_variables(expr.operand)


@dataclass
class QueryAst:
    prefixes: dict[str, str] = field(default_factory=dict)
    projection: Optional[list[Variable]] = None  # None means SELECT *
    patterns: list[TriplePattern] = field(default_factory=list)
    filters: list[FilterExpr] = field(default_factory=list)
    distinct: bool = False
    order_by: list[tuple[Variable, str]] = field(default_factory=list)
    limit: Optional[int] = None
    offset: Optional[int] = None

    def in_scope(self) -> set[Variable]:
        return {v for p in self.patterns for v in p.variables()}


def validate_query(query: QueryAst) -> QueryAst:
    scope = query.in_scope()
    for v in query.projection or ():
        if v not in scope:
            raise QueryScopeError(f"projected variable ?{v.name} is unbound")
    for expr in query.filters:
        for v in expr_variables(expr):
            if v not in scope:
                raise QueryScopeError(
                    f"filter variable ?{v.name} is unbound")
    for v, direction in query.order_by:
        if v not in scope:
            raise QueryScopeError(f"order variable ?{v.name} is unbound")
        if direction not in ("asc", "desc"):
            raise QueryScopeError(f"bad order direction {direction!r}")
    if query.limit is not None and query.limit < 0:
        raise QueryScopeError("LIMIT must be non-negative")
    if query.offset is not None and query.offset < 0:
        raise QueryScopeError("OFFSET must be non-negative")
    return query
