"""The recommendation task: user variables, item variables, and the
filter-constraint catalog that compiles preferences into an executable
query.

Knowledge constraints live in the rule engine and are materialized into
the graph before solving; the two constraint classes never mix (removing
filter constraints never requires re-running saturation).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional

from . import vocab
from .graph import Graph
from .profiles import PreferenceProfile
from .query.ast import (
    Comparison,
    Contains,
    Expr,
    Or,
    QueryAst,
    Str,
    TriplePattern,
)
from .query.evaluate import evaluate, solution_stream
from .rules import RuleSet
from .terms import Datatype, Iri, Literal, Term, Variable, integer, sort_key

ITEM_VARIABLES = (
    "name", "price", "bodyType", "seats", "modelYear", "brand", "mileage",
    "color",
)

# user variable -> (catalog code, comparator); catalog order is fixed
CONSTRAINT_CATALOG = {
    "Price": ("C_F1", "le"),
    "Mileage": ("C_F2", "lt"),
    "Seats": ("C_F3", "eq"),
    "Color": ("C_F4", "one-of-contains"),
    "Brand": ("C_F5", "contains"),
    "VehicleType": ("C_F6", "one-of"),
}


class ConstraintError(ValueError):
    pass


@dataclass(frozen=True)
class FilterConstraint:
    name: str        # the source user variable; diagnosis sets use these
    code: str        # catalog code (C_F1..)
    comparator: str
    value: Any
    rank: int


@dataclass
class RecommendationTask:
    profile: PreferenceProfile
    filters: list[FilterConstraint]
    kb: Optional[RuleSet] = None

    def constraint(self, name: str) -> FilterConstraint:
        for c in self.filters:
            if c.name == name:
                return c
        raise ConstraintError(f"no filter constraint named {name!r}")

    def constraint_names(self) -> list[str]:
        return [c.name for c in self.filters]


@dataclass
class Recommendation:
    item: Iri
    attributes: dict[str, Any]


def derive_constraints(profile: PreferenceProfile) -> list[FilterConstraint]:
    """One filter constraint per assigned user variable, in catalog order.

    The Profile variable contributes no filter: it only feeds rule-based
    deductions.
    """
    constraints = []
    for variable, (code, comparator) in CONSTRAINT_CATALOG.items():
        if variable not in profile.assignments:
            continue
        value = profile.assignments[variable]
        if variable == "Color":
            value = tuple(value)
        elif variable == "VehicleType":
            value = (value,) if isinstance(value, str) else tuple(value)
        constraints.append(
            FilterConstraint(variable, code, comparator, value,
                             profile.rank(variable)))
    return constraints


def build_task(
    profile: PreferenceProfile, ruleset: Optional[RuleSet] = None
) -> RecommendationTask:
    return RecommendationTask(profile, derive_constraints(profile), ruleset)


# ---------------------------------------------------------------------------
# Compilation to a query
# ---------------------------------------------------------------------------

_AUTO = Variable("auto")


def _number_literal(value: Any) -> Literal:
    if isinstance(value, int):
        return integer(value)
    return Literal(repr(float(value)), Datatype.FLOAT)


def compile_query(
    task: RecommendationTask,
    active: Optional[Iterable[FilterConstraint]] = None,
    top_n: Optional[int] = None,
) -> QueryAst:
    """Build the item-selection query: one rdf:type pattern for the item,
    plus each active constraint's patterns and (where needed) one FILTER,
    mirroring the shape of the hand-written listing query."""
    if active is None:
        active = task.filters
    active_names = {c.name for c in active}
    unknown = active_names - set(task.constraint_names())
    if unknown:
        raise ConstraintError(
            f"active constraints not in the task: {sorted(unknown)}")

    query = QueryAst(projection=[_AUTO], limit=top_n)
    query.patterns.append(
        TriplePattern(_AUTO, Iri(vocab.RDF_TYPE), Iri(vocab.VEHICLE_CLASS)))

    for constraint in task.filters:
        if constraint.name not in active_names:
            continue
        _compile_constraint(constraint, query)
    return query


def _or_chain(parts: list[Expr]) -> Expr:
    expr = parts[0]
    for part in parts[1:]:
        expr = Or(expr, part)
    return expr


def _compile_constraint(constraint: FilterConstraint, query: QueryAst) -> None:
    name = constraint.name
    if name == "Price":
        evaluation = Variable("evaluation")
        price = Variable("price")
        query.patterns.append(
            TriplePattern(_AUTO, Iri(vocab.VALUATION), evaluation))
        query.patterns.append(
            TriplePattern(evaluation, Iri(vocab.HAS_CURRENCY_VALUE), price))
        query.filters.append(
            Comparison("<=", price, _number_literal(constraint.value)))
    elif name == "Mileage":
        mileage = Variable("mileage")
        mileage_value = Variable("mileageValue")
        query.patterns.append(
            TriplePattern(_AUTO, Iri(vocab.MILEAGE_FROM_ODOMETER), mileage))
        query.patterns.append(
            TriplePattern(mileage, Iri(vocab.HAS_VALUE_FLOAT), mileage_value))
        # strict bound: the item's mileage must be lower than the maximum
        query.filters.append(
            Comparison("<", mileage_value, _number_literal(constraint.value)))
    elif name == "Seats":
        seats = Variable("seats")
        query.patterns.append(
            TriplePattern(_AUTO, Iri(vocab.SEATING_CAPACITY), seats))
        query.patterns.append(
            TriplePattern(seats, Iri(vocab.HAS_VALUE_INT),
                          integer(constraint.value)))
    elif name == "Color":
        color = Variable("color")
        query.patterns.append(TriplePattern(_AUTO, Iri(vocab.COLOR), color))
        query.filters.append(_or_chain(
            [Contains(color, Literal(token)) for token in constraint.value]))
    elif name == "Brand":
        brand = Variable("brand")
        query.patterns.append(
            TriplePattern(_AUTO, Iri(vocab.HAS_MANUFACTURER), brand))
        query.filters.append(
            Contains(Str(brand), Literal(constraint.value)))
    elif name == "VehicleType":
        iris = [Iri(vocab.BODY_STYLE_IRIS[token]) for token in constraint.value]
        if len(iris) == 1:
            query.patterns.append(
                TriplePattern(_AUTO, Iri(vocab.BODY_STYLE), iris[0]))
        else:
            body = Variable("body")
            query.patterns.append(
                TriplePattern(_AUTO, Iri(vocab.BODY_STYLE), body))
            query.filters.append(_or_chain(
                [Comparison("=", body, iri) for iri in iris]))
    else:
        raise ConstraintError(f"no compilation for constraint {name!r}")


# ---------------------------------------------------------------------------
# Attribute expansion and solving
# ---------------------------------------------------------------------------


def _first_term(graph: Graph, subject: Term, predicate: str) -> Optional[Term]:
    values = graph.objects(subject, Iri(predicate))
    if not values:
        return None
    if len(values) == 1:
        return values[0]
    return min(values, key=sort_key)


def _indirect_value(
    graph: Graph, subject: Term, predicate: str, value_predicate: str
) -> Optional[Any]:
    node = _first_term(graph, subject, predicate)
    if node is None:
        return None
    value = _first_term(graph, node, value_predicate)
    if isinstance(value, Literal):
        return value.value()
    return None


def item_attributes(graph: Graph, item: Iri) -> dict[str, Any]:
    """The full item-variable binding for one vehicle."""
    name = _first_term(graph, item, vocab.NAME)
    color = _first_term(graph, item, vocab.COLOR)
    body = _first_term(graph, item, vocab.BODY_STYLE)
    brand = _first_term(graph, item, vocab.HAS_MANUFACTURER)
    year = _first_term(graph, item, vocab.MODEL_YEAR)
    return {
        "name": name.lexical if isinstance(name, Literal) else None,
        "price": _indirect_value(
            graph, item, vocab.VALUATION, vocab.HAS_CURRENCY_VALUE),
        "bodyType": (
            vocab.BODY_STYLE_TOKENS.get(body.value, vocab.local_name(body.value))
            if isinstance(body, Iri) else None),
        "seats": _indirect_value(
            graph, item, vocab.SEATING_CAPACITY, vocab.HAS_VALUE_INT),
        "modelYear": year.value() if isinstance(year, Literal) else None,
        "brand": vocab.local_name(brand.value) if isinstance(brand, Iri) else None,
        "mileage": _indirect_value(
            graph, item, vocab.MILEAGE_FROM_ODOMETER, vocab.HAS_VALUE_FLOAT),
        "color": color.lexical if isinstance(color, Literal) else None,
    }


def default_ranking(rec: Recommendation) -> tuple:
    """Cheapest first, ties broken by item IRI."""
    price = rec.attributes.get("price")
    return (price if price is not None else float("inf"), rec.item.value)


def solve(
    task: RecommendationTask,
    graph: Graph,
    active: Optional[Iterable[FilterConstraint]] = None,
    top_n: Optional[int] = None,
    case_sensitive_contains: bool = False,
    ranking: Callable[[Recommendation], Any] = default_ranking,
) -> list[Recommendation]:
    """Consistent items for the active constraints, ranked, truncated to
    top_n. An empty list signals inconsistency."""
    query = compile_query(task, active, top_n=None)
    solutions = evaluate(graph, query, case_sensitive_contains)
    items: dict[Iri, None] = {}
    for solution in solutions:
        item = solution.get("auto")
        if isinstance(item, Iri):
            items.setdefault(item, None)
    recommendations = [
        Recommendation(item, item_attributes(graph, item)) for item in items
    ]
    recommendations.sort(key=ranking)
    if top_n is not None:
        recommendations = recommendations[:top_n]
    return recommendations


def count_solutions(
    task: RecommendationTask,
    graph: Graph,
    active: Optional[Iterable[FilterConstraint]] = None,
    case_sensitive_contains: bool = False,
) -> int:
    """Number of distinct consistent items (uncapped)."""
    query = compile_query(task, active, top_n=None)
    items = set()
    for solution in solution_stream(graph, query, case_sensitive_contains):
        item = solution.get("auto")
        if item is not None:
            items.add(item)
    return len(items)


def is_consistent(
    task: RecommendationTask,
    graph: Graph,
    active: Optional[Iterable[FilterConstraint]] = None,
    case_sensitive_contains: bool = False,
) -> bool:
    """True iff at least one item satisfies every active constraint."""
    query = compile_query(task, active, top_n=None)
    stream = solution_stream(graph, query, case_sensitive_contains)
    return next(iter(stream), None) is not None


def satisfies(
    graph: Graph,
    item: Iri,
    constraint: FilterConstraint,
    case_sensitive_contains: bool = False,
) -> bool:
    """Direct re-check of one constraint against the graph, bypassing the
    query engine (the soundness oracle)."""

    def fold(text: str) -> str:
        return text if case_sensitive_contains else text.casefold()

    if constraint.name == "Price":
        values = _all_indirect(graph, item, vocab.VALUATION,
                               vocab.HAS_CURRENCY_VALUE)
        return any(v <= constraint.value for v in values)
    if constraint.name == "Mileage":
        values = _all_indirect(graph, item, vocab.MILEAGE_FROM_ODOMETER,
                               vocab.HAS_VALUE_FLOAT)
        return any(v < constraint.value for v in values)
    if constraint.name == "Seats":
        values = _all_indirect(graph, item, vocab.SEATING_CAPACITY,
                               vocab.HAS_VALUE_INT)
        return any(v == constraint.value for v in values)
    if constraint.name == "Color":
        colors = [
            t.lexical for t in graph.objects(item, Iri(vocab.COLOR))
            if isinstance(t, Literal)
        ]
        return any(
            fold(token) in fold(color)
            for color in colors for token in constraint.value)
    if constraint.name == "Brand":
        brands = [
            t.value for t in graph.objects(item, Iri(vocab.HAS_MANUFACTURER))
            if isinstance(t, Iri)
        ]
        return any(fold(constraint.value) in fold(brand) for brand in brands)
    if constraint.name == "VehicleType":
        wanted = {vocab.BODY_STYLE_IRIS[token] for token in constraint.value}
        bodies = {
            t.value for t in graph.objects(item, Iri(vocab.BODY_STYLE))
            if isinstance(t, Iri)
        }
        return bool(wanted & bodies)
    raise ConstraintError(f"no direct check for constraint {constraint.name!r}")


def _all_indirect(
    graph: Graph, item: Iri, predicate: str, value_predicate: str
) -> list[Any]:
    out = []
    for node in graph.objects(item, Iri(predicate)):
        for value in graph.objects(node, Iri(value_predicate)):
            if isinstance(value, Literal) and value.is_numeric():
                out.append(value.value())
    return out
