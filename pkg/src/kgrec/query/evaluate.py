"""Query evaluation over a frozen graph.

Solutions are plain dicts from variable name to term. Join order is chosen
greedily by index cardinality, which never changes the solution multiset
(basic graph patterns are natural joins). Filter evaluation follows the
effective-boolean-value convention: any type error or unbound variable
drops the row instead of aborting the query.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence, Union

from ..graph import Graph
from ..terms import (
    BlankNode,
    Datatype,
    Iri,
    Literal,
    Term,
    Variable,
    sort_key,
)
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
    expr_variables,
)

Solution = dict[str, Term]


class _FilterError(Exception):
    """Internal: a filter expression could not be evaluated for a row."""


# ---------------------------------------------------------------------------
# Basic graph pattern join
# ---------------------------------------------------------------------------


def _ground_estimate(graph: Graph, pattern: TriplePattern) -> int:
    parts = [
        None if isinstance(p, Variable) else p
        for p in (pattern.subject, pattern.predicate, pattern.object)
    ]
    return graph.count(*parts)


def _order_patterns(
    graph: Graph, patterns: Sequence[TriplePattern]
) -> list[TriplePattern]:
    remaining = list(enumerate(patterns))
    ordered: list[TriplePattern] = []
    bound: set[str] = set()
    while remaining:
        best_at = 0
        best_key: Optional[tuple] = None
        for at, (original_index, pattern) in enumerate(remaining):
            names = {v.name for v in pattern.variables()}
            disconnected = 1 if (bound and names and not (names & bound)) else 0
            key = (disconnected, _ground_estimate(graph, pattern),
                   len(names - bound), original_index)
            if best_key is None or key < best_key:
                best_key = key
                best_at = at
        original_index, pattern = remaining.pop(best_at)
        ordered.append(pattern)
        bound |= {v.name for v in pattern.variables()}
    return ordered


def _match(
    graph: Graph, pattern: TriplePattern, binding: Solution
) -> Iterator[Solution]:
    s = pattern.subject
    p = pattern.predicate
    o = pattern.object
    if isinstance(s, Variable):
        s = binding.get(s.name, s)
    if isinstance(p, Variable):
        p = binding.get(p.name, p)
    if isinstance(o, Variable):
        o = binding.get(o.name, o)
    s_name = s.name if isinstance(s, Variable) else None
    p_name = p.name if isinstance(p, Variable) else None
    o_name = o.name if isinstance(o, Variable) else None
    for ts, tp, to in graph.match_values(
        None if s_name else s, None if p_name else p, None if o_name else o
    ):
        extended = dict(binding)
        if s_name:
            extended[s_name] = ts
        if p_name:
            seen = extended.get(p_name)
            if seen is None:
                extended[p_name] = tp
            elif seen != tp:
                continue
        if o_name:
            seen = extended.get(o_name)
            if seen is None:
                extended[o_name] = to
            elif seen != to:
                continue
        yield extended


def eval_bgp(
    graph: Graph,
    patterns: Sequence[TriplePattern],
    reorder: bool = True,
) -> Iterator[Solution]:
    """The multiset of bindings making every pattern a graph triple.

    An empty pattern list yields the single empty solution (join identity).
    """
    ordered = _order_patterns(graph, patterns) if reorder else list(patterns)

    def step(index: int, binding: Solution) -> Iterator[Solution]:
        if index == len(ordered):
            yield binding
            return
        for extended in _match(graph, ordered[index], binding):
            yield from step(index + 1, extended)

    yield from step(0, {})


# ---------------------------------------------------------------------------
# Filters
# ---------------------------------------------------------------------------

_NUMERIC = (Datatype.INTEGER, Datatype.FLOAT)


def _eval_expr(
    expr: Expr, solution: Solution, case_sensitive: bool
) -> Union[Term, bool]:
    if isinstance(expr, Variable):
        value = solution.get(expr.name)
        if value is None:
            raise _FilterError(f"unbound variable ?{expr.name}")
        return value
    if isinstance(expr, (Iri, Literal, BlankNode)):
        return expr
    if isinstance(expr, Comparison):
        return _compare(
            expr.op,
            _eval_expr(expr.left, solution, case_sensitive),
            _eval_expr(expr.right, solution, case_sensitive),
        )
    if isinstance(expr, And):
        return (_ebv(_eval_expr(expr.left, solution, case_sensitive))
                and _ebv(_eval_expr(expr.right, solution, case_sensitive)))
    if isinstance(expr, Or):
        return (_ebv(_eval_expr(expr.left, solution, case_sensitive))
                or _ebv(_eval_expr(expr.right, solution, case_sensitive)))
    if isinstance(expr, Not):
        return not _ebv(_eval_expr(expr.operand, solution, case_sensitive))
    if isinstance(expr, Str):
        inner = _eval_expr(expr.operand, solution, case_sensitive)
        if isinstance(inner, Iri):
            return Literal(inner.value)
        if isinstance(inner, Literal):
            return Literal(inner.lexical)
        raise _FilterError(f"str() not defined for {inner!r}")
    if isinstance(expr, Contains):
        hay = _string_value(_eval_expr(expr.haystack, solution, case_sensitive))
        needle = _string_value(_eval_expr(expr.needle, solution, case_sensitive))
        if case_sensitive:
            return needle in hay
        return needle.casefold() in hay.casefold()
    raise _FilterError(f"unknown expression {expr!r}")


def _string_value(value: Union[Term, bool]) -> str:
    if isinstance(value, Literal) and value.datatype is Datatype.STRING:
        return value.lexical
    raise _FilterError(f"expected a string, got {value!r}")


def _ebv(value: Union[Term, bool]) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, Literal):
        if value.datatype is Datatype.BOOLEAN:
            return bool(value.value())
        if value.is_numeric():
            return float(value.value()) != 0.0
        if value.datatype is Datatype.STRING:
            return len(value.lexical) > 0
    raise _FilterError(f"no effective boolean value for {value!r}")


def _compare(op: str, left: Union[Term, bool], right: Union[Term, bool]) -> bool:
    if isinstance(left, bool) or isinstance(right, bool):
        raise _FilterError("cannot compare boolean expression results")
    if op in ("=", "!="):
        return _equal(left, right) if op == "=" else not _equal(left, right)
    if (isinstance(left, Literal) and isinstance(right, Literal)):
        if left.is_numeric() and right.is_numeric():
            lv, rv = float(left.value()), float(right.value())
        elif (left.datatype is Datatype.DATETIME
              and right.datatype is Datatype.DATETIME):
            lv, rv = left.value(), right.value()
        else:
            raise _FilterError(
                f"{op} not defined for {left!r} and {right!r}")
        if op == "<":
            return lv < rv
        if op == "<=":
            return lv <= rv
        if op == ">":
            return lv > rv
        return lv >= rv
    raise _FilterError(f"{op} not defined for {left!r} and {right!r}")


def _equal(left: Union[Term, bool], right: Union[Term, bool]) -> bool:
    if isinstance(left, Literal) and isinstance(right, Literal):
        if left.is_numeric() and right.is_numeric():
            return float(left.value()) == float(right.value())
        if left.datatype is not right.datatype:
            return False
        if left.datatype is Datatype.STRING:
            return (left.lexical == right.lexical
                    and left.language == right.language)
        return left.value() == right.value()
    return left == right  # IRIs, blank nodes, or mixed kinds (never equal)


def eval_filter(
    expr: Expr, solution: Solution, case_sensitive_contains: bool = False
) -> bool:
    """Keep/drop decision for one solution; errors drop."""
    try:
        return _ebv(_eval_expr(expr, solution, case_sensitive_contains))
    except _FilterError:
        return False


# ---------------------------------------------------------------------------
# Solution modifiers and the full pipeline
# ---------------------------------------------------------------------------


def apply_modifiers(
    solutions: Iterable[Solution],
    distinct: bool = False,
    order_by: Sequence[tuple[Variable, str]] = (),
    limit: Optional[int] = None,
    offset: Optional[int] = None,
) -> list[Solution]:
    """ORDER BY, then DISTINCT (on the full binding), then OFFSET, then
    LIMIT. Sorting is stable, so ties keep evaluation order."""
    out = list(solutions)
    for variable, direction in reversed(list(order_by)):
        out.sort(
            key=lambda s: sort_key(s.get(variable.name)),
            reverse=(direction == "desc"),
        )
    if distinct:
        seen: set = set()
        unique = []
        for solution in out:
            fingerprint = tuple(sorted(solution.items(), key=lambda kv: kv[0]))
            if fingerprint not in seen:
                seen.add(fingerprint)
                unique.append(solution)
        out = unique
    if offset:
        out = out[offset:]
    if limit is not None:
        out = out[:limit]
    return out


def solution_stream(
    graph: Graph, query: QueryAst, case_sensitive_contains: bool = False
) -> Iterator[Solution]:
    """Filtered solutions before modifiers, streamed lazily (consistency
    checks can stop at the first row).

    Filters are pushed down to the first join position where all their
    variables are bound; since filters are conjunctive and row-local this
    prunes branches without changing the result multiset.
    """
    ordered = _order_patterns(graph, query.patterns)
    attached: list[list[Expr]] = [[] for _ in ordered]
    trailing: list[Expr] = []
    bound: set[str] = set()
    remaining = list(query.filters)
    for index, pattern in enumerate(ordered):
        bound |= {v.name for v in pattern.variables()}
        still = []
        for f in remaining:
            if {v.name for v in expr_variables(f)} <= bound:
                attached[index].append(f)
            else:
                still.append(f)
        remaining = still
    trailing = remaining  # unbound-variable filters: evaluated last, drop rows

    def step(index: int, binding: Solution) -> Iterator[Solution]:
        if index == len(ordered):
            if all(eval_filter(f, binding, case_sensitive_contains)
                   for f in trailing):
                yield binding
            return
        for extended in _match(graph, ordered[index], binding):
            if all(eval_filter(f, extended, case_sensitive_contains)
                   for f in attached[index]):
                yield from step(index + 1, extended)

    yield from step(0, {})


def evaluate(
    graph: Graph, query: QueryAst, case_sensitive_contains: bool = False
) -> list[Solution]:
    """Full pipeline: match, filter, modifiers, projection."""
    solutions = apply_modifiers(
        solution_stream(graph, query, case_sensitive_contains),
        distinct=query.distinct,
        order_by=query.order_by,
        limit=query.limit,
        offset=query.offset,
    )
    if query.projection is None:
        return solutions
    names = [v.name for v in query.projection]
    return [{name: s[name] for name in names if name in s} for s in solutions]
