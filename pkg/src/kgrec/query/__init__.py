from .ast import (
    And,
    Comparison,
    Contains,
    FilterExpr,
    Not,
    Or,
    QueryAst,
    QueryScopeError,
    Str,
    TriplePattern,
    validate_query,
)
from .parser import QueryParseError, parse_query
from .evaluate import (
    Solution,
    apply_modifiers,
    eval_bgp,
    eval_filter,
    evaluate,
    solution_stream,
)

__all__ = [
    "And",
    "Comparison",
    "Contains",
    "FilterExpr",
    "Not",
    "Or",
    "QueryAst",
    "QueryParseError",
    "QueryScopeError",
    "Solution",
    "Str",
    "TriplePattern",
    "apply_modifiers",
    "eval_bgp",
    "eval_filter",
    "evaluate",
    "parse_query",
    "solution_stream",
    "validate_query",
]
