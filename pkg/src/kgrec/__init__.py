"""kgrec: a constraint-based vehicle recommender over an in-memory RDF
knowledge graph.

The pipeline: load triples, run forward-chaining rules to fixpoint, then
answer preference queries compiled into graph patterns with filters;
over-constrained requests are repaired by minimal constraint removal.
"""

from .graph import Graph
from .terms import BlankNode, Datatype, Iri, Literal, Triple, Variable
from .rdfio import parse_document, serialize_ntriples
from .rules import RuleSet, parse_rules, saturate
from .query import QueryAst, evaluate, parse_query
from .profiles import PreferenceProfile, profile_from_json, profile_to_json
from .constraints import (
    FilterConstraint,
    Recommendation,
    RecommendationTask,
    build_task,
    compile_query,
    count_solutions,
    derive_constraints,
    is_consistent,
    solve,
)
from .diagnosis import (
    DiagnosisSet,
    enumerate_minimal_diagnoses,
    find_preferred_diagnosis,
)
from .experiment import run_relaxation_experiment

__version__ = "0.1.0"

__all__ = [
    "BlankNode",
    "Datatype",
    "DiagnosisSet",
    "FilterConstraint",
    "Graph",
    "Iri",
    "Literal",
    "PreferenceProfile",
    "QueryAst",
    "Recommendation",
    "RecommendationTask",
    "RuleSet",
    "Triple",
    "Variable",
    "build_task",
    "compile_query",
    "count_solutions",
    "derive_constraints",
    "enumerate_minimal_diagnoses",
    "evaluate",
    "find_preferred_diagnosis",
    "is_consistent",
    "parse_document",
    "parse_query",
    "parse_rules",
    "profile_from_json",
    "profile_to_json",
    "run_relaxation_experiment",
    "saturate",
    "serialize_ntriples",
    "solve",
    "__version__",
]
