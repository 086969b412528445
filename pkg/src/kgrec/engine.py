"""Load-saturate-serve orchestration shared by the HTTP service and the
CLI. The graph is saturated exactly once, then frozen; every request works
against the same immutable snapshot."""

from __future__ import annotations

import logging
from datetime import datetime
from pathlib import Path
from typing import Optional

from . import vocab
from .config import ServiceConfig
from .constraints import (
    Recommendation,
    build_task,
    count_solutions,
    solve,
)
from .diagnosis import (
    ConsistentTaskError,
    DiagnosisSet,
    active_after,
    enumerate_minimal_diagnoses,
    find_preferred_diagnosis,
    make_diagnosis,
)
from .graph import Graph
from .profiles import PreferenceProfile
from .rdfio import ParseError, load_path
from .rules import RuleSet, parse_rules, saturate
from .terms import Iri, Literal

log = logging.getLogger("kgrec")

MAX_ALTERNATIVES = 5


class StartupError(RuntimeError):
    pass


def load_graph(paths: list[str]) -> Graph:
    graph = Graph()
    for path in paths:
        try:
            part = load_path(path)
        except FileNotFoundError as exc:
            raise StartupError(f"data file not found: {path}") from exc
        except ParseError as exc:
            raise StartupError(f"{path}: {exc}") from exc
        for triple in part:
            graph.add(triple)
        graph.prefixes.update(part.prefixes)
    return graph


def load_rules(path: Optional[str],
               reference_time: Optional[datetime]) -> RuleSet:
    if path is None:
        return RuleSet([], reference_time) if reference_time else RuleSet([])
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise StartupError(f"rule file not found: {path}") from exc
    return parse_rules(text, reference_time)


def recommendation_to_json(rec: Recommendation) -> dict:
    return {"item": rec.item.value, "attributes": dict(rec.attributes)}


def diagnosis_to_json(delta: DiagnosisSet, solution_count: int) -> dict:
    return {
        "name": delta.name,
        "removed": sorted(delta.removed),
        "solutionCount": solution_count,
    }


class RecommenderEngine:
    """A frozen, saturated graph plus the request-level operations."""

    def __init__(
        self,
        graph: Graph,
        ruleset: RuleSet,
        top_n: int = 10,
        case_sensitive_contains: bool = False,
    ) -> None:
        self.ruleset = ruleset
        self.top_n = top_n
        self.case_sensitive_contains = case_sensitive_contains
        self.triples_loaded = len(graph)
        saturate(graph, ruleset)
        self.triples_derived = len(graph) - self.triples_loaded
        self.graph = graph.freeze()
        log.info(
            "graph ready: %d loaded, %d derived by %d rules",
            self.triples_loaded, self.triples_derived, len(ruleset.rules))

    @classmethod
    def from_config(cls, config: ServiceConfig) -> "RecommenderEngine":
        graph = load_graph(config.data_paths)
        ruleset = load_rules(config.rules_path, config.reference_time)
        return cls(graph, ruleset, config.top_n,
                   config.case_sensitive_contains)

    # -- request operations -------------------------------------------------

    def recommend(
        self, profile: PreferenceProfile, top_n: Optional[int] = None
    ) -> dict:
        """Solve the full task; on inconsistency, apply the preferred
        diagnosis and offer alternative minimal relaxations."""
        top_n = top_n or self.top_n
        task = build_task(profile, self.ruleset)
        recommendations = solve(task, self.graph, None, top_n,
                                self.case_sensitive_contains)
        if recommendations:
            return {
                "recommendations": [
                    recommendation_to_json(r) for r in recommendations],
                "appliedDelta": None,
                "alternatives": [],
            }
        try:
            preferred = find_preferred_diagnosis(
                task, self.graph,
                case_sensitive_contains=self.case_sensitive_contains)
        except ConsistentTaskError:  # no items at all yet solve was empty
            preferred = None
        if preferred is None:
            return {"recommendations": [], "appliedDelta": None,
                    "alternatives": []}
        active = active_after(task, preferred)
        repaired = solve(task, self.graph, active, top_n,
                         self.case_sensitive_contains)
        count = count_solutions(task, self.graph, active,
                                self.case_sensitive_contains)
        alternatives = []
        for delta in enumerate_minimal_diagnoses(
                task, self.graph,
                case_sensitive_contains=self.case_sensitive_contains):
            if delta.removed == preferred.removed:
                continue
            n = count_solutions(task, self.graph, active_after(task, delta),
                                self.case_sensitive_contains)
            alternatives.append(diagnosis_to_json(delta, n))
            if len(alternatives) >= MAX_ALTERNATIVES:
                break
        return {
            "recommendations": [recommendation_to_json(r) for r in repaired],
            "appliedDelta": diagnosis_to_json(preferred, count),
            "alternatives": alternatives,
        }

    def diagnose(
        self,
        profile: PreferenceProfile,
        delta_names: list[str],
        top_n: Optional[int] = None,
    ) -> dict:
        """Solutions of the task with the chosen constraints removed."""
        top_n = top_n or self.top_n
        task = build_task(profile, self.ruleset)
        valid = set(task.constraint_names())
        unknown = [name for name in delta_names if name not in valid]
        if unknown:
            raise KeyError(
                f"unknown constraint names {sorted(unknown)}; valid names: "
                f"{sorted(valid)}")
        delta = make_diagnosis(delta_names)
        active = active_after(task, delta)
        solutions = solve(task, self.graph, active, top_n,
                          self.case_sensitive_contains)
        count = count_solutions(task, self.graph, active,
                                self.case_sensitive_contains)
        return {
            "delta": diagnosis_to_json(delta, count),
            "solutions": [recommendation_to_json(r) for r in solutions],
            "solutionCount": count,
        }

    def vocabulary(self) -> dict:
        """Attribute domains observed in the catalog, for form building."""
        graph = self.graph
        brands = set()
        for t in graph.match(None, Iri(vocab.HAS_MANUFACTURER), None):
            if isinstance(t.object, Iri):
                brands.add(vocab.local_name(t.object.value))
        colors = set()
        for t in graph.match(None, Iri(vocab.COLOR), None):
            if isinstance(t.object, Literal):
                colors.add(t.object.lexical)
        body_types = set()
        for t in graph.match(None, Iri(vocab.BODY_STYLE), None):
            if isinstance(t.object, Iri):
                token = vocab.BODY_STYLE_TOKENS.get(t.object.value)
                if token:
                    body_types.add(token)
        seats = set()
        for t in graph.match(None, Iri(vocab.SEATING_CAPACITY), None):
            for value in graph.objects(t.object, Iri(vocab.HAS_VALUE_INT)):
                if isinstance(value, Literal) and value.is_numeric():
                    seats.add(int(value.value()))
        prices = self._numeric_values(vocab.VALUATION,
                                      vocab.HAS_CURRENCY_VALUE)
        mileages = self._numeric_values(vocab.MILEAGE_FROM_ODOMETER,
                                        vocab.HAS_VALUE_FLOAT)
        return {
            "brands": sorted(brands),
            "colors": sorted(colors),
            "bodyTypes": sorted(body_types),
            "seats": sorted(seats),
            "profiles": list(vocab.PROFILE_TOKENS),
            "priceRange": _range_of(prices),
            "mileageRange": _range_of(mileages),
        }

    def _numeric_values(self, predicate: str, value_predicate: str) -> list:
        values = []
        for t in self.graph.match(None, Iri(predicate), None):
            for value in self.graph.objects(t.object, Iri(value_predicate)):
                if isinstance(value, Literal) and value.is_numeric():
                    values.append(value.value())
        return values

    def health(self) -> dict:
        return {
            "status": "ok",
            "triples": len(self.graph),
            "loaded": self.triples_loaded,
            "derived": self.triples_derived,
        }


def _range_of(values: list) -> Optional[dict]:
    if not values:
        return None
    return {"min": min(values), "max": max(values)}
