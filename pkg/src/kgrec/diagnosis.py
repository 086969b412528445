"""Repair of over-constrained tasks by constraint removal.

A diagnosis set names filter constraints whose removal restores
consistency. The preferred search drops as few constraints as possible
and, among equal-size candidates, the least important ones first.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .constraints import RecommendationTask, count_solutions, is_consistent
from .graph import Graph


class ConsistentTaskError(ValueError):
    """The task is already consistent; there is nothing to diagnose."""


@dataclass(frozen=True)
class DiagnosisSet:
    name: str
    removed: frozenset[str]

    @property
    def cardinality(self) -> int:
        return len(self.removed)


def named(removed: frozenset[str]) -> str:
    return ",".join(sorted(removed))


def make_diagnosis(removed) -> DiagnosisSet:
    removed = frozenset(removed)
    return DiagnosisSet(named(removed), removed)


EMPTY_DIAGNOSIS = make_diagnosis(())


def active_after(task: RecommendationTask, delta: DiagnosisSet):
    """The filter constraints that survive the removal."""
    return [c for c in task.filters if c.name not in delta.removed]


def _count_at_least(
    task: RecommendationTask,
    graph: Graph,
    active,
    threshold: int,
    case_sensitive_contains: bool,
) -> bool:
    if threshold <= 1:
        return is_consistent(task, graph, active, case_sensitive_contains)
    return count_solutions(
        task, graph, active, case_sensitive_contains) >= threshold


def find_preferred_diagnosis(
    task: RecommendationTask,
    graph: Graph,
    min_solutions: int = 1,
    case_sensitive_contains: bool = False,
) -> Optional[DiagnosisSet]:
    """The first diagnosis, searching by ascending cardinality and, within
    a cardinality, dropping the least important constraints first
    (candidates with a higher total importance rank of removed constraints
    are tried earlier). Returns None when even removing everything leaves
    the task short of min_solutions.

    Raises ConsistentTaskError when the full constraint set already meets
    the target: there is nothing to repair.
    """
    if _count_at_least(task, graph, task.filters, min_solutions,
                       case_sensitive_contains):
        raise ConsistentTaskError(
            "task already meets the requested number of solutions")
    names = task.constraint_names()
    ranks = {c.name: c.rank for c in task.filters}
    for size in range(1, len(names) + 1):
        candidates = sorted(
            combinations(names, size),
            key=lambda combo: (-sum(ranks[n] for n in combo),
                               tuple(sorted(combo))),
        )
        for combo in candidates:
            delta = make_diagnosis(combo)
            if _count_at_least(task, graph, active_after(task, delta),
                               min_solutions, case_sensitive_contains):
                return delta
    return None


def enumerate_minimal_diagnoses(
    task: RecommendationTask,
    graph: Graph,
    max_cardinality: Optional[int] = None,
    case_sensitive_contains: bool = False,
) -> list[DiagnosisSet]:
    """All subset-minimal diagnoses up to max_cardinality, sorted by
    cardinality then name. A consistent task yields the empty diagnosis."""
    names = sorted(task.constraint_names())
    if max_cardinality is None:
        max_cardinality = len(names)
    if is_consistent(task, graph, task.filters, case_sensitive_contains):
        return [EMPTY_DIAGNOSIS]
    found: list[DiagnosisSet] = []
    minimal_sets: list[frozenset[str]] = []
    for size in range(1, max_cardinality + 1):
        for combo in combinations(names, size):
            removed = frozenset(combo)
            if any(win <= removed for win in minimal_sets):
                continue  # a subset already restores consistency
            if is_consistent(task, graph,
                             active_after(task, make_diagnosis(removed)),
                             case_sensitive_contains):
                minimal_sets.append(removed)
                found.append(make_diagnosis(removed))
    found.sort(key=lambda d: (d.cardinality, d.name))
    return found


def diagnosis_is_minimal(
    task: RecommendationTask,
    graph: Graph,
    delta: DiagnosisSet,
    case_sensitive_contains: bool = False,
) -> bool:
    """True iff no proper subset of the diagnosis restores consistency."""
    if not is_consistent(task, graph, active_after(task, delta),
                         case_sensitive_contains):
        return False
    for name in delta.removed:
        smaller = make_diagnosis(delta.removed - {name})
        if is_consistent(task, graph, active_after(task, smaller),
                         case_sensitive_contains):
            return False
    return True
