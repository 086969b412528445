"""The relaxation study harness: per-diagnosis solution-count histograms
over a population of user profiles, plus the CSV report format."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .constraints import CONSTRAINT_CATALOG, build_task, count_solutions
from .diagnosis import DiagnosisSet, active_after
from .graph import Graph
from .profiles import PreferenceProfile

BUCKET_LABELS = ("0", "1-5", "6-10", ">10")

BASELINE_NAME = "V_U"

# The hand-picked singleton-and-pair diagnosis sets used as the default
# experiment configuration.
DEFAULT_DELTA_SPEC = (
    "D1=Seats;D2=VehicleType;D3=Brand;D4=Color;D5=Mileage;D6=Price;"
    "D7=Color,Brand"
)


def bucket_of(count: int) -> str:
    if count == 0:
        return "0"
    if count <= 5:
        return "1-5"
    if count <= 10:
        return "6-10"
    return ">10"


class DeltaSpecError(ValueError):
    pass


def parse_delta_spec(spec: str) -> list[DiagnosisSet]:
    """`D3=Brand;D7=Color,Brand` -> named diagnosis sets."""
    deltas = []
    seen = set()
    for chunk in spec.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise DeltaSpecError(f"expected name=constraints, got {chunk!r}")
        name, _, names_text = chunk.partition("=")
        name = name.strip()
        if not name:
            raise DeltaSpecError(f"missing delta name in {chunk!r}")
        if name in seen:
            raise DeltaSpecError(f"duplicate delta name {name!r}")
        seen.add(name)
        removed = set()
        for token in names_text.split(","):
            token = token.strip()
            if not token:
                continue
            if token not in CONSTRAINT_CATALOG:
                raise DeltaSpecError(
                    f"unknown constraint {token!r} in delta {name!r}; "
                    f"expected one of {sorted(CONSTRAINT_CATALOG)}")
            removed.add(token)
        deltas.append(DiagnosisSet(name, frozenset(removed)))
    return deltas


@dataclass
class ExperimentReport:
    delta_names: list[str]
    histograms: dict[str, dict[str, int]]  # delta name -> bucket -> users
    counts: dict[str, list[int]]           # delta name -> per-user counts
    solvability_rate: float                # baseline: share of users with >=1
    total_users: int
    errors: list[str] = field(default_factory=list)


def run_relaxation_experiment(
    profiles: Iterable[PreferenceProfile],
    graph: Graph,
    deltas: list[DiagnosisSet],
    case_sensitive_contains: bool = False,
    errors: Optional[list[str]] = None,
) -> ExperimentReport:
    """Count, for every user and every diagnosis set, the consistent items
    of the relaxed constraint set, and aggregate into histogram buckets.

    The delta list must include the empty (all-constraints baseline) set;
    the solvability rate is measured against it.
    """
    baseline = next((d for d in deltas if not d.removed), None)
    if baseline is None:
        raise ValueError("deltas must include the empty baseline set")
    histograms = {d.name: {label: 0 for label in BUCKET_LABELS} for d in deltas}
    counts: dict[str, list[int]] = {d.name: [] for d in deltas}
    total = 0
    solvable = 0
    for profile in profiles:
        task = build_task(profile)
        total += 1
        for delta in deltas:
            n = count_solutions(task, graph, active_after(task, delta),
                                case_sensitive_contains)
            histograms[delta.name][bucket_of(n)] += 1
            counts[delta.name].append(n)
            if delta is baseline and n >= 1:
                solvable += 1
    rate = solvable / total if total else 0.0
    return ExperimentReport(
        delta_names=[d.name for d in deltas],
        histograms=histograms,
        counts=counts,
        solvability_rate=rate,
        total_users=total,
        errors=list(errors or []),
    )


def report_to_csv(report: ExperimentReport) -> str:
    """delta_name,bucket,user_count rows plus a trailing summary line with
    the baseline solvability rate."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["delta_name", "bucket", "user_count"])
    for name in report.delta_names:
        for label in BUCKET_LABELS:
            writer.writerow([name, label, report.histograms[name][label]])
    writer.writerow(
        ["baseline_solvability", "", f"{report.solvability_rate:.4f}"])
    return out.getvalue()


def ensure_baseline(deltas: list[DiagnosisSet]) -> list[DiagnosisSet]:
    """Prepend the all-constraints baseline when the spec lacks it."""
    if any(not d.removed for d in deltas):
        return deltas
    return [DiagnosisSet(BASELINE_NAME, frozenset())] + deltas
