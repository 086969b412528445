"""Acceptance suite: one test per criterion, each printing a PASS line
with its runtime. Run with `pytest tests/test_acceptance.py -v -s`."""

import json
import random
import time

from fastapi.testclient import TestClient

from kgrec.constraints import build_task, count_solutions, is_consistent, solve
from kgrec.diagnosis import (
    active_after,
    enumerate_minimal_diagnoses,
    find_preferred_diagnosis,
    make_diagnosis,
)
from kgrec.engine import recommendation_to_json
from kgrec.experiment import (
    ensure_baseline,
    parse_delta_spec,
    run_relaxation_experiment,
)
from kgrec.profiles import PreferenceProfile, profile_to_json
from kgrec.query import (
    QueryAst,
    apply_modifiers,
    eval_bgp,
    eval_filter,
    evaluate,
    parse_query,
    solution_stream,
)
from kgrec.rdfio import parse_turtle
from kgrec.rules import RuleSet, parse_rules, saturate
from kgrec.service import create_app
from kgrec.synthetic import SyntheticSpec, generate_dataset
from kgrec.terms import Iri, Literal, Variable
from kgrec.vocab import RDF_TYPE, UVSO, VEHICLE_CLASS

from conftest import FIXTURES, REFERENCE_TIME, random_graph, random_term_pool
from test_query import (
    multiset,
    oracle_modifiers,
    oracle_solutions,
    random_query,
)
from test_rules import expected_small_derivations

SEED = 20230501


def _report(name: str, started: float) -> None:
    print(f"\nACCEPTANCE {name}: PASS ({time.monotonic() - started:.1f}s)")


# ---------------------------------------------------------------------------
# 1. Query oracle equivalence: 1,000 randomized cases, < 60 s
# ---------------------------------------------------------------------------


def test_query_oracle_equivalence_1000_cases():
    started = time.monotonic()
    rng = random.Random(SEED)
    for case in range(1000):
        pool = random_term_pool(rng, iris=rng.randint(4, 7),
                                literals=rng.randint(2, 5))
        graph = random_graph(rng, pool, max_triples=200)
        patterns, filters = random_query(rng, pool)

        engine_rows = [
            row for row in eval_bgp(graph, patterns)
            if all(eval_filter(f, row) for f in filters)
        ]
        oracle_rows = oracle_solutions(graph, patterns, filters)
        assert multiset(engine_rows) == multiset(oracle_rows), f"case {case}"

        # the filter-pushdown path must agree as well
        pushdown_rows = list(solution_stream(
            graph, QueryAst(patterns=list(patterns), filters=list(filters))))
        assert multiset(pushdown_rows) == multiset(oracle_rows), \
            f"case {case} pushdown"

        # post-modifier comparison under a total ORDER BY
        scope = sorted({v.name for p in patterns for v in p.variables()})
        order_by = [(Variable(n), rng.choice(["asc", "desc"])) for n in scope]
        distinct = rng.random() < 0.5
        limit = rng.choice([None, rng.randrange(8)])
        offset = rng.choice([None, rng.randrange(4)])
        got = apply_modifiers(engine_rows, distinct=distinct,
                              order_by=order_by, limit=limit, offset=offset)
        want = oracle_modifiers(oracle_rows, distinct, order_by, limit, offset)
        assert [sorted(r.items()) for r in got] == \
            [sorted(r.items()) for r in want], f"case {case} modifiers"
    elapsed = time.monotonic() - started
    assert elapsed < 60.0, f"runtime budget exceeded: {elapsed:.1f}s"
    _report("query-oracle-equivalence", started)


# ---------------------------------------------------------------------------
# 2. Rule correctness on the authored fixture, exact
# ---------------------------------------------------------------------------


def test_rule_correctness_exact():
    started = time.monotonic()
    rules_text = (FIXTURES / "rules.rules").read_text("utf-8")
    fixture_text = (FIXTURES / "rules_small.ttl").read_text("utf-8")
    base_rules = parse_rules(rules_text, REFERENCE_TIME)

    graph = parse_turtle(fixture_text)
    assert len(graph) <= 30
    base = set(graph)
    saturate(graph, base_rules)
    derived = set(graph) - base
    assert derived == expected_small_derivations()

    # idempotence
    saturate(graph, base_rules)
    assert set(graph) - base == expected_small_derivations()

    # order independence across 20 random rule permutations
    rng = random.Random(SEED)
    for _ in range(20):
        rules = list(base_rules.rules)
        rng.shuffle(rules)
        regraph = parse_turtle(fixture_text)
        saturate(regraph, RuleSet(rules, REFERENCE_TIME))
        assert set(regraph) == set(graph)
    _report("rule-correctness", started)


# ---------------------------------------------------------------------------
# 3. Fig-2-style scenario on the bundled fixture, exact
# ---------------------------------------------------------------------------


def test_reference_query_scenario(engine):
    started = time.monotonic()
    query = parse_query((FIXTURES / "fig2_query.rq").read_text("utf-8"))
    results = {row["auto"] for row in evaluate(engine.graph, query)}

    def fold(s):
        return s.casefold()

    expected = set()
    for t in engine.graph.match(None, Iri(RDF_TYPE), Iri(VEHICLE_CLASS)):
        item = t.subject
        colors = [o.lexical for o in engine.graph.objects(
            item, Iri(UVSO + "color")) if isinstance(o, Literal)]
        seats = [
            int(v.value())
            for node in engine.graph.objects(item, Iri(UVSO + "seatingCapacity"))
            for v in engine.graph.objects(
                node, Iri("http://purl.org/goodrelations/v1#hasValueInt"))
        ]
        brands = [o.value for o in engine.graph.objects(
            item, Iri(UVSO + "hasManufacturer")) if isinstance(o, Iri)]
        bodies = [o for o in engine.graph.objects(item, Iri(UVSO + "bodyStyle"))]
        mileages = [
            float(v.value())
            for node in engine.graph.objects(
                item, Iri(UVSO + "mileageFromOdometer"))
            for v in engine.graph.objects(
                node, Iri("http://purl.org/goodrelations/v1#hasValueFloat"))
        ]
        prices = [
            float(v.value())
            for node in engine.graph.objects(
                item, Iri("http://utc.fr/uvo/ns#valuation"))
            for v in engine.graph.objects(
                node, Iri("http://utc.fr/uvoo/ns#hasCurrencyValue"))
        ]
        if (any(fold("noir") in fold(c) for c in colors)
                and any(s == 5 for s in seats)
                and any(fold("audi") in fold(b) for b in brands)
                and any(b == Iri(UVSO + "berline_occasion") for b in bodies)
                and any(m <= 100000 for m in mileages)
                and any(20000 <= p <= 100000 for p in prices)):
            expected.add(item)

    assert results == expected
    assert results == {Iri(UVSO + "auto_v01")}
    _report("reference-query-scenario", started)


# ---------------------------------------------------------------------------
# 4. Diagnosis validity & minimality: 200 profiles over 500 vehicles, <120 s
# ---------------------------------------------------------------------------


def _random_profile(rng: random.Random, spec: SyntheticSpec,
                    user_id: str) -> PreferenceProfile:
    assignments = {}
    if rng.random() < 0.9:
        assignments["Seats"] = rng.choice(spec.seat_counts)
    if rng.random() < 0.9:
        assignments["VehicleType"] = rng.choice(spec.body_types)
    if rng.random() < 0.9:
        assignments["Brand"] = rng.choice(spec.brands).lower()
    if rng.random() < 0.9:
        assignments["Color"] = [rng.choice(spec.colors)]
    if rng.random() < 0.9:
        assignments["Mileage"] = rng.randint(5000, 260000)
    if rng.random() < 0.9:
        assignments["Price"] = rng.randint(3000, 100000)
    order = list(assignments)
    rng.shuffle(order)
    return PreferenceProfile(
        user_id, assignments,
        {variable: rank for rank, variable in enumerate(order, 1)})


def test_diagnosis_validity_and_minimality():
    started = time.monotonic()
    rng = random.Random(SEED)
    spec = SyntheticSpec(vehicles=500, users=0, seed=SEED, solvability=0.0)
    graph = parse_turtle(generate_dataset(spec).turtle).freeze()

    diagnosed = 0
    for i in range(200):
        profile = _random_profile(rng, spec, f"p{i:03d}")
        task = build_task(profile)
        if not task.filters:
            continue
        if is_consistent(task, graph):
            assert enumerate_minimal_diagnoses(task, graph)[0].removed == \
                frozenset()
            continue
        delta = find_preferred_diagnosis(task, graph)
        assert delta is not None, profile
        diagnosed += 1
        active = active_after(task, delta)
        assert is_consistent(task, graph, active), "diagnosis must repair"
        minimal = enumerate_minimal_diagnoses(task, graph)
        assert minimal, "enumerator must find a diagnosis too"
        assert delta.cardinality == min(d.cardinality for d in minimal), \
            "preferred diagnosis must have minimum cardinality"
        # relaxation monotonicity on supersets of the applied diagnosis
        base_count = count_solutions(task, graph, active)
        for extra in task.constraint_names():
            if extra in delta.removed:
                continue
            superset = make_diagnosis(delta.removed | {extra})
            super_count = count_solutions(
                task, graph, active_after(task, superset))
            assert super_count >= base_count, "relaxation must be monotone"
    assert diagnosed >= 40, f"only {diagnosed} inconsistent profiles sampled"
    elapsed = time.monotonic() - started
    assert elapsed < 120.0, f"runtime budget exceeded: {elapsed:.1f}s"
    _report(f"diagnosis-validity-minimality ({diagnosed} diagnosed)", started)


# ---------------------------------------------------------------------------
# 5. Relaxation-shape reproduction: 5,000 vehicles / 500 users, < 5 min
# ---------------------------------------------------------------------------


def test_relaxation_shape_reproduction():
    started = time.monotonic()
    spec = SyntheticSpec(vehicles=5000, users=500, seed=SEED,
                         solvability=0.88)
    dataset = generate_dataset(spec)
    graph = parse_turtle(dataset.turtle).freeze()

    deltas = ensure_baseline(parse_delta_spec(
        "D1=Seats;D2=VehicleType;D3=Brand;D4=Color;D5=Mileage;D6=Price;"
        "D7=Color,Brand"))
    report = run_relaxation_experiment(dataset.profiles, graph, deltas)

    planted = dataset.ledger["plantedSolvability"]
    assert abs(report.solvability_rate - planted) <= 0.02, (
        f"measured {report.solvability_rate} vs planted {planted}")

    over_ten = {name: report.histograms[name][">10"]
                for name in report.delta_names}
    singles = {"D1", "D2", "D3", "D4", "D5", "D6"}
    for name in singles - {"D3", "D4"}:
        assert over_ten["D3"] > over_ten[name], (
            f"Brand relaxation must dominate {name}: {over_ten}")
        assert over_ten["D4"] > over_ten[name], (
            f"Color relaxation must dominate {name}: {over_ten}")
    elapsed = time.monotonic() - started
    assert elapsed < 300.0, f"runtime budget exceeded: {elapsed:.1f}s"
    _report(f"relaxation-shape (rate={report.solvability_rate:.3f}, "
            f">10 buckets={over_ten})", started)


# ---------------------------------------------------------------------------
# 6. Service path equals library path on 50 random profiles
# ---------------------------------------------------------------------------


def test_service_equals_library_on_50_profiles(engine):
    started = time.monotonic()
    client = TestClient(create_app(engine))
    rng = random.Random(SEED)
    spec = SyntheticSpec(vehicles=1, users=0, seed=0)  # domains only

    for i in range(50):
        profile = _random_profile(rng, spec, f"svc{i:02d}")
        request = profile_to_json(profile)
        response = client.post("/recommend", json=request)
        assert response.status_code == 200
        body = response.json()

        task = build_task(profile)
        if body["appliedDelta"] is None:
            expected = solve(task, engine.graph, None, engine.top_n)
        else:
            delta = make_diagnosis(body["appliedDelta"]["removed"])
            expected = solve(task, engine.graph, active_after(task, delta),
                             engine.top_n)
        assert json.dumps(body["recommendations"], sort_keys=True) == \
            json.dumps([recommendation_to_json(r) for r in expected],
                       sort_keys=True), f"profile {i}"
    _report("service-library-equivalence", started)
