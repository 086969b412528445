import json

import pytest

from kgrec.constraints import build_task, is_consistent, satisfies
from kgrec.rdfio import parse_turtle
from kgrec.synthetic import (
    SyntheticSpec,
    SyntheticSpecError,
    generate_dataset,
    generate_synthetic,
    spec_from_json,
)
from kgrec.terms import Iri
from kgrec.vocab import RDF_TYPE, VEHICLE_CLASS


def small_spec(**overrides):
    base = dict(vehicles=120, users=40, seed=7, solvability=0.75)
    base.update(overrides)
    return SyntheticSpec(**base)


def test_same_seed_same_bytes(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    for out in (a, b):
        generate_synthetic(small_spec(), str(out))
    for name in ("data.ttl", "profiles.json", "ledger.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_different_seed_differs():
    one = generate_dataset(small_spec(seed=1))
    two = generate_dataset(small_spec(seed=2))
    assert one.turtle != two.turtle


def test_generated_turtle_parses():
    dataset = generate_dataset(small_spec())
    graph = parse_turtle(dataset.turtle)
    autos = graph.match(None, Iri(RDF_TYPE), Iri(VEHICLE_CLASS))
    assert len(autos) == 120


def test_planted_witnesses_satisfy_all_constraints():
    dataset = generate_dataset(small_spec())
    graph = parse_turtle(dataset.turtle).freeze()
    by_id = {profile.user_id: profile for profile in dataset.profiles}
    checked = 0
    for entry in dataset.ledger["entries"]:
        if entry["witness"] is None:
            continue
        task = build_task(by_id[entry["userId"]])
        witness = Iri(entry["witness"])
        for constraint in task.filters:
            assert satisfies(graph, witness, constraint)
        checked += 1
    assert checked == round(40 * 0.75)


def test_measured_solvability_equals_planted_exactly():
    dataset = generate_dataset(small_spec())
    graph = parse_turtle(dataset.turtle).freeze()
    solvable = sum(
        1 for profile in dataset.profiles
        if is_consistent(build_task(profile), graph))
    assert solvable / len(dataset.profiles) == dataset.ledger[
        "plantedSolvability"]


def test_zero_vehicles_all_users_unsolvable():
    dataset = generate_dataset(
        SyntheticSpec(vehicles=0, users=10, seed=1, solvability=0.0))
    graph = parse_turtle(dataset.turtle).freeze()
    assert len(graph) == 0
    for profile in dataset.profiles:
        assert not is_consistent(build_task(profile), graph)


def test_infeasible_spec_rejected():
    with pytest.raises(SyntheticSpecError, match="empty catalog"):
        SyntheticSpec(vehicles=0, users=10, seed=1, solvability=1.0)
    with pytest.raises(SyntheticSpecError, match="solvability"):
        SyntheticSpec(vehicles=10, users=10, seed=1, solvability=1.5)
    with pytest.raises(SyntheticSpecError, match="body"):
        SyntheticSpec(vehicles=1, users=1, body_types=("hovercraft",))


def test_spec_from_json_with_domains():
    spec = spec_from_json({
        "vehicles": 10,
        "users": 5,
        "seed": 3,
        "solvability": 0.4,
        "domains": {
            "brands": ["Audi", "Tesla"],
            "seats": [2, 5],
            "priceRange": [3000, 9000],
        },
    })
    assert spec.brands == ("Audi", "Tesla")
    assert spec.seat_counts == (2, 5)
    assert spec.price_range == (3000, 9000)
    dataset = generate_dataset(spec)
    for vehicle in dataset.vehicles:
        assert vehicle.brand in ("Audi", "Tesla")
        assert 3000 <= vehicle.price <= 9000


def test_spec_from_json_missing_key():
    with pytest.raises(SyntheticSpecError, match="vehicles"):
        spec_from_json({"users": 5})


def test_profiles_file_round_trips(tmp_path):
    from kgrec.profiles import profile_from_json

    _, profiles_path, _ = generate_synthetic(small_spec(), str(tmp_path))
    documents = json.loads(profiles_path.read_text())
    assert len(documents) == 40
    for document in documents:
        profile_from_json(document)  # must validate cleanly
