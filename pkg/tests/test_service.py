import json

import pytest
from fastapi.testclient import TestClient

from kgrec.constraints import build_task, solve
from kgrec.engine import recommendation_to_json
from kgrec.service import create_app

from conftest import FIXTURES


@pytest.fixture(scope="module")
def client(engine):
    return TestClient(create_app(engine))


def fig2_request():
    return json.loads((FIXTURES / "profile_fig2.json").read_text("utf-8"))


def test_health(client, engine):
    body = client.get("/health").json()
    assert body["status"] == "ok"
    assert body["triples"] == engine.triples_loaded + engine.triples_derived
    assert body["derived"] == 3


def test_vocabulary_domains(client):
    body = client.get("/vocabulary").json()
    assert "Audi" in body["brands"]
    assert "Noir métallisé" in body["colors"]
    assert set(body["bodyTypes"]) == {"sedan", "crossover", "suv"}
    assert body["seats"] == [2, 4, 5]
    assert body["priceRange"] == {"min": 9900, "max": 105000}
    assert body["mileageRange"]["max"] == 150000.0
    assert "parentProfile" in body["profiles"]


def test_recommend_satisfiable(client):
    body = client.post("/recommend", json=fig2_request()).json()
    assert [r["item"].rsplit("#", 1)[1] for r in body["recommendations"]] == \
        ["auto_v01"]
    assert body["appliedDelta"] is None
    assert body["alternatives"] == []


def test_recommend_impossible_price(client):
    request = {
        "userId": "u9",
        "preferences": {"seats": 5, "maxBudget": 100},
        "importance": ["seats", "maxBudget"],
    }
    body = client.post("/recommend", json=request).json()
    assert body["appliedDelta"]["removed"] == ["Price"]
    assert body["appliedDelta"]["solutionCount"] == 14
    assert len(body["recommendations"]) == 10  # default top_n
    for alternative in body["alternatives"]:
        assert alternative["removed"]


def test_recommend_matches_library_path(client, engine, fig2_profile):
    response = client.post("/recommend", json=fig2_request()).json()
    direct = solve(build_task(fig2_profile), engine.graph, top_n=engine.top_n)
    expected = [recommendation_to_json(r) for r in direct]
    assert json.dumps(response["recommendations"], sort_keys=True) == \
        json.dumps(expected, sort_keys=True)


def test_recommend_rejects_malformed_profile(client):
    request = {"userId": "u1", "preferences": {"seats": -1},
               "importance": ["seats"]}
    response = client.post("/recommend", json=request)
    assert response.status_code == 400
    detail = response.json()["detail"]
    assert detail["field"] == "preferences.seats"
    assert "positive" in detail["reason"]


def test_recommend_top_n_override(client):
    request = {"userId": "u1", "preferences": {}, "importance": [],
               "topN": 3}
    body = client.post("/recommend", json=request).json()
    assert len(body["recommendations"]) == 3


def test_diagnose_empty_delta_equals_recommend(client):
    request = fig2_request()
    recommend = client.post("/recommend", json=request).json()
    request["delta"] = []
    diagnose = client.post("/diagnose", json=request).json()
    assert diagnose["solutions"] == recommend["recommendations"]


def test_diagnose_monotone_in_delta(client):
    base = {
        "userId": "u9",
        "preferences": {"color": ["violet"], "brand": "lada", "seats": 5},
        "importance": ["seats", "color", "brand"],
    }
    counts = {}
    for delta in (["Color"], ["Color", "Brand"]):
        request = dict(base)
        request["delta"] = delta
        counts[tuple(delta)] = client.post(
            "/diagnose", json=request).json()["solutionCount"]
    assert counts[("Color", "Brand")] >= counts[("Color",)]


def test_diagnose_unknown_name_lists_valid(client):
    request = fig2_request()
    request["delta"] = ["Horsepower"]
    response = client.post("/diagnose", json=request)
    assert response.status_code == 400
    assert "Horsepower" in response.json()["detail"]["reason"]
    assert "Brand" in response.json()["detail"]["reason"]


def test_diagnose_requires_delta_list(client):
    request = fig2_request()
    response = client.post("/diagnose", json=request)
    assert response.status_code == 400


def test_responses_deterministic(client):
    request = fig2_request()
    first = client.post("/recommend", json=request).content
    second = client.post("/recommend", json=request).content
    assert first == second


def test_graph_never_mutated_by_requests(client, engine):
    size = len(engine.graph)
    client.post("/recommend", json=fig2_request())
    client.get("/vocabulary")
    assert len(engine.graph) == size
