import json
import random
from pathlib import Path

import pytest

from kgrec.config import load_config
from kgrec.engine import RecommenderEngine
from kgrec.graph import Graph
from kgrec.profiles import profile_from_json
from kgrec.rdfio import parse_turtle
from kgrec.rules import parse_rules
from kgrec.terms import Datatype, Iri, Literal, Triple, parse_datetime

FIXTURES = Path(__file__).parent.parent / "fixtures"

REFERENCE_TIME = parse_datetime("2023-05-01T00:00:00")


@pytest.fixture(scope="session")
def catalog_graph():
    """The raw (unsaturated) 20-vehicle catalog."""
    return parse_turtle((FIXTURES / "catalog.ttl").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def ruleset():
    return parse_rules((FIXTURES / "rules.rules").read_text(encoding="utf-8"),
                       REFERENCE_TIME)


@pytest.fixture(scope="session")
def engine():
    """Loaded, saturated, frozen fixture engine."""
    return RecommenderEngine.from_config(
        load_config(str(FIXTURES / "service.conf")))


@pytest.fixture(scope="session")
def fig2_profile():
    return profile_from_json(
        json.loads((FIXTURES / "profile_fig2.json").read_text(encoding="utf-8")))


# ---------------------------------------------------------------------------
# Random data helpers shared by the property tests
# ---------------------------------------------------------------------------


def random_term_pool(rng: random.Random, iris: int = 8, literals: int = 5):
    pool = [Iri(f"http://example.org/t{i}") for i in range(iris)]
    for i in range(literals):
        kind = rng.randrange(3)
        if kind == 0:
            pool.append(Literal(str(rng.randrange(100)), Datatype.INTEGER))
        elif kind == 1:
            pool.append(Literal(f"s{rng.randrange(8)}"))
        else:
            pool.append(Literal(f"{rng.randrange(50)}.5", Datatype.FLOAT))
    return pool


def random_graph(rng: random.Random, pool, max_triples: int = 200) -> Graph:
    graph = Graph()
    subjects = [t for t in pool if isinstance(t, Iri)]
    for _ in range(rng.randrange(max_triples + 1)):
        graph.add(Triple(
            rng.choice(subjects),
            rng.choice(subjects),
            rng.choice(pool),
        ))
    return graph
