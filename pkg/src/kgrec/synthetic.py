"""Deterministic synthetic catalog and population generator.

A fixed seed fully determines the output files. Solvability is planted by
construction: each solvable user's preferences are derived from a witness
vehicle that satisfies all of them, and every other user gets a budget
below the cheapest vehicle, so the measured baseline solvability equals
the planted share exactly. The ledger file records the witnesses.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from . import vocab
from .profiles import PreferenceProfile, profile_to_json

DEFAULT_BRANDS = (
    "Peugeot", "Renault", "Citroen", "Tesla", "Audi", "BMW", "Fiat", "Toyota",
)
DEFAULT_COLORS = (
    "black", "white", "blue", "red", "grey", "green", "silver", "beige",
)
DEFAULT_BODY_TYPES = ("sedan", "crossover", "suv")
DEFAULT_SEAT_COUNTS = (2, 4, 5)
DEFAULT_MODEL_YEARS = (2018, 2019, 2020, 2021)
DEFAULT_PRICE_RANGE = (5000, 95000)
DEFAULT_MILEAGE_RANGE = (1000.0, 250000.0)


class SyntheticSpecError(ValueError):
    pass


@dataclass
class SyntheticSpec:
    vehicles: int
    users: int
    seed: int = 0
    solvability: float = 0.88
    brands: tuple[str, ...] = DEFAULT_BRANDS
    colors: tuple[str, ...] = DEFAULT_COLORS
    body_types: tuple[str, ...] = DEFAULT_BODY_TYPES
    seat_counts: tuple[int, ...] = DEFAULT_SEAT_COUNTS
    model_years: tuple[int, ...] = DEFAULT_MODEL_YEARS
    price_range: tuple[int, int] = DEFAULT_PRICE_RANGE
    mileage_range: tuple[float, float] = DEFAULT_MILEAGE_RANGE

    def __post_init__(self) -> None:
        if self.vehicles < 0 or self.users < 0:
            raise SyntheticSpecError("vehicle and user counts must be >= 0")
        if not 0.0 <= self.solvability <= 1.0:
            raise SyntheticSpecError("solvability must be within [0, 1]")
        if self.vehicles == 0 and self.users > 0 and self.solvability > 0:
            raise SyntheticSpecError(
                "cannot plant solvable users into an empty catalog")
        if self.price_range[0] < 2 or self.price_range[0] > self.price_range[1]:
            raise SyntheticSpecError("price range must satisfy 2 <= lo <= hi")
        if (self.mileage_range[0] < 0
                or self.mileage_range[0] > self.mileage_range[1]):
            raise SyntheticSpecError("mileage range must satisfy 0 <= lo <= hi")
        for name in ("brands", "colors", "body_types", "seat_counts",
                     "model_years"):
            if not getattr(self, name):
                raise SyntheticSpecError(f"{name} domain must be non-empty")
        unknown = set(self.body_types) - set(vocab.BODY_STYLE_IRIS)
        if unknown:
            raise SyntheticSpecError(
                f"unknown body types {sorted(unknown)}; expected a subset of "
                f"{sorted(vocab.BODY_STYLE_IRIS)}")


def spec_from_json(document: Any) -> SyntheticSpec:
    if not isinstance(document, dict):
        raise SyntheticSpecError("spec must be a JSON object")
    domains = document.get("domains", {})
    if not isinstance(domains, dict):
        raise SyntheticSpecError("domains must be a JSON object")

    def domain(key: str, default: tuple) -> tuple:
        value = domains.get(key)
        if value is None:
            return default
        if not isinstance(value, list) or not value:
            raise SyntheticSpecError(f"domains.{key} must be a non-empty list")
        return tuple(value)

    try:
        return SyntheticSpec(
            vehicles=int(document["vehicles"]),
            users=int(document["users"]),
            seed=int(document.get("seed", 0)),
            solvability=float(document.get("solvability", 0.88)),
            brands=domain("brands", DEFAULT_BRANDS),
            colors=domain("colors", DEFAULT_COLORS),
            body_types=domain("bodyTypes", DEFAULT_BODY_TYPES),
            seat_counts=domain("seats", DEFAULT_SEAT_COUNTS),
            model_years=domain("modelYears", DEFAULT_MODEL_YEARS),
            price_range=tuple(domains.get("priceRange", DEFAULT_PRICE_RANGE)),
            mileage_range=tuple(
                domains.get("mileageRange", DEFAULT_MILEAGE_RANGE)),
        )
    except KeyError as exc:
        raise SyntheticSpecError(f"missing spec key {exc.args[0]!r}") from exc


@dataclass
class Vehicle:
    index: int
    brand: str
    color_token: str
    body: str
    seats: int
    year: int
    price: int
    mileage: float

    @property
    def iri(self) -> str:
        return f"{vocab.UVSO}auto_{self.index:05d}"

    @property
    def color_label(self) -> str:
        return self.color_token.capitalize()

    @property
    def name(self) -> str:
        return f"{self.brand} {self.body} {self.year}"


@dataclass
class GeneratedDataset:
    turtle: str
    profiles: list[PreferenceProfile]
    ledger: dict
    vehicles: list[Vehicle] = field(default_factory=list)


def _make_vehicles(spec: SyntheticSpec, rng: random.Random) -> list[Vehicle]:
    vehicles = []
    for index in range(spec.vehicles):
        vehicles.append(Vehicle(
            index=index,
            brand=rng.choice(spec.brands),
            color_token=rng.choice(spec.colors),
            body=rng.choice(spec.body_types),
            seats=rng.choice(spec.seat_counts),
            year=rng.choice(spec.model_years),
            price=rng.randint(*spec.price_range),
            mileage=round(rng.uniform(*spec.mileage_range), 1),
        ))
    return vehicles


_TTL_HEADER = """@prefix uvso: <{uvso}> .
@prefix uvo: <{uvo}> .
@prefix uvoo: <{uvoo}> .
@prefix rdf: <{rdf}> .
@prefix xsd: <{xsd}> .
@prefix gr: <{gr}> .
""".format(uvso=vocab.UVSO, uvo=vocab.UVO, uvoo=vocab.UVOO, rdf=vocab.RDF,
           xsd=vocab.XSD, gr=vocab.GR)


def _vehicle_turtle(v: Vehicle) -> str:
    auto = f"uvso:auto_{v.index:05d}"
    seats_node = f"uvso:auto_{v.index:05d}_seats"
    mileage_node = f"uvso:auto_{v.index:05d}_mileage"
    eval_node = f"uvso:auto_{v.index:05d}_eval"
    body_iri = "uvso:" + vocab.local_name(vocab.BODY_STYLE_IRIS[v.body])
    return (
        f"{auto} rdf:type uvso:Automobile ;\n"
        f"    uvso:name \"{v.name}\" ;\n"
        f"    uvso:color \"{v.color_label}\" ;\n"
        f"    uvso:seatingCapacity {seats_node} ;\n"
        f"    uvso:hasManufacturer uvso:{v.brand} ;\n"
        f"    uvso:bodyStyle {body_iri} ;\n"
        f"    uvso:mileageFromOdometer {mileage_node} ;\n"
        f"    uvso:modelYear \"{v.year}\"^^xsd:int ;\n"
        f"    uvo:valuation {eval_node} .\n"
        f"{seats_node} gr:hasValueInt \"{v.seats}\"^^xsd:int .\n"
        f"{mileage_node} gr:hasValueFloat \"{v.mileage}\"^^xsd:float .\n"
        f"{eval_node} uvoo:hasCurrencyValue \"{v.price}\"^^xsd:int .\n"
    )


def _solvable_profile(
    user_id: str, witness: Vehicle, spec: SyntheticSpec, rng: random.Random
) -> PreferenceProfile:
    colors = [witness.color_token]
    if len(spec.colors) > 1 and rng.random() < 0.25:
        extra = rng.choice([c for c in spec.colors if c != witness.color_token])
        colors.append(extra)
    assignments: dict[str, Any] = {
        "Seats": witness.seats,
        "VehicleType": witness.body,
        "Brand": witness.brand.lower(),
        "Color": colors,
        "Mileage": int(witness.mileage) + rng.randint(5000, 30000),
        "Price": witness.price + rng.randint(0, 20000),
    }
    if rng.random() < 0.2:
        assignments["Profile"] = rng.choice(vocab.PROFILE_TOKENS)
    return _with_importance(user_id, assignments, rng)


def _unsolvable_profile(
    user_id: str,
    spec: SyntheticSpec,
    rng: random.Random,
    min_price: Optional[int],
) -> PreferenceProfile:
    assignments: dict[str, Any] = {
        "Seats": rng.choice(spec.seat_counts),
        "VehicleType": rng.choice(spec.body_types),
        "Brand": rng.choice(spec.brands).lower(),
        "Color": [rng.choice(spec.colors)],
        "Mileage": int(rng.uniform(*spec.mileage_range)),
        # a budget below the cheapest vehicle blocks every item
        "Price": rng.randint(1, min_price - 1) if min_price else 1,
    }
    return _with_importance(user_id, assignments, rng)


def _with_importance(
    user_id: str, assignments: dict[str, Any], rng: random.Random
) -> PreferenceProfile:
    order = list(assignments)
    rng.shuffle(order)
    importance = {variable: rank for rank, variable in enumerate(order, 1)}
    return PreferenceProfile(user_id, assignments, importance)


def generate_dataset(spec: SyntheticSpec) -> GeneratedDataset:
    rng = random.Random(spec.seed)
    vehicles = _make_vehicles(spec, rng)
    min_price = min((v.price for v in vehicles), default=None)

    parts = [_TTL_HEADER]
    for v in vehicles:
        parts.append("\n" + _vehicle_turtle(v))
    turtle = "".join(parts)

    solvable_count = round(spec.users * spec.solvability)
    profiles: list[PreferenceProfile] = []
    entries = []
    for i in range(spec.users):
        user_id = f"u{i:04d}"
        if i < solvable_count:
            witness = rng.choice(vehicles)
            profiles.append(_solvable_profile(user_id, witness, spec, rng))
            entries.append({"userId": user_id, "witness": witness.iri})
        else:
            profiles.append(_unsolvable_profile(user_id, spec, rng, min_price))
            entries.append({"userId": user_id, "witness": None})

    ledger = {
        "seed": spec.seed,
        "vehicles": spec.vehicles,
        "users": spec.users,
        "plantedSolvability": (
            solvable_count / spec.users if spec.users else 0.0),
        "entries": entries,
    }
    return GeneratedDataset(turtle, profiles, ledger, vehicles)


def generate_synthetic(
    spec: SyntheticSpec, out_dir: str
) -> tuple[Path, Path, Path]:
    """Write data.ttl, profiles.json and ledger.json; returns the paths.
    Identical specs produce byte-identical files."""
    dataset = generate_dataset(spec)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    data_path = out / "data.ttl"
    profiles_path = out / "profiles.json"
    ledger_path = out / "ledger.json"
    data_path.write_text(dataset.turtle, encoding="utf-8")
    profiles_path.write_text(
        json.dumps([profile_to_json(p) for p in dataset.profiles],
                   indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    ledger_path.write_text(
        json.dumps(dataset.ledger, indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    return data_path, profiles_path, ledger_path
