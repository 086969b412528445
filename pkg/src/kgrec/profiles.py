"""User preference profiles and their JSON document format.

The document is a flat record::

    {"userId": "...",
     "preferences": {"seats": 5, "vehicleType": "sedan", "brand": "audi",
                     "color": ["black"], "maxMileage": 100000,
                     "maxBudget": 35000, "profile": "parentProfile"},
     "importance": ["maxBudget", "seats", "color", ...]}

All preference keys are optional; the importance list must order exactly
the keys that are present (first entry = rank 1 = most important).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .vocab import BODY_STYLE_IRIS, PROFILE_TOKENS

# JSON preference key -> user variable name
PREFERENCE_KEYS = {
    "seats": "Seats",
    "vehicleType": "VehicleType",
    "brand": "Brand",
    "color": "Color",
    "maxMileage": "Mileage",
    "maxBudget": "Price",
    "profile": "Profile",
}
VARIABLE_TO_KEY = {var: key for key, var in PREFERENCE_KEYS.items()}

USER_VARIABLES = tuple(PREFERENCE_KEYS.values())


class ProfileError(ValueError):
    def __init__(self, fieldname: str, reason: str) -> None:
        super().__init__(f"{fieldname}: {reason}")
        self.field = fieldname
        self.reason = reason


@dataclass
class PreferenceProfile:
    user_id: str
    assignments: dict[str, Any] = field(default_factory=dict)
    importance: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        assigned = set(self.assignments)
        ranked = set(self.importance)
        if assigned != ranked:
            missing = assigned - ranked or ranked - assigned
            raise ProfileError(
                "importance",
                f"importance ranks must cover exactly the assigned "
                f"preferences (mismatch: {sorted(missing)})")
        ranks = sorted(self.importance.values())
        if ranks != list(range(1, len(ranks) + 1)):
            raise ProfileError(
                "importance", f"ranks must be a permutation of 1..k, got {ranks}")
        for variable, value in self.assignments.items():
            _validate_value(variable, value)

    def rank(self, variable: str) -> int:
        return self.importance[variable]


def _validate_value(variable: str, value: Any) -> None:
    fieldname = "preferences." + VARIABLE_TO_KEY.get(variable, variable)
    if variable == "Seats":
        if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
            raise ProfileError(fieldname, f"must be a positive integer, got {value!r}")
    elif variable == "Mileage":
        if not isinstance(value, (int, float)) or isinstance(value, bool) or value < 0:
            raise ProfileError(fieldname, f"must be a non-negative number, got {value!r}")
    elif variable == "Price":
        if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
            raise ProfileError(fieldname, f"must be a positive number, got {value!r}")
    elif variable == "VehicleType":
        if value not in BODY_STYLE_IRIS:
            raise ProfileError(
                fieldname,
                f"unknown vehicle type {value!r}, expected one of "
                f"{sorted(BODY_STYLE_IRIS)}")
    elif variable == "Brand":
        if not isinstance(value, str) or not value.strip():
            raise ProfileError(fieldname, "must be a non-empty string")
    elif variable == "Color":
        if (not isinstance(value, list) or not value
                or not all(isinstance(c, str) and c.strip() for c in value)):
            raise ProfileError(
                fieldname, "must be a non-empty list of non-empty strings")
    elif variable == "Profile":
        if value not in PROFILE_TOKENS:
            raise ProfileError(
                fieldname,
                f"unknown profile {value!r}, expected one of "
                f"{sorted(PROFILE_TOKENS)}")
    else:
        raise ProfileError(fieldname, f"unknown preference variable {variable!r}")


def profile_from_json(document: Any) -> PreferenceProfile:
    if not isinstance(document, dict):
        raise ProfileError("$", "profile document must be a JSON object")
    unknown = set(document) - {"userId", "preferences", "importance"}
    if unknown:
        raise ProfileError(sorted(unknown)[0], "unexpected key")
    user_id = document.get("userId")
    if not isinstance(user_id, str) or not user_id:
        raise ProfileError("userId", "must be a non-empty string")
    preferences = document.get("preferences", {})
    if not isinstance(preferences, dict):
        raise ProfileError("preferences", "must be a JSON object")
    assignments: dict[str, Any] = {}
    for key, value in preferences.items():
        variable = PREFERENCE_KEYS.get(key)
        if variable is None:
            raise ProfileError(
                f"preferences.{key}",
                f"unknown preference, expected one of {sorted(PREFERENCE_KEYS)}")
        assignments[variable] = value
    importance_list = document.get("importance", [])
    if (not isinstance(importance_list, list)
            or not all(isinstance(k, str) for k in importance_list)):
        raise ProfileError("importance", "must be a list of preference names")
    if len(set(importance_list)) != len(importance_list):
        raise ProfileError("importance", "duplicate preference names")
    importance: dict[str, int] = {}
    for position, key in enumerate(importance_list, start=1):
        variable = PREFERENCE_KEYS.get(key)
        if variable is None:
            raise ProfileError(
                "importance",
                f"unknown preference {key!r}, expected one of "
                f"{sorted(PREFERENCE_KEYS)}")
        importance[variable] = position
    return PreferenceProfile(user_id, assignments, importance)


def profile_to_json(profile: PreferenceProfile) -> dict:
    by_rank = sorted(profile.importance.items(), key=lambda kv: kv[1])
    return {
        "userId": profile.user_id,
        "preferences": {
            VARIABLE_TO_KEY[var]: value
            for var, value in profile.assignments.items()
        },
        "importance": [VARIABLE_TO_KEY[var] for var, _ in by_rank],
    }
