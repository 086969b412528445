"""HTTP facade: four JSON endpoints over a shared frozen engine."""

from __future__ import annotations

from typing import Any

from fastapi import Body, FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from .engine import RecommenderEngine
from .profiles import ProfileError, profile_from_json


def _parse_request(payload: Any) -> tuple[dict, Any, Any]:
    """Split transport-level keys (topN, delta) from the profile body."""
    if not isinstance(payload, dict):
        raise HTTPException(
            status_code=400,
            detail={"field": "$", "reason": "request body must be a JSON object"})
    body = dict(payload)
    top_n = body.pop("topN", None)
    delta = body.pop("delta", None)
    if top_n is not None and (not isinstance(top_n, int) or top_n < 1):
        raise HTTPException(
            status_code=400,
            detail={"field": "topN", "reason": "must be a positive integer"})
    return body, top_n, delta


def create_app(engine: RecommenderEngine) -> FastAPI:
    app = FastAPI(title="kgrec", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/health")
    def health() -> dict:
        return engine.health()

    @app.get("/vocabulary")
    def vocabulary() -> dict:
        return engine.vocabulary()

    @app.post("/recommend")
    def recommend(payload: dict = Body(...)) -> dict:
        body, top_n, _ = _parse_request(payload)
        try:
            profile = profile_from_json(body)
        except ProfileError as exc:
            raise HTTPException(
                status_code=400,
                detail={"field": exc.field, "reason": exc.reason}) from exc
        return engine.recommend(profile, top_n)

    @app.post("/diagnose")
    def diagnose(payload: dict = Body(...)) -> dict:
        body, top_n, delta = _parse_request(payload)
        if delta is None or not isinstance(delta, list) or not all(
                isinstance(name, str) for name in delta):
            raise HTTPException(
                status_code=400,
                detail={"field": "delta",
                        "reason": "must be a list of constraint names"})
        try:
            profile = profile_from_json(body)
        except ProfileError as exc:
            raise HTTPException(
                status_code=400,
                detail={"field": exc.field, "reason": exc.reason}) from exc
        try:
            return engine.diagnose(profile, delta, top_n)
        except KeyError as exc:
            raise HTTPException(
                status_code=400,
                detail={"field": "delta", "reason": exc.args[0]}) from exc

    return app
