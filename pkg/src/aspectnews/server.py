"""Read-only HTTP service over a built corpus store.

The service never exposes full article text: snippet responses carry only
the display fragment (160 characters at most) plus metadata and the
outbound archive link. All responses are pure functions of the store.
"""
from __future__ import annotations

import logging
from pathlib import Path

import uvicorn
from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles

from .store import CorpusStore

logger = logging.getLogger(__name__)


def _not_found(reason: str, **ids) -> HTTPException:
    return HTTPException(status_code=404, detail={"reason": reason, **ids})


def create_app(store: CorpusStore, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="aspectnews", version=store.manifest.get("version", "0"))
    labels_by_cluster = {c["cluster_id"]: c["labels"] for c in store.clusters}

    def person_or_404(person_id: str) -> dict:
        doc = store.persons.get(person_id)
        if doc is None:
            raise _not_found("unknown person", person_id=person_id)
        return doc

    def role_or_404(doc: dict, person_id: str, role: str) -> dict:
        for entry in doc["roles"]:
            if entry["role"] == role:
                return entry
        raise _not_found("unknown role", person_id=person_id, role=role)

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "manifest_digest": store.manifest["digest"]}

    @app.get("/api/persons")
    def persons() -> list[dict]:
        result = []
        for person_id in sorted(store.persons):
            profile = store.persons[person_id]["profile"]
            result.append(
                {
                    "person_id": person_id,
                    "full_name": profile["full_name"],
                    "lifespan": f"{profile['birth_year']}-{profile['death_year']}",
                    "role_count": len(store.persons[person_id]["roles"]),
                }
            )
        return result

    @app.get("/api/persons/{person_id}")
    def person(person_id: str) -> dict:
        doc = person_or_404(person_id)
        return {
            "profile": doc["profile"],
            "roles": [
                {"role": entry["role"], "aspect_count": len(entry["aspects"])}
                for entry in doc["roles"]
            ],
        }

    @app.get("/api/persons/{person_id}/roles/{role}")
    def role_aspects(person_id: str, role: str) -> dict:
        doc = person_or_404(person_id)
        entry = role_or_404(doc, person_id, role)
        return {
            "person_id": person_id,
            "role": role,
            "aspects": [
                {
                    "aspect": aspect["aspect"],
                    "labels": labels_by_cluster.get(aspect["aspect"], [aspect["aspect"]]),
                    "snippet_count": len(aspect["snippets"]),
                }
                for aspect in entry["aspects"]
            ],
        }

    @app.get("/api/persons/{person_id}/roles/{role}/aspects/{aspect}")
    def aspect_view(person_id: str, role: str, aspect: str) -> dict:
        doc = person_or_404(person_id)
        entry = role_or_404(doc, person_id, role)
        for aspect_entry in entry["aspects"]:
            if aspect_entry["aspect"] == aspect:
                summary = aspect_entry["summary"]
                return {
                    "person_id": person_id,
                    "role": role,
                    "aspect": aspect,
                    "labels": labels_by_cluster.get(aspect, [aspect]),
                    "summary": (
                        {"sentences": summary["sentences"], "k_used": summary["k_used"]}
                        if summary
                        else None
                    ),
                    "metrics": summary["metrics"] if summary else None,
                    "snippets": [
                        {
                            "fragment": s["fragment"],
                            "probability": s["probability"],
                            "article_id": s["article_id"],
                            "date": s["date"],
                            "newspaper": s["newspaper"],
                            "external_url": s["external_url"],
                        }
                        for s in aspect_entry["snippets"]
                    ],
                }
        raise _not_found("unknown aspect", person_id=person_id, role=role, aspect=aspect)

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    return app


def serve(
    store_dir: str | Path, port: int = 8000, ui_dir: str | Path | None = None
) -> None:
    """Load (and digest-verify) a store, then serve it until interrupted."""
    store = CorpusStore.load(store_dir, verify=True)
    app = create_app(store, ui_dir=ui_dir)
    logger.info("serving store %s on port %d", store_dir, port)
    uvicorn.run(app, host="0.0.0.0", port=port, log_level="info")
