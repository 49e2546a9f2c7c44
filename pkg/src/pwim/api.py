"""HTTP/JSON binding of the play service.

Endpoints:
    POST /api/session                {"domain": "bar"}
    GET  /api/session/{id}
    POST /api/session/{id}/intent    {"text": "..."}
    POST /api/session/{id}/act       {"action_id": "...", "step": N,
                                      "intent_text": "..."?}

Errors are always ``{"error": "<code>", "detail": "..."}``.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from .errors import PwimError
from .service import PlayService, Session

STATUS_BY_CODE = {
    "no-session": 404,
    "unknown-domain": 404,
    "unknown-action": 404,
    "stale-action": 409,
    "empty-intent": 400,
    "malformed-fact": 400,
    "schema-error": 400,
    "missing-binding": 400,
    "unsafe-pattern": 400,
    "corrupt-save": 400,
    "provider-unavailable": 503,
    "dimension-mismatch": 502,
    "zero-vector": 502,
}


class CreateSessionBody(BaseModel):
    domain: str


class IntentBody(BaseModel):
    text: str


class ActBody(BaseModel):
    action_id: str
    step: int
    intent_text: str | None = None


def _actions_payload(actions) -> list[dict]:
    return [
        {"action_id": a.action_id, "summary": a.summary} for a in actions
    ]


def _session_payload(service: PlayService, session: Session) -> dict:
    return {
        "session_id": session.session_id,
        "step": session.step,
        "actions": _actions_payload(service.available_actions(session)),
    }


def create_app(service: PlayService, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="pwim", docs_url=None, redoc_url=None)

    @app.exception_handler(PwimError)
    async def pwim_error(request: Request, exc: PwimError):
        status = STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(
            status_code=status,
            content={"error": exc.code, "detail": str(exc)},
        )

    @app.exception_handler(RequestValidationError)
    async def bad_request(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "bad-request", "detail": str(exc.errors())},
        )

    @app.exception_handler(StarletteHTTPException)
    async def http_error(request: Request, exc: StarletteHTTPException):
        return JSONResponse(
            status_code=exc.status_code,
            content={"error": "not-found" if exc.status_code == 404 else "http-error",
                     "detail": str(exc.detail)},
        )

    @app.post("/api/session")
    def create_session(body: CreateSessionBody):
        session = service.create_session(body.domain)
        return _session_payload(service, session)

    @app.get("/api/session/{session_id}")
    def get_session(session_id: str):
        session = service.get_session(session_id)
        payload = _session_payload(service, session)
        payload["facts"] = session.db.render()
        payload["transcript"] = [e.to_dict() for e in session.transcript]
        return payload

    @app.post("/api/session/{session_id}/intent")
    def submit_intent(session_id: str, body: IntentBody):
        ranked = service.submit_intent(session_id, body.text)
        session = service.get_session(session_id)
        return {
            "step": session.step,
            "ranked": [
                {
                    "action_id": r.action.action_id,
                    "summary": r.action.summary,
                    "similarity": r.similarity,
                    "intensity": r.intensity,
                    "enlarged": r.enlarged,
                }
                for r in ranked
            ],
        }

    @app.post("/api/session/{session_id}/act")
    def act(session_id: str, body: ActBody):
        event, actions = service.perform_action(
            session_id,
            body.action_id,
            step=body.step,
            intent_text=body.intent_text,
        )
        return {"event": event.to_dict(), "actions": _actions_payload(actions)}

    @app.get("/api/domains")
    def list_domains():
        return {"domains": sorted(service.domains)}

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
