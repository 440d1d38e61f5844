"""HTTP JSON API over the arena.

Handlers stay thin: parse the request, delegate to the arena, serialize
the result. Every module error code maps to exactly one HTTP status via
the table below, and responses for open tickets never carry model
identities (the RoundView type cannot hold them).

Session identity is a bearer token issued when a profile is created; the
admin endpoints take the configured admin token instead. There are no
passwords.
"""

from __future__ import annotations

import secrets
import socket
from contextlib import asynccontextmanager
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from modelarena.config import ArenaConfig
from modelarena.domain import AbilityTrack, ComparativeOutcome, QuestionItem, canonical_dumps
from modelarena.errors import (
    AdminRequired,
    ArenaError,
    AuthInvalid,
    AuthRequired,
    BindFailure,
    ConfigInvalid,
    ConsentRequired,
    InvalidEnum,
)
from modelarena.orchestrator import Arena, VoteSubmission

STATUS_BY_CODE = {
    "MISSING_ID": 400,
    "INVALID_ENUM": 400,
    "UNKNOWN_FIELD": 400,
    "INVALID_PROFILE": 400,
    "CONSENT_REQUIRED": 400,
    "EMPTY_PROMPT": 400,
    "PROMPT_TOO_LONG": 400,
    "SCORE_OUT_OF_RANGE": 400,
    "INVALID_VOTE": 400,
    "NOT_MCQ": 400,
    "NON_FINITE_INPUT": 400,
    "SCHEMA_VIOLATION": 400,
    "UNKNOWN_DIMENSION": 400,
    "MALFORMED_BODY": 400,
    "AUTH_REQUIRED": 401,
    "AUTH_INVALID": 401,
    "ADMIN_REQUIRED": 403,
    "UNKNOWN_TICKET": 404,
    "UNKNOWN_QUESTION": 404,
    "UNKNOWN_MODEL": 404,
    "UNKNOWN_USER": 404,
    "DUPLICATE_VOTE": 409,
    "NOT_YET_VOTED": 409,
    "ALL_SEEN": 409,
    "INSUFFICIENT_MODELS": 409,
    "NO_DOMAINS": 409,
    "DUPLICATE_MODEL": 409,
    "JUDGES_ALREADY_DRAWN": 409,
    "PROVIDER_FAILURE": 502,
    "IO_FAILURE": 500,
    "CORRUPT_LOG": 500,
    "SNAPSHOT_LOG_MISMATCH": 500,
    "CONFIG_INVALID": 500,
    "BIND_FAILURE": 500,
}


def _error_response(code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=STATUS_BY_CODE.get(code, 500),
        content={"error": {"code": code, "message": message}},
    )


def _public_question(q: QuestionItem) -> dict[str, Any]:
    # Clients never receive the answer key.
    rec = q.to_record()
    rec.pop("correct", None)
    return rec


def _parse_track(value: Optional[str]) -> AbilityTrack:
    try:
        return AbilityTrack((value or "").upper())
    except ValueError:
        raise InvalidEnum(f"track must be one of KNOWLEDGE/GENERATIVE/DISCRIMINATIVE, got {value!r}")


def _parse_outcome(value: Any, field: str) -> ComparativeOutcome:
    try:
        return ComparativeOutcome(str(value).upper())
    except ValueError:
        raise InvalidEnum(f"{field} must be a comparative outcome, got {value!r}")


class SessionStore:
    """In-memory bearer tokens; deterministic in seeded test mode."""

    def __init__(self, arena: Arena):
        self._arena = arena
        self._by_token: dict[str, str] = {}

    def issue(self, user_id: str) -> str:
        if self._arena.config.seed is not None:
            token = f"tok-{self._arena.rng.getrandbits(64):016x}"
        else:
            token = secrets.token_hex(16)
        self._by_token[token] = user_id
        return token

    def user_for(self, request: Request) -> str:
        header = request.headers.get("authorization", "")
        if not header.lower().startswith("bearer "):
            raise AuthRequired("missing bearer token")
        token = header[7:].strip()
        user_id = self._by_token.get(token)
        if user_id is None:
            raise AuthInvalid("unrecognized session token")
        return user_id

    def require_user(self, request: Request, user_id: str) -> None:
        if self.user_for(request) != user_id:
            raise AuthInvalid("session token does not belong to this user")


def create_app(arena: Arena) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        arena.snapshot()
        arena.close()

    app = FastAPI(title="modelarena", docs_url=None, redoc_url=None, lifespan=lifespan)
    sessions = SessionStore(arena)
    app.state.arena = arena
    app.state.sessions = sessions
    config = arena.config

    @app.exception_handler(ArenaError)
    async def _arena_error(request: Request, exc: ArenaError):
        return _error_response(exc.code, exc.message)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return _error_response("MALFORMED_BODY", "request body is not valid JSON of the expected shape")

    def _require_admin(request: Request) -> None:
        header = request.headers.get("authorization", "")
        token = header[7:].strip() if header.lower().startswith("bearer ") else ""
        if not token or token != config.admin_token:
            raise AdminRequired("admin token required")

    @app.get("/health")
    async def health():
        return {"status": "ok", "events": arena.state.last_event_id}

    @app.post("/profiles")
    async def upsert_profile(request: Request, body: dict):
        if "consent" not in body:
            raise ConsentRequired("the consent flag must be supplied explicitly")
        user_id = str(body.get("user_id", "") or "").strip()
        if user_id and user_id in arena.state.profiles:
            sessions.require_user(request, user_id)
        profile = arena.upsert_profile(body)
        token = sessions.issue(profile.user_id)
        return {"profile": profile.to_record(), "token": token}

    @app.get("/questions/next")
    async def next_question(request: Request, user_id: str):
        sessions.require_user(request, user_id)
        question = arena.next_question(user_id)
        return {"question": _public_question(question)}

    @app.post("/rounds/centralized")
    async def centralized_round(request: Request, body: dict):
        user_id = str(body.get("user_id", ""))
        sessions.require_user(request, user_id)
        view = arena.run_centralized_round(user_id, str(body.get("question_id", "")))
        return view.to_record()

    @app.post("/rounds/decentralized")
    async def decentralized_round(request: Request, body: dict):
        user_id = str(body.get("user_id", ""))
        sessions.require_user(request, user_id)
        view = arena.run_decentralized_round(user_id, str(body.get("prompt", "")))
        return view.to_record()

    @app.post("/rounds/{ticket_id}/judges")
    async def judge_round(request: Request, ticket_id: str):
        sessions.user_for(request)
        view = arena.run_discriminative_round(ticket_id)
        return view.to_record()

    @app.post("/votes")
    async def submit_vote(request: Request, body: dict):
        user_id = str(body.get("user_id", ""))
        sessions.require_user(request, user_id)
        vote = VoteSubmission(
            ticket_id=str(body.get("ticket_id", "")),
            user_id=user_id,
            outcome=_parse_outcome(body.get("outcome"), "outcome"),
            score_a=body.get("score_a"),
            score_b=body.get("score_b"),
            judge_outcome=_parse_outcome(body["judge_outcome"], "judge_outcome")
            if body.get("judge_outcome") is not None
            else None,
            judge_score_c=body.get("judge_score_c"),
            judge_score_d=body.get("judge_score_d"),
        )
        deltas = arena.submit_vote(vote)
        return {"deltas": deltas}

    @app.get("/rounds/{ticket_id}/reveal")
    async def reveal(ticket_id: str):
        return {"assignment": arena.reveal(ticket_id)}

    @app.get("/leaderboard")
    async def leaderboard(track: Optional[str] = None):
        parsed = _parse_track(track)
        entries = arena.leaderboard(parsed)
        return {"track": parsed.value, "entries": [e.to_record() for e in entries]}

    @app.get("/analytics/crowd")
    async def crowd(dimension: str = "", track: Optional[str] = None):
        breakdown = arena.crowd_breakdown(dimension, _parse_track(track))
        return breakdown.to_record()

    @app.get("/models/{model_id}/accuracy")
    async def accuracy(model_id: str):
        return {"model_id": model_id, "table": arena.accuracy_table(model_id)}

    @app.post("/admin/models")
    async def admin_register_model(request: Request, body: dict):
        _require_admin(request)
        entry = arena.register_model(
            display_name=str(body.get("display_name", "")),
            provider_ref=str(body.get("provider_ref", "")),
            model_id=body.get("model_id"),
        )
        return {"model": entry.to_record()}

    @app.post("/admin/questions")
    async def admin_ingest_questions(request: Request, body: dict):
        _require_admin(request)
        records = body.get("records", [])
        lines = [canonical_dumps(rec) for rec in records]
        report = arena.ingest_questions(lines)
        return report.to_record()

    return app


def serve(config: ArenaConfig) -> None:
    """Run the service until interrupted; flushes the log on shutdown."""
    import uvicorn

    if not config.admin_token:
        raise ConfigInvalid("admin_token must be configured to serve")
    arena = Arena(config)
    arena.validate_providers()
    app = create_app(arena)

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((config.host, config.port))
    except OSError as exc:
        sock.close()
        raise BindFailure(f"cannot bind {config.host}:{config.port}: {exc}")

    server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))
    try:
        server.run(sockets=[sock])
    finally:
        sock.close()
