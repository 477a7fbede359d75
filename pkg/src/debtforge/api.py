"""HTTP facade: manager and developer views over the engine.

Auth is a static bearer-token table (tokens are declared alongside developers
in the project document); every project-scoped route requires one.  Developers
can only read their own feed, dashboard, and suggestions — peer activity is
visible solely through the anonymized feed entries and the named leaderboard.
All mutating routes honor an ``Idempotency-Key`` header: a replay returns the
stored original response.
"""

from __future__ import annotations

import threading
from typing import Any, Callable, Optional

from fastapi import FastAPI, Header, Query, Request, Response
from fastapi.responses import JSONResponse

from .engine import Engine
from .errors import (
    AlreadySettled,
    BindFailure,
    ContestAlreadyOpen,
    ContestClosed,
    ContestNotOpen,
    DanglingParent,
    DebtForgeError,
    DuplicateConflict,
    EmptyObjectives,
    InvalidWindow,
    MalformedReport,
    NonParticipant,
    NotAManager,
    NoSnapshot,
    PendingLimitExceeded,
    SchemaMismatch,
    StorageFailure,
    Unauthenticated,
    UnknownCommit,
    UnknownContest,
    UnknownDeveloper,
    UnknownPlan,
    UnknownProject,
    WindowNotEnded,
    WindowOutsideContest,
)
from .model import Developer, parse_utc, utc_now
from .schemas import RESPONSE_SCHEMAS

_STATUS_BY_ERROR: dict[type, int] = {
    Unauthenticated: 401,
    NotAManager: 403,
    UnknownProject: 404,
    UnknownCommit: 404,
    UnknownContest: 404,
    UnknownPlan: 404,
    UnknownDeveloper: 404,
    NoSnapshot: 404,
    SchemaMismatch: 400,
    InvalidWindow: 400,
    WindowOutsideContest: 400,
    EmptyObjectives: 400,
    MalformedReport: 400,
    PendingLimitExceeded: 429,
    DuplicateConflict: 409,
    DanglingParent: 409,
    ContestAlreadyOpen: 409,
    ContestClosed: 409,
    ContestNotOpen: 409,
    AlreadySettled: 409,
    WindowNotEnded: 409,
    NonParticipant: 409,
    StorageFailure: 503,
}


def _status_for(error: DebtForgeError) -> int:
    return _STATUS_BY_ERROR.get(type(error), 500)


class _IdempotencyCache:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._responses: dict[tuple[str, str, str], tuple[int, Any]] = {}

    def get(self, method: str, path: str, key: str) -> Optional[tuple[int, Any]]:
        with self._lock:
            return self._responses.get((method, path, key))

    def put(self, method: str, path: str, key: str, status: int, body: Any) -> None:
        with self._lock:
            self._responses[(method, path, key)] = (status, body)


async def _body(request: Request) -> dict[str, Any]:
    try:
        doc = await request.json()
    except Exception as exc:
        raise SchemaMismatch(f"request body is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaMismatch("request body must be a JSON object")
    return doc


def create_app(engine: Engine, admin_token: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="debtforge", docs_url=None, redoc_url=None)
    cache = _IdempotencyCache()

    @app.exception_handler(DebtForgeError)
    async def _handle_domain_error(request: Request, error: DebtForgeError):
        return JSONResponse(status_code=_status_for(error), content=error.to_doc())

    def _bearer(authorization: Optional[str]) -> str:
        if not authorization or not authorization.startswith("Bearer "):
            raise Unauthenticated("missing bearer token")
        return authorization[len("Bearer ") :]

    def caller(project_id: str, authorization: Optional[str] = Header(default=None)) -> Developer:
        token = _bearer(authorization)
        try:
            return engine.authenticate(project_id, token)
        except UnknownDeveloper as exc:
            raise Unauthenticated("token not recognized") from exc

    def require_manager(developer: Developer) -> Developer:
        if not developer.is_manager:
            raise NotAManager("manager role required")
        return developer

    def require_self_or_manager(developer: Developer, developer_id: str) -> None:
        if developer.developer_id != developer_id and not developer.is_manager:
            raise NotAManager("this view belongs to another developer")

    def idempotent(
        request: Request,
        idempotency_key: Optional[str],
        produce: Callable[[], Any],
        status: int = 200,
    ) -> Response:
        method, path = request.method, request.url.path
        if idempotency_key:
            hit = cache.get(method, path, idempotency_key)
            if hit is not None:
                return JSONResponse(status_code=hit[0], content=hit[1])
        body = produce()
        if idempotency_key:
            cache.put(method, path, idempotency_key, status, body)
        return JSONResponse(status_code=status, content=body)

    # -- service ----------------------------------------------------------

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok", "projects": len(engine.project_ids())}

    @app.get("/schemas")
    async def schemas():
        return RESPONSE_SCHEMAS

    # -- projects ------------------------------------------------------------

    @app.post("/projects")
    async def create_project(
        request: Request,
        authorization: Optional[str] = Header(default=None),
        idempotency_key: Optional[str] = Header(default=None),
    ):
        if admin_token is not None and _bearer(authorization) != admin_token:
            raise Unauthenticated("admin token required")
        doc = await _body(request)
        return idempotent(
            request, idempotency_key, lambda: engine.create_project(doc), status=201
        )

    # -- ingestion -------------------------------------------------------------

    @app.post("/projects/{project_id}/baseline")
    async def declare_baseline(
        project_id: str,
        request: Request,
        authorization: Optional[str] = Header(default=None),
        idempotency_key: Optional[str] = Header(default=None),
    ):
        caller(project_id, authorization)
        doc = await _body(request)
        return idempotent(
            request, idempotency_key, lambda: engine.declare_baseline(project_id, doc)
        )

    @app.post("/projects/{project_id}/commits")
    async def submit_commit(
        project_id: str,
        request: Request,
        authorization: Optional[str] = Header(default=None),
        idempotency_key: Optional[str] = Header(default=None),
    ):
        caller(project_id, authorization)
        doc = await _body(request)
        return idempotent(
            request, idempotency_key, lambda: engine.submit_bundle(project_id, doc)
        )

    @app.post("/projects/{project_id}/rebaseline")
    async def rebaseline(
        project_id: str,
        request: Request,
        authorization: Optional[str] = Header(default=None),
        idempotency_key: Optional[str] = Header(default=None),
    ):
        require_manager(caller(project_id, authorization))
        doc = await _body(request)
        return idempotent(
            request, idempotency_key, lambda: engine.rebaseline(project_id, doc)
        )

    # -- scoring config ----------------------------------------------------

    @app.get("/projects/{project_id}/scoring-config")
    async def get_scoring_config(
        project_id: str, authorization: Optional[str] = Header(default=None)
    ):
        caller(project_id, authorization)
        return engine.get_scoring_config(project_id)

    @app.put("/projects/{project_id}/scoring-config")
    async def put_scoring_config(
        project_id: str,
        request: Request,
        authorization: Optional[str] = Header(default=None),
        idempotency_key: Optional[str] = Header(default=None),
    ):
        require_manager(caller(project_id, authorization))
        doc = await _body(request)
        return idempotent(
            request, idempotency_key, lambda: engine.put_scoring_config(project_id, doc)
        )

    # -- contests -----------------------------------------------------------

    @app.post("/projects/{project_id}/contests")
    async def open_contest(
        project_id: str,
        request: Request,
        authorization: Optional[str] = Header(default=None),
        idempotency_key: Optional[str] = Header(default=None),
    ):
        require_manager(caller(project_id, authorization))
        doc = await _body(request)

        def produce():
            starts_raw = doc.get("starts_at")
            ends_raw = doc.get("ends_at")
            try:
                starts_at = parse_utc(starts_raw) if starts_raw else None
                ends_at = parse_utc(ends_raw) if ends_raw else None
            except ValueError as exc:
                raise SchemaMismatch(f"invalid contest window: {exc}") from exc
            if starts_at is None:
                starts_at = utc_now()
            return engine.open_contest(
                project_id, starts_at, ends_at, contest_id=doc.get("contest_id")
            )

        return idempotent(request, idempotency_key, produce, status=201)

    @app.post("/projects/{project_id}/contests/{contest_id}/close")
    async def close_contest(
        project_id: str,
        contest_id: str,
        request: Request,
        authorization: Optional[str] = Header(default=None),
        idempotency_key: Optional[str] = Header(default=None),
    ):
        require_manager(caller(project_id, authorization))
        doc = await _body(request) if int(request.headers.get("content-length") or 0) else {}

        def produce():
            closed_raw = doc.get("closed_at")
            try:
                closed_at = parse_utc(closed_raw) if closed_raw else None
            except ValueError as exc:
                raise SchemaMismatch(f"invalid closed_at: {exc}") from exc
            return engine.close_contest(project_id, contest_id, now=closed_at)

        return idempotent(request, idempotency_key, produce)

    @app.get("/projects/{project_id}/contests/{contest_id}/leaderboard")
    async def leaderboard(
        project_id: str,
        contest_id: str,
        authorization: Optional[str] = Header(default=None),
    ):
        caller(project_id, authorization)
        return engine.leaderboard(project_id, contest_id)

    # -- plans ----------------------------------------------------------------

    @app.post("/projects/{project_id}/plans")
    async def create_plan(
        project_id: str,
        request: Request,
        authorization: Optional[str] = Header(default=None),
        idempotency_key: Optional[str] = Header(default=None),
    ):
        manager = require_manager(caller(project_id, authorization))
        doc = await _body(request)
        return idempotent(
            request,
            idempotency_key,
            lambda: engine.create_plan(project_id, manager.developer_id, doc),
            status=201,
        )

    @app.get("/projects/{project_id}/plans/{plan_id}")
    async def get_plan(
        project_id: str,
        plan_id: str,
        authorization: Optional[str] = Header(default=None),
    ):
        caller(project_id, authorization)
        return engine.get_plan(project_id, plan_id)

    # -- adjustments -------------------------------------------------------------

    @app.post("/projects/{project_id}/adjustments")
    async def apply_adjustment(
        project_id: str,
        request: Request,
        authorization: Optional[str] = Header(default=None),
        idempotency_key: Optional[str] = Header(default=None),
    ):
        manager = require_manager(caller(project_id, authorization))
        doc = await _body(request)

        def produce():
            if "developer_id" not in doc or "delta" not in doc:
                raise SchemaMismatch("adjustment requires developer_id and delta")
            if not isinstance(doc["delta"], int) or isinstance(doc["delta"], bool):
                raise SchemaMismatch("delta must be an integer")
            return engine.apply_adjustment(
                project_id,
                issued_by=manager.developer_id,
                developer_id=doc["developer_id"],
                delta=doc["delta"],
                reason=doc.get("reason", ""),
                contest_id=doc.get("contest_id"),
            )

        return idempotent(request, idempotency_key, produce, status=201)

    # -- developer views ----------------------------------------------------

    @app.get("/projects/{project_id}/developers/{developer_id}/feed")
    async def feed(
        project_id: str,
        developer_id: str,
        page: int = Query(default=1, ge=1),
        page_size: int = Query(default=20, ge=1, le=200),
        authorization: Optional[str] = Header(default=None),
    ):
        viewer = caller(project_id, authorization)
        require_self_or_manager(viewer, developer_id)
        return engine.newsfeed(project_id, developer_id, page=page, page_size=page_size)

    @app.get("/projects/{project_id}/developers/{developer_id}/dashboard")
    async def dashboard(
        project_id: str,
        developer_id: str,
        authorization: Optional[str] = Header(default=None),
    ):
        viewer = caller(project_id, authorization)
        require_self_or_manager(viewer, developer_id)
        return engine.dashboard(project_id, developer_id)

    @app.get("/projects/{project_id}/developers/{developer_id}/suggestions")
    async def suggestions(
        project_id: str,
        developer_id: str,
        last_n_commits: int = Query(default=5, ge=1, le=50),
        authorization: Optional[str] = Header(default=None),
    ):
        viewer = caller(project_id, authorization)
        require_self_or_manager(viewer, developer_id)
        return engine.personalized_suggestions(
            project_id, developer_id, last_n_commits=last_n_commits
        )

    @app.get("/projects/{project_id}/suggestions/treemap")
    async def treemap(
        project_id: str, authorization: Optional[str] = Header(default=None)
    ):
        caller(project_id, authorization)
        doc = engine.treemap(project_id)
        doc["rule_ranking"] = engine.rule_reward_ranking(project_id)
        return doc

    # -- manager views ------------------------------------------------------

    @app.get("/projects/{project_id}/overview")
    async def overview(
        project_id: str,
        contest: Optional[str] = Query(default=None),
        authorization: Optional[str] = Header(default=None),
    ):
        viewer = caller(project_id, authorization)
        return engine.manager_overview(project_id, viewer.developer_id, contest_id=contest)

    return app


def serve(
    data_dir: str,
    host: str = "127.0.0.1",
    port: int = 8385,
    admin_token: Optional[str] = None,
) -> None:
    """Run the service until interrupted; storage must not be held elsewhere."""
    import uvicorn

    from .store import FileEventStore

    engine = Engine(FileEventStore(data_dir))
    app = create_app(engine, admin_token=admin_token)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except OSError as exc:
        raise BindFailure(f"cannot bind {host}:{port}: {exc}") from exc
    finally:
        engine.close()
