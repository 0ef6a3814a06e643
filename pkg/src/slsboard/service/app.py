"""HTTP service over a durable leaderboard store.

All read endpoints serve immutable snapshots, so a response is always a
consistent view even while submissions arrive concurrently. Responses
whose bodies are also produced by the CLI (leaderboard, frontier,
impact, describe, taxonomy) are serialized through
:mod:`slsboard.render`, byte for byte.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Header, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import render
from ..analysis import NoData, frontier_report, impact
from ..board import (
    InvalidBound,
    Leaderboard,
    filter_board,
    parse_level_range,
)
from ..core import Dimension, MalformedTag, LevelOutOfRange, parse_tag
from ..store import (
    Store,
    StorageFailure,
    UnknownSubmission,
    UnknownTask,
    ValidationFailed,
)
from ..taxonomy import (
    InvalidOverride,
    MissingMetricSchema,
    ProfileParseError,
    canonical_taxonomy,
    load_profile,
)
from .schemas import (
    ErrorBody,
    IssueOut,
    SubmissionIn,
    SubmitAccepted,
    TaskList,
    TaskRegistration,
    TaskSummary,
)

API_PREFIX = "/v1"


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details: list | None = None):
        self.status = status
        self.code = code
        self.message = message
        self.details = details or []
        super().__init__(message)


def _json_response(payload: dict, status_code: int = 200) -> Response:
    return Response(
        content=render.dumps(payload),
        media_type="application/json",
        status_code=status_code,
    )


def _level_param(name: str, value: int | None) -> int | None:
    if value is None:
        return None
    if not 0 <= value <= 5:
        raise ApiError(400, "InvalidQueryParameter", f"{name} must be within 0..5")
    return value


def _parse_tag_param(tag: str | None):
    if not tag:
        raise ApiError(400, "InvalidQueryParameter", "query parameter 'tag' is required")
    try:
        return parse_tag(tag)
    except (MalformedTag, LevelOutOfRange) as exc:
        raise ApiError(
            400,
            "InvalidQueryParameter",
            str(exc),
            details=[IssueOut(code=type(exc).__name__, message=str(exc), field="tag")],
        ) from exc


def create_app(store: Store | str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    if not isinstance(store, Store):
        store = Store(store)

    app = FastAPI(title="slsboard", version="0.1.0")
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError) -> JSONResponse:
        body = ErrorBody(code=exc.code, message=exc.message, details=exc.details)
        return JSONResponse(status_code=exc.status, content=body.model_dump())

    @app.exception_handler(RequestValidationError)
    async def _request_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        code = "InvalidQueryParameter" if request.method == "GET" else "ValidationFailed"
        details = [
            IssueOut(
                code="InvalidField",
                message=str(e.get("msg", "invalid value")),
                field=".".join(str(p) for p in e.get("loc", []) if p != "body") or None,
            )
            for e in exc.errors()
        ]
        body = ErrorBody(code=code, message="request is not valid", details=details)
        return JSONResponse(status_code=422, content=body.model_dump())

    def _task_state(task_id: str):
        try:
            return store.task(task_id)
        except UnknownTask as exc:
            raise ApiError(404, "UnknownTask", str(exc)) from exc

    def _check_token(state, token: str | None) -> None:
        if state.submission_token is not None and token != state.submission_token:
            raise ApiError(401, "InvalidToken", "missing or wrong submission token")

    def _filtered_board(
        board: Leaderboard,
        pt_min,
        pt_max,
        tl_min,
        tl_max,
        td_min,
        td_max,
        metric,
        metric_min,
        metric_max,
    ) -> Leaderboard:
        sls_bounds = {}
        for dimension, lo, hi in (
            (Dimension.PT, pt_min, pt_max),
            (Dimension.TL, tl_min, tl_max),
            (Dimension.TD, td_min, td_max),
        ):
            lo = _level_param(f"{dimension.value.lower()}_min", lo)
            hi = _level_param(f"{dimension.value.lower()}_max", hi)
            if lo is not None or hi is not None:
                sls_bounds[dimension] = (lo, hi)
        metric_bounds = {}
        if metric_min is not None or metric_max is not None:
            name = metric or board.schema.primary_metric
            metric_bounds[name] = (metric_min, metric_max)
        elif metric is not None and metric not in board.schema.names:
            raise ApiError(400, "InvalidQueryParameter", f"unknown metric {metric!r}")
        try:
            return filter_board(board, sls_bounds, metric_bounds)
        except InvalidBound as exc:
            raise ApiError(400, "InvalidQueryParameter", str(exc)) from exc

    @app.get(f"{API_PREFIX}/tasks", response_model=TaskList)
    def list_tasks() -> TaskList:
        tasks = [
            TaskSummary(
                task_id=tid,
                task_name=store.task(tid).profile.task_name,
                submissions=len(store.task(tid).submissions),
            )
            for tid in store.task_ids()
        ]
        return TaskList(tasks=tasks)

    @app.post(f"{API_PREFIX}/tasks", status_code=201)
    def register_task(body: TaskRegistration) -> Response:
        try:
            profile = load_profile(body.profile)
        except (ProfileParseError, InvalidOverride, MissingMetricSchema) as exc:
            raise ApiError(
                422,
                "ValidationFailed",
                "profile document is not valid",
                details=[IssueOut(code=type(exc).__name__, message=str(exc))],
            ) from exc
        try:
            store.register_task(
                profile,
                submission_token=body.submission_token,
                entries_quota=body.entries_quota,
            )
        except StorageFailure as exc:
            raise ApiError(500, "StorageFailure", str(exc)) from exc
        return _json_response({"task_id": profile.task_id, "registered": True}, 201)

    @app.get(f"{API_PREFIX}/tasks/{{task_id}}/leaderboard")
    def leaderboard(
        task_id: str,
        pt_min: int | None = None,
        pt_max: int | None = None,
        tl_min: int | None = None,
        tl_max: int | None = None,
        td_min: int | None = None,
        td_max: int | None = None,
        metric: str | None = None,
        metric_min: float | None = None,
        metric_max: float | None = None,
        format: str = "json",
    ) -> Response:
        state = _task_state(task_id)
        board = _filtered_board(
            state.board,
            pt_min, pt_max, tl_min, tl_max, td_min, td_max,
            metric, metric_min, metric_max,
        )
        if format == "json":
            return _json_response(render.leaderboard_payload(board))
        if format == "text":
            return Response(content=render.render_text(board), media_type="text/plain; charset=utf-8")
        if format == "html":
            return Response(content=render.render_html(board), media_type="text/html; charset=utf-8")
        raise ApiError(400, "InvalidQueryParameter", f"unknown format {format!r}")

    @app.post(f"{API_PREFIX}/tasks/{{task_id}}/submissions", status_code=201, response_model=SubmitAccepted)
    def submit(
        task_id: str,
        body: SubmissionIn,
        x_submission_token: str | None = Header(default=None),
    ) -> SubmitAccepted:
        state = _task_state(task_id)
        _check_token(state, x_submission_token)
        try:
            submission, warnings = store.submit(task_id, body.to_payload())
        except ValidationFailed as exc:
            raise ApiError(
                422,
                "ValidationFailed",
                "submission rejected",
                details=[IssueOut(**i.to_payload()) for i in exc.issues],
            ) from exc
        except StorageFailure as exc:
            raise ApiError(500, "StorageFailure", str(exc)) from exc
        from ..board import submission_to_payload

        return SubmitAccepted(
            submission=submission_to_payload(submission),
            warnings=[IssueOut(**w.to_payload()) for w in warnings],
        )

    @app.delete(f"{API_PREFIX}/tasks/{{task_id}}/submissions/{{submission_id}}")
    def withdraw(
        task_id: str,
        submission_id: str,
        x_submission_token: str | None = Header(default=None),
    ) -> Response:
        state = _task_state(task_id)
        _check_token(state, x_submission_token)
        try:
            store.withdraw(task_id, submission_id)
        except UnknownSubmission as exc:
            raise ApiError(404, "UnknownSubmission", str(exc)) from exc
        except StorageFailure as exc:
            raise ApiError(500, "StorageFailure", str(exc)) from exc
        return _json_response({"task_id": task_id, "withdrawn": submission_id})

    @app.get(f"{API_PREFIX}/tasks/{{task_id}}/frontier")
    def frontier(task_id: str) -> Response:
        board = _task_state(task_id).board
        report = frontier_report(board)
        return _json_response(render.frontier_payload(board, report))

    @app.get(f"{API_PREFIX}/tasks/{{task_id}}/impact")
    def impact_endpoint(
        task_id: str,
        dim: str = "TL",
        fix_pt: str | None = None,
        fix_tl: str | None = None,
        fix_td: str | None = None,
    ) -> Response:
        board = _task_state(task_id).board
        try:
            varied = Dimension(dim.upper())
        except ValueError:
            raise ApiError(400, "InvalidQueryParameter", f"unknown dimension {dim!r}") from None
        fixed = {}
        for dimension, raw in (
            (Dimension.PT, fix_pt),
            (Dimension.TL, fix_tl),
            (Dimension.TD, fix_td),
        ):
            if raw is not None:
                try:
                    fixed[dimension] = parse_level_range(raw)
                except InvalidBound as exc:
                    raise ApiError(400, "InvalidQueryParameter", str(exc)) from exc
        try:
            report = impact(board, varied, fixed)
        except InvalidBound as exc:
            raise ApiError(400, "InvalidQueryParameter", str(exc)) from exc
        except NoData as exc:
            raise ApiError(404, "NoData", str(exc)) from exc
        return _json_response(render.impact_payload(board, report))

    @app.get(f"{API_PREFIX}/taxonomy")
    def taxonomy() -> Response:
        return _json_response(render.taxonomy_payload(canonical_taxonomy()))

    @app.get(f"{API_PREFIX}/tasks/{{task_id}}/describe")
    def describe_endpoint(task_id: str, tag: str | None = None) -> Response:
        state = _task_state(task_id)
        vector = _parse_tag_param(tag)
        return _json_response(
            render.describe_payload(vector, state.profile, task_id=task_id)
        )

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
