"""Command-line front end over the same core the HTTP service uses.

Table and JSON output go through :mod:`slsboard.render`, so `rank`,
`frontier` and `impact` print exactly the bytes the service returns for
the equivalent request. Commands exit 0 on success and nonzero with a
diagnostic on any error; `--json` switches every read command to
machine-readable output.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import render
from .analysis import NoData, frontier_report, impact
from .board import (
    InvalidBound,
    IngestReport,
    Leaderboard,
    UnreadableDocument,
    _RESERVED_COLUMNS,
    filter_board,
    ingest,
    metric_slug,
    parse_level_range,
)
from .core import Dimension, TagError, parse_tag
from .store import Store, StoreError, ValidationFailed
from .taxonomy import (
    InvalidOverride,
    Metric,
    MetricSchema,
    MissingMetricSchema,
    ProfileParseError,
    TaskProfile,
    bundled_profile,
    bundled_profile_ids,
    load_profile,
)


class CliError(Exception):
    """Fatal command error; message goes to stderr, exit code 1."""


def _load_task_profile(value: str) -> TaskProfile:
    path = Path(value)
    if path.exists():
        try:
            return load_profile(path.read_text("utf-8"))
        except (ProfileParseError, InvalidOverride, MissingMetricSchema) as exc:
            raise CliError(f"profile {value}: {exc}") from exc
    if value in bundled_profile_ids():
        return bundled_profile(value)
    raise CliError(
        f"profile {value!r} is neither a file nor a bundled profile "
        f"(bundled: {', '.join(bundled_profile_ids())})"
    )


def _read_document(path_text: str) -> str:
    path = Path(path_text)
    try:
        return path.read_text("utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path_text}: {exc}") from exc


def _infer_schema(document: str, primary: str | None) -> MetricSchema:
    """Schema for documents used without a task profile: every non-reserved
    CSV column (or JSON metrics key) is a percent, higher-is-better metric."""
    stripped = document.strip()
    names: list[str] = []
    if stripped.startswith("["):
        import json

        try:
            rows = json.loads(stripped)
            if rows:
                names = list(rows[0].get("metrics", {}))
        except (ValueError, AttributeError):
            pass
    else:
        header = stripped.splitlines()[0] if stripped else ""
        names = [
            column.strip()
            for column in header.split(",")
            if column.strip() and column.strip() not in _RESERVED_COLUMNS
        ]
    if not names:
        raise CliError("cannot infer a metric schema from the document; pass --task")
    primary_name = primary or names[0]
    if primary_name not in names:
        raise CliError(f"metric {primary_name!r} not found in columns {names}")
    return MetricSchema(
        metrics=tuple(Metric(name=n) for n in names), primary_metric=primary_name
    )


def _with_primary(schema: MetricSchema, metric: str | None) -> MetricSchema:
    if metric is None:
        return schema
    for name in schema.names:
        if name == metric or metric_slug(name) == metric:
            return MetricSchema(metrics=schema.metrics, primary_metric=name)
    raise CliError(f"metric {metric!r} is not in the schema ({', '.join(schema.names)})")


def _load_board(args) -> tuple[Leaderboard, IngestReport]:
    document = _read_document(args.file)
    if args.task:
        profile = _load_task_profile(args.task)
        schema = _with_primary(profile.metric_schema, getattr(args, "metric", None))
        profile = TaskProfile(
            task_id=profile.task_id,
            task_name=profile.task_name,
            metric_schema=schema,
            overrides=profile.overrides,
            notes=profile.notes,
        )
    else:
        schema = _infer_schema(document, getattr(args, "metric", None))
        profile = TaskProfile(task_id="adhoc", task_name="ad hoc board", metric_schema=schema)
    try:
        report = ingest(document, schema, task_id=profile.task_id)
    except UnreadableDocument as exc:
        raise CliError(f"{args.file}: {exc}") from exc
    board = Leaderboard(task=profile, submissions=report.submissions)
    return board, report


def _require_clean(report: IngestReport, source: str) -> None:
    if not report.ok:
        lines = [f"{source}: {len(report.errors)} row error(s); fix or run 'validate'"]
        for issue in report.errors[:10]:
            lines.append(f"  row {issue.row}: {issue.code}: {issue.message}")
        raise CliError("\n".join(lines))


def _emit(text: str) -> None:
    sys.stdout.write(text)


def cmd_validate(args) -> int:
    board, report = _load_board(args)
    if args.json:
        payload = {
            "accepted": [s.id for s in report.submissions],
            "errors": [i.to_payload() for i in report.errors],
            "warnings": [i.to_payload() for i in report.warnings],
        }
        _emit(render.dumps(payload))
    else:
        _emit(render.render_validation_report(report))
    return 0 if report.ok else 1


def cmd_rank(args) -> int:
    board, report = _load_board(args)
    _require_clean(report, args.file)
    if args.json:
        _emit(render.dumps(render.leaderboard_payload(board)))
    else:
        _emit(render.render_text(board))
    return 0


def _sls_bounds_from_args(args) -> dict[Dimension, tuple[int, int]]:
    bounds: dict[Dimension, tuple[int, int]] = {}
    for dimension in Dimension:
        raw = getattr(args, dimension.value.lower(), None)
        if raw is not None:
            try:
                bounds[dimension] = parse_level_range(raw)
            except InvalidBound as exc:
                raise CliError(str(exc)) from exc
    return bounds


def cmd_filter(args) -> int:
    board, report = _load_board(args)
    _require_clean(report, args.file)
    metric_bounds = {}
    if args.metric_min is not None or args.metric_max is not None:
        name = args.metric or board.schema.primary_metric
        metric_bounds[name] = (args.metric_min, args.metric_max)
    try:
        filtered = filter_board(board, _sls_bounds_from_args(args), metric_bounds)
    except InvalidBound as exc:
        raise CliError(str(exc)) from exc
    if args.json:
        _emit(render.dumps(render.leaderboard_payload(filtered, ranked=args.rank)))
    else:
        _emit(render.render_text(filtered, ranked=args.rank))
    return 0


def cmd_frontier(args) -> int:
    board, report = _load_board(args)
    _require_clean(report, args.file)
    payload = render.frontier_payload(board, frontier_report(board))
    if args.json:
        _emit(render.dumps(payload))
    else:
        _emit(render.render_frontier(payload))
    return 0


def _parse_fix(text: str) -> dict[Dimension, tuple[int, int]]:
    fixed: dict[Dimension, tuple[int, int]] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise CliError(f"--fix expects DIM=LEVEL[..LEVEL], got {part!r}")
        dim_text, _, range_text = part.partition("=")
        try:
            dimension = Dimension(dim_text.strip().upper())
        except ValueError:
            raise CliError(f"unknown dimension {dim_text!r} in --fix") from None
        try:
            fixed[dimension] = parse_level_range(range_text)
        except InvalidBound as exc:
            raise CliError(str(exc)) from exc
    return fixed


def cmd_impact(args) -> int:
    board, report = _load_board(args)
    _require_clean(report, args.file)
    try:
        varied = Dimension(args.dim.upper())
    except ValueError:
        raise CliError(f"unknown dimension {args.dim!r}") from None
    fixed = _parse_fix(args.fix) if args.fix else {}
    try:
        result = impact(board, varied, fixed)
    except (InvalidBound, NoData) as exc:
        raise CliError(str(exc)) from exc
    payload = render.impact_payload(board, result)
    if args.json:
        _emit(render.dumps(payload))
    else:
        _emit(render.render_impact(payload))
    return 0


def cmd_describe(args) -> int:
    try:
        vector = parse_tag(args.tag)
    except TagError as exc:
        raise CliError(str(exc)) from exc
    profile = _load_task_profile(args.task) if args.task else None
    payload = render.describe_payload(
        vector, profile, task_id=profile.task_id if profile else None
    )
    if args.json:
        _emit(render.dumps(payload))
    else:
        _emit(render.render_describe(payload))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(Path(args.store), ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_import(args) -> int:
    store = Store(Path(args.store))
    if args.task:
        profile = _load_task_profile(args.task)
        store.register_task(profile)
        task_id = profile.task_id
    else:
        if args.task_id and args.task_id in store.task_ids():
            task_id = args.task_id
        elif len(store.task_ids()) == 1 and not args.task_id:
            task_id = store.task_ids()[0]
        else:
            raise CliError(
                "store has no single obvious task; pass --task PROFILE or --task-id ID"
            )
    state = store.task(task_id)
    document = _read_document(args.file)
    try:
        report = ingest(
            document,
            state.profile.metric_schema,
            task_id=task_id,
            existing_ids=(s.id for s in state.submissions),
        )
    except UnreadableDocument as exc:
        raise CliError(f"{args.file}: {exc}") from exc
    imported = 0
    failed = list(report.errors)
    for submission in report.submissions:
        from .board import submission_to_payload

        try:
            store.submit(task_id, submission_to_payload(submission))
            imported += 1
        except (ValidationFailed, StoreError) as exc:
            raise CliError(f"import aborted at {submission.id}: {exc}") from exc
    for issue in failed:
        print(f"row {issue.row}: {issue.code}: {issue.message}", file=sys.stderr)
    print(f"imported {imported} submission(s) into task {task_id!r}", file=sys.stderr)
    return 0 if not failed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slsboard",
        description="Supervision-aware leaderboards: validate, rank, analyse and serve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_board_args(p, metric_flag=True):
        p.add_argument("file", help="submissions document (CSV or JSON)")
        p.add_argument("--task", help="task profile file or bundled profile id")
        if metric_flag:
            p.add_argument("--metric", help="primary metric for ranking/analysis")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("validate", help="check a submissions document row by row")
    add_board_args(p, metric_flag=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("rank", help="print the ranked leaderboard table")
    add_board_args(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("filter", help="select rows by supervision levels and metrics")
    add_board_args(p)
    p.add_argument("--pt", help="PT level or range, e.g. 2 or 0..3")
    p.add_argument("--tl", help="TL level or range")
    p.add_argument("--td", help="TD level or range")
    p.add_argument("--metric-min", type=float, help="lower bound on --metric (or primary)")
    p.add_argument("--metric-max", type=float, help="upper bound on --metric (or primary)")
    p.add_argument("--rank", action="store_true", help="rank the filtered rows")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("frontier", help="Pareto frontier over performance and supervision")
    add_board_args(p)
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("impact", help="group by one dimension and compare metrics")
    add_board_args(p)
    p.add_argument("--dim", required=True, help="dimension to vary: PT, TL or TD")
    p.add_argument("--fix", help="pin other dimensions, e.g. PT=2,TD=4 or TL=1..3")
    p.set_defaults(func=cmd_impact)

    p = sub.add_parser("describe", help="explain what a tag's levels mean")
    p.add_argument("tag", help="supervision tag, e.g. SLS-5-2-1")
    p.add_argument("--task", help="task profile file or bundled profile id")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--store", required=True, help="store directory (event log lives here)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui", help="static directory to serve at / (optional web client)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("import", help="bulk-load a submissions document into a store")
    p.add_argument("file", help="submissions document (CSV or JSON)")
    p.add_argument("--store", required=True, help="store directory")
    p.add_argument("--task", help="profile to register before importing")
    p.add_argument("--task-id", help="existing task id to import into")
    p.set_defaults(func=cmd_import)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except StoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
