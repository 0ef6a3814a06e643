"""Single source of truth for every outward-facing rendering.

The HTTP service and the CLI both emit their tables and JSON payloads
through this module, so the two surfaces are byte-identical on the same
input. JSON is serialized compactly with a trailing newline; tables come
in a plain-text and an HTML form. HTML supervision cells carry a
level-keyed class per dimension (``sls-pt-0`` .. ``sls-td-5``) so a
stylesheet can color-code them.
"""

from __future__ import annotations

import html
import json
from typing import Any

from .analysis import FrontierReport, ImpactReport
from .board import Leaderboard, Submission, metric_slug, rank as rank_board
from .core import DIMENSIONS, SLSVector, format_tag
from .taxonomy import TaskProfile, canonical_description


def dumps(payload: Any) -> str:
    """Canonical JSON serialization used by both the service and the CLI."""
    return json.dumps(payload, separators=(",", ":"), ensure_ascii=False) + "\n"


def sls_payload(v: SLSVector) -> dict[str, Any]:
    return {"tag": format_tag(v), "pt": v.pt, "tl": v.tl, "td": v.td}


def submission_row_payload(s: Submission, rank_value: int | None) -> dict[str, Any]:
    return {
        "rank": rank_value,
        "id": s.id,
        "team": s.display_team,
        "entries": s.entries,
        "date": s.date.isoformat(),
        "sls": sls_payload(s.sls),
        "metrics": {metric_slug(name): value for name, value in s.metrics.items()},
        "stages": None
        if s.stages is None
        else [{"name": st.name, "sls": format_tag(st.sls)} for st in s.stages],
        "report_url": s.report_url,
        "caveats": s.caveats,
        "anonymous": s.anonymous,
        "semi_supervised": s.semi_supervised,
        "cohort": s.cohort,
    }


def leaderboard_payload(board: Leaderboard, ranked: bool = True) -> dict[str, Any]:
    if ranked:
        rows = [submission_row_payload(s, r) for r, s in rank_board(board)]
    else:
        rows = [submission_row_payload(s, None) for s in board.submissions]
    return {
        "task_id": board.task.task_id,
        "task_name": board.task.task_name,
        "primary_metric": metric_slug(board.schema.primary_metric),
        "metrics": [metric_slug(name) for name in board.schema.names],
        "count": len(rows),
        "rows": rows,
    }


def frontier_payload(board: Leaderboard, report: FrontierReport) -> dict[str, Any]:
    return {
        "task_id": board.task.task_id,
        "primary_metric": metric_slug(board.schema.primary_metric),
        "count": len(board.submissions),
        **report.to_payload(),
    }


def impact_payload(board: Leaderboard, report: ImpactReport) -> dict[str, Any]:
    return {
        "task_id": board.task.task_id,
        "varied": report.varied.value,
        "fixed": {
            d.value: [lo, hi] for d, (lo, hi) in sorted(
                report.fixed.items(), key=lambda item: DIMENSIONS.index(item[0])
            )
        },
        "population": report.population,
        "groups": [
            {
                "level": g.level,
                "count": g.count,
                "submission_ids": list(g.submission_ids),
                "metrics": {
                    metric_slug(name): stats.to_payload()
                    for name, stats in g.stats.items()
                },
            }
            for g in report.groups
        ],
        "adjacent_deltas": [
            {
                "from_level": d.from_level,
                "to_level": d.to_level,
                "mean_delta": {
                    metric_slug(name): value for name, value in d.mean_delta.items()
                },
            }
            for d in report.adjacent_deltas
        ],
        "separation": {
            metric_slug(name): flag for name, flag in report.separation.items()
        },
    }


def describe_payload(
    v: SLSVector, profile: TaskProfile | None, task_id: str | None = None
) -> dict[str, Any]:
    descriptions = []
    for dimension in DIMENSIONS:
        level = v.level(dimension)
        source = "canonical"
        if profile is not None and profile.override_for(dimension, level) is not None:
            source = "override"
        text = (
            profile.description(dimension, level)
            if profile is not None
            else canonical_description(dimension, level)
        )
        descriptions.append(
            {
                "dimension": dimension.value,
                "level": level,
                "text": text,
                "source": source,
            }
        )
    return {
        "task_id": task_id,
        "tag": format_tag(v),
        "sls": sls_payload(v),
        "descriptions": descriptions,
    }


def taxonomy_payload(descriptors) -> dict[str, Any]:
    return {
        "descriptors": [
            {
                "dimension": d.dimension.value,
                "level": d.level,
                "description": d.description,
                "examples": list(d.examples),
            }
            for d in descriptors
        ]
    }


def _table_rows(board: Leaderboard, ranked: bool) -> list[list[str]]:
    if ranked:
        entries = [(str(r), s) for r, s in rank_board(board)]
    else:
        entries = [("", s) for s in board.submissions]
    rows = []
    for rank_text, s in entries:
        rows.append(
            [
                rank_text,
                s.display_team,
                str(s.entries),
                s.date.isoformat(),
                str(s.sls.pt),
                str(s.sls.tl),
                str(s.sls.td),
                *(_format_value(s.metric(name)) for name in board.schema.names),
            ]
        )
    return rows


def _format_value(value: float) -> str:
    text = f"{value:.2f}"
    return text.rstrip("0").rstrip(".") if "." in text else text


def table_header(board: Leaderboard) -> list[str]:
    return [
        "rank",
        "team",
        "entries",
        "date",
        *(d.value for d in DIMENSIONS),
        *(metric_slug(name) for name in board.schema.names),
    ]


def render_text(board: Leaderboard, ranked: bool = True) -> str:
    """Fixed-width plain-text table; header-only when the board is empty."""
    header = table_header(board)
    rows = _table_rows(board, ranked)
    widths = [
        max(len(header[i]), *(len(row[i]) for row in rows)) if rows else len(header[i])
        for i in range(len(header))
    ]
    lines = [
        "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(header)).rstrip(),
        "  ".join("-" * widths[i] for i in range(len(header))).rstrip(),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def render_html(board: Leaderboard, ranked: bool = True) -> str:
    """HTML table with level-keyed classes on every supervision cell."""
    header = table_header(board)
    head_cells = "".join(f"<th>{html.escape(h)}</th>" for h in header)
    lines = [
        '<table class="sls-board">',
        f"<thead><tr>{head_cells}</tr></thead>",
        "<tbody>",
    ]
    dims = [d.value.lower() for d in DIMENSIONS]
    for row in _table_rows(board, ranked):
        cells = []
        for i, cell in enumerate(row):
            # Columns 4..6 hold the PT/TL/TD levels.
            if 4 <= i <= 6:
                dim = dims[i - 4]
                cells.append(
                    f'<td class="sls-{dim} sls-{dim}-{html.escape(cell)}">'
                    f"{html.escape(cell)}</td>"
                )
            else:
                cells.append(f"<td>{html.escape(cell)}</td>")
        lines.append(f"<tr>{''.join(cells)}</tr>")
    lines.append("</tbody>")
    lines.append("</table>")
    return "\n".join(lines) + "\n"


def render_validation_report(report) -> str:
    """Per-row acceptance summary for ingest reports."""
    lines = [
        f"accepted: {len(report.submissions)}",
        f"rejected rows: {len(report.rejected_rows)}",
    ]
    for s in report.submissions:
        lines.append(f"  ok    {s.id} ({format_tag(s.sls)})")
    for issue in report.errors:
        where = f"row {issue.row}" if issue.row is not None else "file"
        ident = f" [{issue.submission_id}]" if issue.submission_id else ""
        lines.append(f"  error {where}{ident}: {issue.code}: {issue.message}")
    for issue in report.warnings:
        where = f"row {issue.row}" if issue.row is not None else "file"
        ident = f" [{issue.submission_id}]" if issue.submission_id else ""
        lines.append(f"  warn  {where}{ident}: {issue.code}: {issue.message}")
    return "\n".join(lines) + "\n"


def render_describe(payload: dict[str, Any]) -> str:
    lines = [payload["tag"]]
    for entry in payload["descriptions"]:
        marker = "*" if entry["source"] == "override" else " "
        lines.append(f"{entry['dimension']}-{entry['level']}{marker} {entry['text']}")
    return "\n".join(lines) + "\n"


def render_frontier(payload: dict[str, Any]) -> str:
    lines = ["frontier:"]
    for sid in payload["frontier"]:
        lines.append(f"  {sid}")
    if payload["dominated"]:
        lines.append("dominated:")
        for entry in payload["dominated"]:
            witness = entry["witness"]
            deltas = witness["sls_delta"]
            delta_text = ",".join(f"{k}{v:+d}" for k, v in deltas.items())
            lines.append(
                f"  {entry['id']} <- {witness['dominator']} "
                f"(metric +{_format_value(witness['metric_delta'])}, sls {delta_text})"
            )
    return "\n".join(lines) + "\n"


def render_impact(payload: dict[str, Any]) -> str:
    lines = [f"impact of {payload['varied']} ({payload['population']} submissions)"]
    if payload["fixed"]:
        fixed_text = ", ".join(
            f"{dim}={lo}..{hi}" for dim, (lo, hi) in payload["fixed"].items()
        )
        lines.append(f"fixed: {fixed_text}")
    for group in payload["groups"]:
        lines.append(
            f"level {group['level']}: {group['count']} submission(s): "
            f"{', '.join(group['submission_ids'])}"
        )
        for name, stats in group["metrics"].items():
            lines.append(
                f"  {name}: min {_format_value(stats['min'])}  "
                f"max {_format_value(stats['max'])}  mean {stats['mean']:.4f}"
            )
    for delta in payload["adjacent_deltas"]:
        parts = ", ".join(
            f"{name} {value:+.4f}" for name, value in delta["mean_delta"].items()
        )
        lines.append(f"level {delta['from_level']} -> {delta['to_level']}: {parts}")
    sep_text = ", ".join(
        f"{name}={'yes' if flag else 'no'}" for name, flag in payload["separation"].items()
    )
    lines.append(f"strict separation: {sep_text}")
    return "\n".join(lines) + "\n"
