"""Ingestion, validation, ranking and filtering against the golden fixture."""

from __future__ import annotations

import datetime as dt
import json
import random

import pytest

from conftest import make_random_board

from slsboard import (
    Dimension,
    InvalidBound,
    Leaderboard,
    SLSVector,
    UnreadableDocument,
    bundled_fixture_csv,
    filter_board,
    ingest,
    metric_slug,
    rank,
    submissions_to_json,
)
from slsboard.board import parse_date, parse_level_range


def test_fixture_ingests_cleanly(fixture_report):
    assert fixture_report.ok
    assert len(fixture_report.submissions) == 9
    assert not fixture_report.warnings


def test_fixture_first_row_values(fixture_board):
    s = fixture_board.submission("uts_baidu_2020")
    assert s.team == "UTS-Baidu"
    assert s.sls == SLSVector(5, 4, 4)
    assert s.metric("action_top1") == 42.57
    assert s.entries == 14
    assert s.date == dt.date(2020, 5, 28)
    assert s.cohort == "2020"


def test_dates_accept_both_forms_and_store_iso():
    assert parse_date("05/28/20") == dt.date(2020, 5, 28)
    assert parse_date("2020-05-28") == dt.date(2020, 5, 28)
    assert parse_date("05/28/2020") == dt.date(2020, 5, 28)
    with pytest.raises(ValueError):
        parse_date("28 May 2020")


def test_rank_2020_cohort_reproduces_printed_ranks(board_2020):
    ranked = rank(board_2020)
    assert [(r, s.id) for r, s in ranked] == [
        (1, "uts_baidu_2020"),
        (2, "nus_cvml_2020"),
        (3, "saic_cambridge_2020"),
        (3, "fbk_hupba_2020"),
        (4, "gt_wisc_mpi_2020"),
        (5, "g_blend_2020"),
    ]


def test_rank_full_fixture_interleaves_cohorts(fixture_board):
    ranked = rank(fixture_board)
    values = [s.metric("action_top1") for _, s in ranked]
    assert values == [42.57, 41.59, 41.37, 40.00, 40.00, 38.75, 37.12, 36.66, 35.75]
    ranks = [r for r, _ in ranked]
    assert ranks == [1, 2, 3, 4, 4, 5, 6, 7, 8]


def test_rank_tie_breaks_by_date_then_team(board_2020):
    ranked = rank(board_2020)
    tied = [s.id for r, s in ranked if r == 3]
    # SAIC-Cambridge submitted 05/27, FBK-HuPBA 05/29.
    assert tied == ["saic_cambridge_2020", "fbk_hupba_2020"]


def test_rank_single_submission(fixture_board):
    solo = fixture_board.with_submissions([fixture_board.submission("tbn_2019")])
    assert [(r, s.id) for r, s in rank(solo)] == [(1, "tbn_2019")]


def test_rank_on_empty_board(fixture_board):
    assert rank(fixture_board.with_submissions([])) == []


def test_rank_is_dense_permutation_on_random_boards():
    rng = random.Random(20)
    for _ in range(50):
        board = make_random_board(rng)
        ranked = rank(board)
        assert sorted(s.id for _, s in ranked) == sorted(s.id for s in board.submissions)
        ranks = [r for r, _ in ranked]
        distinct_values = {s.metrics["score"] for s in board.submissions}
        assert ranks[0] == 1
        assert set(ranks) == set(range(1, len(distinct_values) + 1))
        assert all(b - a in (0, 1) for a, b in zip(ranks, ranks[1:]))


def test_lower_is_better_orientation_ranks_ascending():
    rng = random.Random(4)
    for _ in range(20):
        board = make_random_board(rng)
        higher = board.schema.primary.higher_is_better
        values = [s.metric("score") for _, s in rank(board)]
        expected = sorted(values, reverse=higher)
        assert values == expected


def test_filter_tl_at_most_three_keeps_the_six_rows(fixture_board):
    filtered = filter_board(fixture_board, {Dimension.TL: (None, 3)})
    assert [s.id for s in filtered.submissions] == [
        "saic_cambridge_2020",
        "fbk_hupba_2020",
        "gt_wisc_mpi_2020",
        "g_blend_2020",
        "tbn_2019",
        "fair_2019",
    ]


def test_filter_pt_exactly_five(fixture_board):
    filtered = filter_board(fixture_board, {Dimension.PT: (5, 5)})
    assert {s.id for s in filtered.submissions} == {
        "uts_baidu_2020",
        "fbk_hupba_2020",
        "g_blend_2020",
        "fair_2019",
    }


def test_unconstrained_filter_is_identity(fixture_board):
    assert filter_board(fixture_board) == fixture_board
    assert filter_board(fixture_board, {}, {}) == fixture_board


def test_filter_metric_bounds(fixture_board):
    filtered = filter_board(fixture_board, metric_bounds={"action_top1": (40.0, None)})
    assert {s.id for s in filtered.submissions} == {
        "uts_baidu_2020",
        "nus_cvml_2020",
        "uts_baidu_2019",
        "saic_cambridge_2020",
        "fbk_hupba_2020",
    }


def test_filter_rejects_bad_bounds(fixture_board):
    with pytest.raises(InvalidBound):
        filter_board(fixture_board, {Dimension.PT: (4, 2)})
    with pytest.raises(InvalidBound):
        filter_board(fixture_board, {Dimension.PT: (0, 9)})
    with pytest.raises(InvalidBound):
        filter_board(fixture_board, metric_bounds={"nope": (0, 1)})
    with pytest.raises(InvalidBound):
        filter_board(fixture_board, metric_bounds={"action_top1": (50.0, 40.0)})


def test_filter_then_rank_matches_rank_then_membership():
    rng = random.Random(77)
    for _ in range(30):
        board = make_random_board(rng)
        lo = rng.randint(0, 5)
        hi = rng.randint(lo, 5)
        dim = rng.choice(list(Dimension))
        filtered = filter_board(board, {dim: (lo, hi)})
        surviving = {s.id for s in filtered.submissions}
        via_filter = [s.id for _, s in rank(filtered)]
        via_rank = [s.id for _, s in rank(board) if s.id in surviving]
        assert via_filter == via_rank


def test_parse_level_range_forms():
    assert parse_level_range("2") == (2, 2)
    assert parse_level_range("1..3") == (1, 3)
    assert parse_level_range("..3") == (0, 3)
    assert parse_level_range("2..") == (2, 5)
    with pytest.raises(InvalidBound):
        parse_level_range("6")
    with pytest.raises(InvalidBound):
        parse_level_range("3..1")
    with pytest.raises(InvalidBound):
        parse_level_range("x")


def test_ingest_empty_document(epic_profile):
    report = ingest("", epic_profile.metric_schema)
    assert report.submissions == ()
    assert report.ok


def test_ingest_is_deterministic(epic_profile):
    text = bundled_fixture_csv()
    first = ingest(text, epic_profile.metric_schema, task_id=epic_profile.task_id)
    second = ingest(text, epic_profile.metric_schema, task_id=epic_profile.task_id)
    assert first.submissions == second.submissions


def test_ingest_json_round_trip(fixture_board, epic_profile):
    text = submissions_to_json(fixture_board.submissions)
    report = ingest(text, epic_profile.metric_schema, task_id=epic_profile.task_id)
    assert report.ok
    assert report.submissions == fixture_board.submissions


def _json_row(**overrides):
    row = {
        "id": "row1",
        "team": "Team A",
        "date": "2020-05-01",
        "entries": 3,
        "sls": "SLS-2-4-4",
        "metrics": {
            "verb_top1": 60.0,
            "noun_top1": 45.0,
            "action_top1": 38.0,
            "verb_top5": 85.0,
            "noun_top5": 70.0,
            "action_top5": 55.0,
        },
    }
    row.update(overrides)
    return row


def _ingest_rows(epic_profile, *rows):
    return ingest(
        json.dumps(list(rows)), epic_profile.metric_schema, task_id=epic_profile.task_id
    )


def test_ingest_stage_mismatch_is_rejected(epic_profile):
    row = _json_row(
        stages=[
            {"name": "features", "sls": "SLS-5-4-4"},
            {"name": "classifier", "sls": "SLS-0-3-3"},
        ]
    )
    report = _ingest_rows(epic_profile, row)
    assert not report.ok
    assert [e.code for e in report.errors] == ["StageMismatch"]


def test_ingest_matching_stages_compose(epic_profile):
    row = _json_row(
        sls="SLS-5-4-4",
        stages=[
            {"name": "features", "sls": "SLS-5-4-4"},
            {"name": "classifier", "sls": "SLS-0-3-3"},
        ],
    )
    report = _ingest_rows(epic_profile, row)
    assert report.ok
    assert report.submissions[0].stages is not None


def test_ingest_collects_multiple_row_errors(epic_profile):
    bad = _json_row(id="bad", sls="SLS-6-0-0", metrics={"verb_top1": 250.0})
    report = _ingest_rows(epic_profile, bad)
    codes = {e.code for e in report.errors}
    assert "LevelOutOfRange" in codes
    assert "MetricOutOfRange" in codes
    assert "MissingMetric" in codes  # the other five metrics are absent


def test_ingest_duplicate_ids_within_document(epic_profile):
    report = _ingest_rows(epic_profile, _json_row(), _json_row())
    assert len(report.submissions) == 1
    assert [e.code for e in report.errors] == ["DuplicateId"]
    assert report.errors[0].row == 2


def test_ingest_unknown_metric_rejected(epic_profile):
    row = _json_row()
    row["metrics"]["mystery"] = 1.0
    report = _ingest_rows(epic_profile, row)
    assert any(e.code == "UnknownMetric" for e in report.errors)


def test_ingest_malformed_tag_row(epic_profile):
    report = _ingest_rows(epic_profile, _json_row(sls="2-4-4"))
    assert [e.code for e in report.errors] == ["MalformedTag"]
    assert report.errors[0].row == 1


def test_semi_supervised_requires_caveat(epic_profile):
    rejected = _ingest_rows(epic_profile, _json_row(semi_supervised=True))
    assert [e.code for e in rejected.errors] == ["CaveatRequired"]

    accepted = _ingest_rows(
        epic_profile,
        _json_row(semi_supervised=True, caveats="uses unlabelled extra clips"),
    )
    assert accepted.ok
    assert [w.code for w in accepted.warnings] == ["SemiSupervisedCaveat"]


def test_ingest_rejects_unreadable_documents(epic_profile):
    with pytest.raises(UnreadableDocument):
        ingest("{not json", epic_profile.metric_schema)
    with pytest.raises(UnreadableDocument):
        ingest('{"id": "x"}', epic_profile.metric_schema)
    with pytest.raises(UnreadableDocument):
        ingest("id,team\n1,A\n", epic_profile.metric_schema)
    with pytest.raises(UnreadableDocument):
        ingest(
            bundled_fixture_csv().replace("cohort", "mystery_column"),
            epic_profile.metric_schema,
        )


def test_leaderboard_rejects_duplicate_ids(fixture_board):
    from slsboard import DuplicateId

    twice = fixture_board.submissions + (fixture_board.submissions[0],)
    with pytest.raises(DuplicateId):
        Leaderboard(task=fixture_board.task, submissions=twice)


def test_leaderboard_rejects_foreign_task(fixture_board):
    import dataclasses

    foreign = dataclasses.replace(fixture_board.submissions[0], task_id="other", id="f1")
    with pytest.raises(ValueError):
        Leaderboard(task=fixture_board.task, submissions=(foreign,))


def test_metric_slug():
    assert metric_slug("action_top1") == "action_top1"
    assert metric_slug("ACTION Top-1") == "action_top_1"
    assert metric_slug("Mean IoU (%)") == "mean_iou"
