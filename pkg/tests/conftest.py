"""Shared fixtures: the golden results board and a random-board generator."""

from __future__ import annotations

import datetime as dt
import random

import pytest


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(name): end-to-end acceptance criterion"
    )
    config._acceptance_results = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and rep.when == "call":
        name = marker.kwargs.get("name", item.name)
        item.config._acceptance_results.append((name, rep.passed))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance_results", [])
    if results:
        terminalreporter.section("acceptance criteria")
        for name, passed in results:
            terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}: {name}")

from slsboard import (
    Leaderboard,
    Metric,
    MetricSchema,
    SLSVector,
    Submission,
    TaskProfile,
    bundled_fixture_csv,
    bundled_profile,
    ingest,
)

FIXTURE_IDS_2020 = (
    "uts_baidu_2020",
    "nus_cvml_2020",
    "saic_cambridge_2020",
    "fbk_hupba_2020",
    "gt_wisc_mpi_2020",
    "g_blend_2020",
)


@pytest.fixture(scope="session")
def epic_profile():
    return bundled_profile("epic_kitchens_ar")


@pytest.fixture(scope="session")
def fixture_report(epic_profile):
    return ingest(
        bundled_fixture_csv(), epic_profile.metric_schema, task_id=epic_profile.task_id
    )


@pytest.fixture(scope="session")
def fixture_board(epic_profile, fixture_report):
    assert fixture_report.ok
    return Leaderboard(task=epic_profile, submissions=fixture_report.submissions)


@pytest.fixture(scope="session")
def board_2020(fixture_board):
    return fixture_board.with_submissions(
        s for s in fixture_board.submissions if s.cohort == "2020"
    )


# Values sampled from a coarse grid so random boards contain metric ties.
_SCORE_GRID = [round(x * 2.5, 2) for x in range(41)]


def make_random_board(rng: random.Random, max_subs: int = 50) -> Leaderboard:
    """Random board with occasional ties and either metric orientation."""
    higher = rng.random() < 0.5
    schema = MetricSchema(
        metrics=(
            Metric("score", unit="percent", higher_is_better=higher),
            Metric("aux", unit="percent", higher_is_better=True),
        ),
        primary_metric="score",
    )
    profile = TaskProfile(task_id="rand", task_name="random board", metric_schema=schema)
    n = rng.randint(1, max_subs)
    submissions = []
    for i in range(n):
        if rng.random() < 0.6:
            score = rng.choice(_SCORE_GRID)
        else:
            score = round(rng.uniform(0.0, 100.0), 2)
        submissions.append(
            Submission(
                id=f"s{i}",
                team=f"team{rng.randint(0, 7)}",
                task_id="rand",
                date=dt.date(2020, 1, 1) + dt.timedelta(days=rng.randint(0, 365)),
                entries=rng.randint(0, 40),
                sls=SLSVector(rng.randint(0, 5), rng.randint(0, 5), rng.randint(0, 5)),
                metrics={"score": score, "aux": round(rng.uniform(0.0, 100.0), 2)},
            )
        )
    return Leaderboard(task=profile, submissions=tuple(submissions))


def oracle_frontier(board: Leaderboard) -> set[str]:
    """Brute-force all-pairs frontier, re-derived from raw fields only.

    Deliberately avoids the library's leq/dominates helpers so it stays
    an independent check on them.
    """
    primary = board.task.metric_schema.primary_metric
    higher = next(
        m.higher_is_better
        for m in board.task.metric_schema.metrics
        if m.name == primary
    )
    subs = board.submissions

    def value(s: Submission) -> float:
        raw = s.metrics[primary]
        return raw if higher else -raw

    def is_dominated(b: Submission) -> bool:
        vb = value(b)
        bt = (b.sls.pt, b.sls.tl, b.sls.td)
        for a in subs:
            if a.id == b.id:
                continue
            at = (a.sls.pt, a.sls.tl, a.sls.td)
            uses_no_more = all(x <= y for x, y in zip(at, bt))
            at_least_as_good = value(a) >= vb
            strict = value(a) > vb or at != bt
            if uses_no_more and at_least_as_good and strict:
                return True
        return False

    return {s.id for s in subs if not is_dominated(s)}
