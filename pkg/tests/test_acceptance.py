"""End-to-end acceptance criteria.

Each test is one criterion; the conftest hook prints one PASS/FAIL line
per criterion in the terminal summary. Tolerances are pinned here:
value comparisons against the golden fixture are exact, oracle
equivalences require zero mismatches.
"""

from __future__ import annotations

import os
import random
import socket
import subprocess
import sys
import time

import httpx
import numpy as np
import pytest

from conftest import make_random_board, oracle_frontier

from slsboard import (
    Dimension,
    SLSVector,
    StageDeclaration,
    all_vectors,
    bundled_fixture_csv,
    bundled_profile,
    compose_stages,
    describe,
    format_tag,
    frontier_report,
    impact,
    ingest,
    leq,
    pareto_frontier,
    parse_tag,
    rank,
)
from slsboard.board import Leaderboard
from slsboard.render import dumps, leaderboard_payload, render_text
from slsboard.taxonomy import TaskProfile, profile_to_document


@pytest.mark.acceptance(name="tag algebra exhaustive over all 216 vectors")
def test_tag_algebra_exhaustive():
    started = time.perf_counter()
    vectors = list(all_vectors())
    assert len(vectors) == 216

    for v in vectors:
        assert parse_tag(format_tag(v)) == v

    n = len(vectors)
    relation = np.zeros((n, n), dtype=bool)
    for i, a in enumerate(vectors):
        for j, b in enumerate(vectors):
            relation[i, j] = leq(a, b)

    # Reflexive: the diagonal is all true.
    assert relation.diagonal().all()
    # Antisymmetric: mutual order only on the diagonal.
    both = relation & relation.T
    assert (both == np.eye(n, dtype=bool)).all()
    # Transitive: composing the relation with itself adds no new pairs,
    # which covers every one of the 216^3 triples.
    reachable = (relation.astype(np.int32) @ relation.astype(np.int32)) > 0
    assert not (reachable & ~relation).any()

    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"exhaustive check took {elapsed:.3f}s"


@pytest.mark.acceptance(name="golden fixture reproduces the printed 2020 ranking")
def test_golden_ranking(board_2020):
    ranked = [(r, s.team, s.metric("action_top1")) for r, s in rank(board_2020)]
    assert ranked == [
        (1, "UTS-Baidu", 42.57),
        (2, "NUS-CVML", 41.59),
        (3, "SAIC-Cambridge", 40.00),
        (3, "FBK-HuPBA", 40.00),
        (4, "GT-WISC-MPI", 38.75),
        (5, "G-Blend", 37.12),
    ]


@pytest.mark.acceptance(name="training-label separation holds on the fixture")
def test_tl_separation(fixture_board):
    report = impact(fixture_board, Dimension.TL)
    stats4 = report.group(4).stats["action_top1"]
    stats3 = report.group(3).stats["action_top1"]
    assert stats4.min == 41.37
    assert stats3.max == 40.00
    assert stats4.min > stats3.max
    assert report.separation["action_top1"] is True


@pytest.mark.acceptance(name="frontier equals the brute-force oracle (fixture + 1000 random boards)")
def test_frontier_oracle_equivalence(fixture_board):
    assert pareto_frontier(fixture_board) == {
        "uts_baidu_2020",
        "nus_cvml_2020",
        "saic_cambridge_2020",
    }
    assert pareto_frontier(fixture_board) == oracle_frontier(fixture_board)

    rng = random.Random(20260810)
    mismatches = 0
    for _ in range(1000):
        board = make_random_board(rng, max_subs=50)
        if pareto_frontier(board) != oracle_frontier(board):
            mismatches += 1
    assert mismatches == 0


@pytest.mark.acceptance(name="task profiles change text only, never numbers")
def test_specialization_transparency(fixture_board, epic_profile):
    plain_profile = TaskProfile(
        task_id=epic_profile.task_id,
        task_name=epic_profile.task_name,
        metric_schema=epic_profile.metric_schema,
        overrides=(),
    )
    text = bundled_fixture_csv()
    with_profile = ingest(text, epic_profile.metric_schema, task_id=epic_profile.task_id)
    without_profile = ingest(text, plain_profile.metric_schema, task_id=plain_profile.task_id)
    assert with_profile.submissions == without_profile.submissions

    board_with = Leaderboard(task=epic_profile, submissions=with_profile.submissions)
    board_without = Leaderboard(task=plain_profile, submissions=without_profile.submissions)

    vectors = [s.sls for s in with_profile.submissions]
    assert [leq(a, b) for a in vectors for b in vectors] == [
        leq(a, b) for a in vectors for b in vectors
    ]
    stages = [StageDeclaration("features", vectors[0]), StageDeclaration("head", vectors[1])]
    assert compose_stages(stages) == compose_stages(list(stages))

    assert [(r, s.id) for r, s in rank(board_with)] == [
        (r, s.id) for r, s in rank(board_without)
    ]
    assert pareto_frontier(board_with) == pareto_frontier(board_without)
    assert (
        frontier_report(board_with).to_payload()
        == frontier_report(board_without).to_payload()
    )

    # Bit-identical serialized outputs.
    assert dumps(leaderboard_payload(board_with)) == dumps(leaderboard_payload(board_without))
    assert render_text(board_with) == render_text(board_without)

    # Only the descriptive texts may differ.
    specialized = describe(SLSVector(2, 3, 4), epic_profile)
    canonical = describe(SLSVector(2, 3, 4), plain_profile)
    assert specialized != canonical


@pytest.mark.acceptance(name="stage composition laws hold over 10,000 random stage lists")
def test_composition_laws_randomized():
    rng = random.Random(424242)
    failures = 0
    for case in range(10_000):
        k = rng.randint(1, 6)
        stages = [
            StageDeclaration(
                f"stage{i}",
                SLSVector(rng.randint(0, 5), rng.randint(0, 5), rng.randint(0, 5)),
            )
            for i in range(k)
        ]
        composed = compose_stages(stages)

        shuffled = list(stages)
        rng.shuffle(shuffled)
        permutation_invariant = compose_stages(shuffled) == composed

        idempotent = compose_stages([stages[0]] * rng.randint(1, 4)) == stages[0].sls

        extra = StageDeclaration(
            "extra", SLSVector(rng.randint(0, 5), rng.randint(0, 5), rng.randint(0, 5))
        )
        monotone = leq(composed, compose_stages(stages + [extra]))

        bounds_every_stage = all(leq(s.sls, composed) for s in stages)

        if not (permutation_invariant and idempotent and monotone and bounds_every_stage):
            failures += 1
    assert failures == 0


def _free_port() -> int:
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    return port


def _start_service(store_dir: str, port: int) -> subprocess.Popen:
    proc = subprocess.Popen(
        [
            sys.executable,
            "-m",
            "slsboard.cli",
            "serve",
            "--store",
            store_dir,
            "--port",
            str(port),
        ],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    base = f"http://127.0.0.1:{port}"
    deadline = time.time() + 20
    while time.time() < deadline:
        try:
            httpx.get(f"{base}/v1/tasks", timeout=1.0)
            return proc
        except httpx.HTTPError:
            if proc.poll() is not None:
                raise RuntimeError("service exited during startup")
            time.sleep(0.1)
    proc.kill()
    raise RuntimeError("service did not become ready")


def _submission(i: int) -> dict:
    return {
        "id": f"durable{i}",
        "team": f"Team {i}",
        "date": "2021-06-01",
        "entries": i,
        "sls": f"SLS-{i % 6}-3-3",
        "metrics": {
            "verb_top1": 50.0 + i,
            "noun_top1": 40.0 + i,
            "action_top1": 30.0 + i,
            "verb_top5": 80.0,
            "noun_top5": 70.0,
            "action_top5": 55.0,
        },
    }


@pytest.mark.acceptance(name="acknowledged submissions survive kill -9 byte-identically")
def test_service_durability_across_kill(tmp_path):
    store_dir = str(tmp_path / "durable-store")
    os.makedirs(store_dir, exist_ok=True)
    port = _free_port()
    proc = _start_service(store_dir, port)
    base = f"http://127.0.0.1:{port}"
    task = "epic_kitchens_ar"
    try:
        doc = profile_to_document(bundled_profile(task))
        resp = httpx.post(f"{base}/v1/tasks", json={"profile": doc}, timeout=5.0)
        assert resp.status_code == 201

        acknowledged = []
        for i in range(5):
            resp = httpx.post(
                f"{base}/v1/tasks/{task}/submissions", json=_submission(i), timeout=5.0
            )
            assert resp.status_code == 201
            acknowledged.append(resp.json()["submission"]["id"])

        before_json = httpx.get(f"{base}/v1/tasks/{task}/leaderboard", timeout=5.0).content
        before_text = httpx.get(
            f"{base}/v1/tasks/{task}/leaderboard", params={"format": "text"}, timeout=5.0
        ).content
        before_frontier = httpx.get(f"{base}/v1/tasks/{task}/frontier", timeout=5.0).content
    finally:
        proc.kill()
        proc.wait(timeout=10)

    port = _free_port()
    proc = _start_service(store_dir, port)
    base = f"http://127.0.0.1:{port}"
    try:
        after = httpx.get(f"{base}/v1/tasks/{task}/leaderboard", timeout=5.0)
        after_ids = {row["id"] for row in after.json()["rows"]}
        assert set(acknowledged) <= after_ids
        assert after.content == before_json
        after_text = httpx.get(
            f"{base}/v1/tasks/{task}/leaderboard", params={"format": "text"}, timeout=5.0
        ).content
        assert after_text == before_text
        after_frontier = httpx.get(f"{base}/v1/tasks/{task}/frontier", timeout=5.0).content
        assert after_frontier == before_frontier
    finally:
        proc.kill()
        proc.wait(timeout=10)


@pytest.mark.acceptance(
    name="image-only improvement figures are out of scope; the structural substitute stands"
)
def test_figure_improvement_not_reproduced_structural_substitute_only(fixture_board):
    # The published percentage-point improvement range attributed to
    # richer temporal labels exists only as a figure; no value here (or
    # anywhere in the package) asserts it. What the platform supports is
    # the structural comparison: grouping by training-label level and
    # reporting deltas and separation.
    report = impact(fixture_board, Dimension.TL)
    (delta,) = report.adjacent_deltas
    assert delta.from_level == 3 and delta.to_level == 4
    assert delta.mean_delta["action_top1"] > 0
    assert "action_top1" in report.separation
    # The delta is derived from the declared board values alone: mean of
    # the three level-4 rows minus mean of the six level-3 rows.
    expected = (42.57 + 41.59 + 41.37) / 3 - (40.00 + 40.00 + 38.75 + 37.12 + 36.66 + 35.75) / 6
    assert delta.mean_delta["action_top1"] == pytest.approx(expected, abs=1e-12)
