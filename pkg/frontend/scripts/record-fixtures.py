#!/usr/bin/env python3
"""Record real service responses as test fixtures for the web client.

Spins the backend in-process over the bundled demo board and writes the
exact response bodies the client's contract tests replay. Re-run after
any change to the API payloads:

    python3 frontend/scripts/record-fixtures.py
"""

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from slsboard import Store, bundled_fixture_csv, bundled_profile, ingest
from slsboard.board import submission_to_payload
from slsboard.service import create_app

TASK = "epic_kitchens_ar"
OUT_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main() -> int:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        store = Store(tmp)
        profile = bundled_profile(TASK)
        store.register_task(profile)
        report = ingest(bundled_fixture_csv(), profile.metric_schema, task_id=TASK)
        assert report.ok, report.errors
        for submission in report.submissions:
            store.submit(TASK, submission_to_payload(submission))

        client = TestClient(create_app(store))
        recordings = {
            "tasks.json": client.get("/v1/tasks"),
            "leaderboard.json": client.get(f"/v1/tasks/{TASK}/leaderboard"),
            "leaderboard_tl_max3.json": client.get(
                f"/v1/tasks/{TASK}/leaderboard", params={"tl_max": 3}
            ),
            "frontier.json": client.get(f"/v1/tasks/{TASK}/frontier"),
            "describe_row.json": client.get(
                f"/v1/tasks/{TASK}/describe", params={"tag": "SLS-5-4-4"}
            ),
            "error_missing_metric.json": client.post(
                f"/v1/tasks/{TASK}/submissions",
                json={
                    "team": "Demo",
                    "date": "2021-01-01",
                    "sls": "SLS-1-3-3",
                    "metrics": {"verb_top1": 10.0},
                },
            ),
        }
        for level in range(6):
            recordings[f"describe_l{level}.json"] = client.get(
                f"/v1/tasks/{TASK}/describe",
                params={"tag": f"SLS-{level}-{level}-{level}"},
            )

        for name, resp in recordings.items():
            (OUT_DIR / name).write_text(
                json.dumps(resp.json(), indent=2, ensure_ascii=False) + "\n",
                encoding="utf-8",
            )
            print(f"wrote {name} (status {resp.status_code})")
        store.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
