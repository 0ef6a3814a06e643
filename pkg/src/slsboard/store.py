"""Durable leaderboard state: an append-only event log plus replay.

Every state change is one JSON record on its own line, fsynced before
the caller sees an acknowledgment, so an acknowledged submission
survives a hard kill. Replaying the log from the top reconstructs the
exact in-memory state; a partial trailing line (torn write from a
crash) is truncated away on open, never a mid-file gap.

Concurrency contract: any number of lock-free readers, one logical
writer. Writes from all tasks serialize through a single store-wide
lock (stronger than the per-task requirement); reads grab an immutable
snapshot reference and never observe a partially applied write.
"""

from __future__ import annotations

import datetime as dt
import json
import os
import threading
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Iterator, Mapping

from .board import (
    Leaderboard,
    Submission,
    ValidationIssue,
    submission_to_payload,
    validate_submission_payload,
)
from .taxonomy import TaskProfile, load_profile, profile_to_document

EVENT_PROFILE_REGISTERED = "ProfileRegistered"
EVENT_SUBMISSION_ACCEPTED = "SubmissionAccepted"
EVENT_SUBMISSION_WITHDRAWN = "SubmissionWithdrawn"

_EVENTS = (
    EVENT_PROFILE_REGISTERED,
    EVENT_SUBMISSION_ACCEPTED,
    EVENT_SUBMISSION_WITHDRAWN,
)

LOG_FILENAME = "events.ndjson"


class StoreError(Exception):
    """Base class for store failures."""


class StoreCorrupt(StoreError):
    """The event log violates its own invariants (bad JSON mid-file,
    sequence gap, unknown event)."""


class StorageFailure(StoreError):
    """The write could not be made durable; nothing was acknowledged."""


class UnknownTask(StoreError):
    def __init__(self, task_id: str):
        self.task_id = task_id
        super().__init__(f"unknown task {task_id!r}")


class UnknownSubmission(StoreError):
    def __init__(self, task_id: str, submission_id: str):
        self.submission_id = submission_id
        super().__init__(f"no submission {submission_id!r} in task {task_id!r}")


class ValidationFailed(StoreError):
    """Submission rejected; carries the per-field issues."""

    def __init__(self, issues: list[ValidationIssue]):
        self.issues = issues
        summary = "; ".join(f"{i.code}: {i.message}" for i in issues[:3])
        more = f" (+{len(issues) - 3} more)" if len(issues) > 3 else ""
        super().__init__(f"validation failed: {summary}{more}")


@dataclass(frozen=True)
class StoreRecord:
    sequence_number: int
    timestamp: str
    event: str
    payload: dict[str, Any]

    def to_line(self) -> str:
        return json.dumps(
            {
                "seq": self.sequence_number,
                "ts": self.timestamp,
                "event": self.event,
                "payload": self.payload,
            },
            separators=(",", ":"),
            ensure_ascii=False,
        )


class EventLog:
    """Newline-delimited JSON log with gap-free sequence numbers."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._last_seq = 0
        self._good_offset: int | None = None
        self._fh = None

    def replay(self) -> Iterator[StoreRecord]:
        """Yield all intact records and remember the replay position.

        A torn final line is discarded (and truncated on the next
        append); damage anywhere else raises :class:`StoreCorrupt`.
        """
        self._last_seq = 0
        self._good_offset = 0
        if not self.path.exists():
            return
        with self.path.open("rb") as fh:
            offset = 0
            for raw in fh:
                line = raw.decode("utf-8", errors="replace").strip()
                end = offset + len(raw)
                if not line:
                    offset = end
                    continue
                try:
                    doc = json.loads(line)
                    record = StoreRecord(
                        sequence_number=doc["seq"],
                        timestamp=doc["ts"],
                        event=doc["event"],
                        payload=doc["payload"],
                    )
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    if not raw.endswith(b"\n") or end == self.path.stat().st_size:
                        # Torn tail from a crash mid-write; drop it.
                        break
                    raise StoreCorrupt(f"unreadable record at byte {offset}: {exc}") from exc
                if record.event not in _EVENTS:
                    raise StoreCorrupt(f"unknown event {record.event!r} at seq {record.sequence_number}")
                if record.sequence_number != self._last_seq + 1:
                    raise StoreCorrupt(
                        f"sequence gap: expected {self._last_seq + 1}, "
                        f"found {record.sequence_number}"
                    )
                self._last_seq = record.sequence_number
                self._good_offset = end
                offset = end
                yield record

    def _open_for_append(self):
        if self._fh is None:
            size = self.path.stat().st_size if self.path.exists() else 0
            good = size if self._good_offset is None else self._good_offset
            self._fh = open(self.path, "ab")
            if good < size:
                self._fh.truncate(good)
        return self._fh

    def append(self, event: str, payload: Mapping[str, Any]) -> StoreRecord:
        """Durably append one record; raises StorageFailure on any I/O
        problem, leaving the log positioned at the last good record."""
        record = StoreRecord(
            sequence_number=self._last_seq + 1,
            timestamp=dt.datetime.now(dt.timezone.utc).isoformat(),
            event=event,
            payload=dict(payload),
        )
        start: int | None = None
        try:
            fh = self._open_for_append()
            start = os.fstat(fh.fileno()).st_size
            fh.write((record.to_line() + "\n").encode("utf-8"))
            fh.flush()
            os.fsync(fh.fileno())
            end = os.fstat(fh.fileno()).st_size
        except OSError as exc:
            if start is not None:
                try:
                    self._fh.truncate(start)
                except OSError:
                    pass
            raise StorageFailure(f"could not persist record: {exc}") from exc
        self._last_seq = record.sequence_number
        self._good_offset = end
        return record

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None


@dataclass(frozen=True)
class TaskState:
    """Immutable snapshot of one task; readers hold these directly."""

    profile: TaskProfile
    submission_token: str | None
    entries_quota: int | None
    board: Leaderboard

    @property
    def submissions(self) -> tuple[Submission, ...]:
        return self.board.submissions


class Store:
    """Event-sourced leaderboard state for any number of tasks."""

    def __init__(self, directory: Path | str):
        self.directory = Path(directory)
        self.log = EventLog(self.directory / LOG_FILENAME)
        self._tasks: dict[str, TaskState] = {}
        self._write_lock = threading.Lock()
        for record in self.log.replay():
            self._apply(record)

    # -- read side -------------------------------------------------------

    def task_ids(self) -> list[str]:
        return sorted(self._tasks)

    def task(self, task_id: str) -> TaskState:
        try:
            return self._tasks[task_id]
        except KeyError:
            raise UnknownTask(task_id) from None

    def board(self, task_id: str) -> Leaderboard:
        return self.task(task_id).board

    # -- write side ------------------------------------------------------

    def _apply(self, record: StoreRecord) -> None:
        payload = record.payload
        if record.event == EVENT_PROFILE_REGISTERED:
            profile = load_profile(payload["profile"])
            existing = self._tasks.get(profile.task_id)
            submissions = existing.board.submissions if existing else ()
            self._tasks[profile.task_id] = TaskState(
                profile=profile,
                submission_token=payload.get("submission_token"),
                entries_quota=payload.get("entries_quota"),
                board=Leaderboard(task=profile, submissions=submissions),
            )
        elif record.event == EVENT_SUBMISSION_ACCEPTED:
            task_id = payload["task_id"]
            state = self._tasks[task_id]
            data = dict(payload["submission"])
            submission, errors, _ = validate_submission_payload(
                data, state.profile.metric_schema, task_id
            )
            if submission is None:
                raise StoreCorrupt(
                    f"logged submission no longer validates: "
                    f"{'; '.join(e.message for e in errors)}"
                )
            board = state.board.with_submissions(state.board.submissions + (submission,))
            self._tasks[task_id] = replace(state, board=board)
        elif record.event == EVENT_SUBMISSION_WITHDRAWN:
            task_id = payload["task_id"]
            state = self._tasks[task_id]
            submission_id = payload["submission_id"]
            board = state.board.with_submissions(
                s for s in state.board.submissions if s.id != submission_id
            )
            self._tasks[task_id] = replace(state, board=board)
        else:  # pragma: no cover - replay already rejects unknown events
            raise StoreCorrupt(f"unknown event {record.event!r}")

    def register_task(
        self,
        profile: TaskProfile,
        submission_token: str | None = None,
        entries_quota: int | None = None,
    ) -> TaskState:
        with self._write_lock:
            record = self.log.append(
                EVENT_PROFILE_REGISTERED,
                {
                    "profile": profile_to_document(profile),
                    "submission_token": submission_token,
                    "entries_quota": entries_quota,
                },
            )
            self._apply(record)
            return self._tasks[profile.task_id]

    def _next_submission_id(self, state: TaskState) -> str:
        existing = {s.id for s in state.submissions}
        n = len(existing) + 1
        while f"sub-{n}" in existing:
            n += 1
        return f"sub-{n}"

    def submit(
        self, task_id: str, payload: Mapping[str, Any]
    ) -> tuple[Submission, list[ValidationIssue]]:
        """Validate, durably append, then acknowledge one submission.

        Assigns an id when the payload carries none. On validation
        failure nothing is stored; on storage failure nothing is
        acknowledged.
        """
        with self._write_lock:
            state = self._tasks.get(task_id)
            if state is None:
                raise UnknownTask(task_id)
            data = dict(payload)
            if not str(data.get("id") or "").strip():
                data["id"] = self._next_submission_id(state)
            submission, errors, warnings = validate_submission_payload(
                data,
                state.profile.metric_schema,
                task_id,
                existing_ids=(s.id for s in state.submissions),
            )
            if submission is None:
                raise ValidationFailed(errors)
            if state.entries_quota is not None:
                team_count = sum(
                    1 for s in state.submissions if s.team == submission.team
                )
                if team_count >= state.entries_quota:
                    raise ValidationFailed(
                        [
                            ValidationIssue(
                                code="QuotaExceeded",
                                message=(
                                    f"team {submission.team!r} already has "
                                    f"{team_count} submissions (quota "
                                    f"{state.entries_quota})"
                                ),
                                field="team",
                            )
                        ]
                    )
            record = self.log.append(
                EVENT_SUBMISSION_ACCEPTED,
                {"task_id": task_id, "submission": submission_to_payload(submission)},
            )
            self._apply(record)
            return submission, warnings

    def withdraw(self, task_id: str, submission_id: str) -> None:
        with self._write_lock:
            state = self._tasks.get(task_id)
            if state is None:
                raise UnknownTask(task_id)
            if all(s.id != submission_id for s in state.submissions):
                raise UnknownSubmission(task_id, submission_id)
            record = self.log.append(
                EVENT_SUBMISSION_WITHDRAWN,
                {"task_id": task_id, "submission_id": submission_id},
            )
            self._apply(record)

    def close(self) -> None:
        self.log.close()
