"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field


class StageIn(BaseModel):
    name: str
    sls: str


class SubmissionIn(BaseModel):
    """Submission payload; `id` is assigned by the service when omitted."""

    team: str
    date: str
    sls: str
    metrics: dict[str, Any]
    id: str | None = None
    entries: int = 0
    stages: list[StageIn] | None = None
    report_url: str | None = None
    caveats: str | None = None
    anonymous: bool = False
    semi_supervised: bool = False
    cohort: str | None = None

    def to_payload(self) -> dict[str, Any]:
        payload = self.model_dump(exclude_none=True)
        if self.stages is not None:
            payload["stages"] = [s.model_dump() for s in self.stages]
        return payload


class TaskRegistration(BaseModel):
    """Profile document plus optional service-side settings."""

    profile: dict[str, Any]
    submission_token: str | None = None
    entries_quota: int | None = Field(default=None, ge=1)


class TaskSummary(BaseModel):
    task_id: str
    task_name: str
    submissions: int


class TaskList(BaseModel):
    tasks: list[TaskSummary]


class IssueOut(BaseModel):
    code: str
    message: str
    field: str | None = None
    row: int | None = None
    submission_id: str | None = None


class SubmitAccepted(BaseModel):
    accepted: bool = True
    submission: dict[str, Any]
    warnings: list[IssueOut] = []


class ErrorBody(BaseModel):
    code: str
    message: str
    details: list[IssueOut] = []
