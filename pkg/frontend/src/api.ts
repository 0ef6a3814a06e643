// Thin client for the /v1 JSON API. The fetch function is injectable so
// tests can run against recorded responses.

import type {
  ApiErrorBody,
  DescribePayload,
  FrontierPayload,
  LeaderboardPayload,
  SubmitAccepted,
  TaskSummary,
} from "./types.js";
import { DIMENSIONS, LEVELS, type Dimension } from "./tags.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface BoundsQuery {
  pt?: [number, number];
  tl?: [number, number];
  td?: [number, number];
}

// Deterministic parameter order so identical views produce identical URLs.
export function leaderboardQuery(bounds: BoundsQuery): string {
  const params: string[] = [];
  for (const dim of ["pt", "tl", "td"] as const) {
    const range = bounds[dim];
    if (!range) {
      continue;
    }
    const [lo, hi] = range;
    if (lo > 0) {
      params.push(`${dim}_min=${lo}`);
    }
    if (hi < 5) {
      params.push(`${dim}_max=${hi}`);
    }
  }
  return params.join("&");
}

export type LevelGrid = Record<Dimension, { text: string; source: string }[]>;

export class ApiError extends Error {
  constructor(public body: ApiErrorBody, public status: number) {
    super(body.message);
  }
}

async function parseBody<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    const body = (await resp.json()) as ApiErrorBody;
    throw new ApiError(body, resp.status);
  }
  return (await resp.json()) as T;
}

export type SubmitResult =
  | { ok: true; body: SubmitAccepted }
  | { ok: false; error: ApiErrorBody };

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async tasks(): Promise<TaskSummary[]> {
    const resp = await this.fetchFn(this.url("/v1/tasks"));
    const body = await parseBody<{ tasks: TaskSummary[] }>(resp);
    return body.tasks;
  }

  async leaderboard(
    taskId: string,
    bounds: BoundsQuery = {},
  ): Promise<LeaderboardPayload> {
    const query = leaderboardQuery(bounds);
    const path = `/v1/tasks/${encodeURIComponent(taskId)}/leaderboard${query ? `?${query}` : ""}`;
    return parseBody(await this.fetchFn(this.url(path)));
  }

  async frontier(taskId: string): Promise<FrontierPayload> {
    const path = `/v1/tasks/${encodeURIComponent(taskId)}/frontier`;
    return parseBody(await this.fetchFn(this.url(path)));
  }

  async describe(taskId: string, tag: string): Promise<DescribePayload> {
    const path = `/v1/tasks/${encodeURIComponent(taskId)}/describe?tag=${encodeURIComponent(tag)}`;
    return parseBody(await this.fetchFn(this.url(path)));
  }

  // Full 3x6 grid of task-specialized level descriptions, assembled
  // from six describe calls (the tag SLS-l-l-l yields all three
  // dimension texts for level l).
  async describeGrid(taskId: string): Promise<LevelGrid> {
    const grid: LevelGrid = { PT: [], TL: [], TD: [] };
    for (const level of LEVELS) {
      const payload = await this.describe(taskId, `SLS-${level}-${level}-${level}`);
      for (const dim of DIMENSIONS) {
        const entry = payload.descriptions.find((d) => d.dimension === dim);
        grid[dim][level] = entry
          ? { text: entry.text, source: entry.source }
          : { text: "", source: "canonical" };
      }
    }
    return grid;
  }

  async submit(
    taskId: string,
    payload: Record<string, unknown>,
  ): Promise<SubmitResult> {
    const path = `/v1/tasks/${encodeURIComponent(taskId)}/submissions`;
    const resp = await this.fetchFn(this.url(path), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    if (resp.ok) {
      return { ok: true, body: (await resp.json()) as SubmitAccepted };
    }
    return { ok: false, error: (await resp.json()) as ApiErrorBody };
  }
}
