// Board explorer: the ranked table exactly as the service returns it,
// with color-keyed level cells, per-dimension range sliders that
// re-query the service, a frontier highlight toggle and a detail panel.
// Every view state is encoded in the URL query so views are shareable.

import type { BoundsQuery } from "./api.js";
import type {
  BoardRow,
  DescribePayload,
  FrontierPayload,
  LeaderboardPayload,
} from "./types.js";
import { MAX_LEVEL } from "./tags.js";

export type LevelRange = [number, number];

export interface ExplorerState {
  taskId: string;
  view: "board" | "wizard";
  bounds: { pt: LevelRange; tl: LevelRange; td: LevelRange };
  frontier: boolean;
  selected: string | null;
}

const FULL: LevelRange = [0, MAX_LEVEL];

export function defaultState(taskId: string): ExplorerState {
  return {
    taskId,
    view: "board",
    bounds: { pt: [...FULL] as LevelRange, tl: [...FULL] as LevelRange, td: [...FULL] as LevelRange },
    frontier: false,
    selected: null,
  };
}

function clampLevel(raw: string | null, fallback: number): number {
  const value = Number(raw);
  if (raw === null || raw === "" || !Number.isInteger(value)) {
    return fallback;
  }
  return Math.min(Math.max(value, 0), MAX_LEVEL);
}

// URL query codec; omit everything at its default so shared links stay
// short. fromQuery(toQuery(s)) reproduces s exactly.
export function toQuery(state: ExplorerState): string {
  const params = new URLSearchParams();
  params.set("task", state.taskId);
  if (state.view !== "board") {
    params.set("view", state.view);
  }
  for (const dim of ["pt", "tl", "td"] as const) {
    const [lo, hi] = state.bounds[dim];
    if (lo > 0) {
      params.set(`${dim}_min`, String(lo));
    }
    if (hi < MAX_LEVEL) {
      params.set(`${dim}_max`, String(hi));
    }
  }
  if (state.frontier) {
    params.set("frontier", "1");
  }
  if (state.selected) {
    params.set("sel", state.selected);
  }
  return params.toString();
}

export function fromQuery(query: string | URLSearchParams, fallbackTask = ""): ExplorerState {
  const params = typeof query === "string" ? new URLSearchParams(query) : query;
  const state = defaultState(params.get("task") ?? fallbackTask);
  if (params.get("view") === "wizard") {
    state.view = "wizard";
  }
  for (const dim of ["pt", "tl", "td"] as const) {
    state.bounds[dim] = [
      clampLevel(params.get(`${dim}_min`), 0),
      clampLevel(params.get(`${dim}_max`), MAX_LEVEL),
    ];
  }
  state.frontier = params.get("frontier") === "1";
  state.selected = params.get("sel");
  return state;
}

// The service's leaderboard filter parameters for the current sliders.
export function boundsQuery(state: ExplorerState): BoundsQuery {
  const query: BoundsQuery = {};
  for (const dim of ["pt", "tl", "td"] as const) {
    const [lo, hi] = state.bounds[dim];
    if (lo > 0 || hi < MAX_LEVEL) {
      query[dim] = [lo, hi];
    }
  }
  return query;
}

// The board shows rows exactly in response order; this is the order a
// contract test compares against the raw payload.
export function displayedOrder(payload: LeaderboardPayload): string[] {
  return payload.rows.map((row) => row.id);
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function formatMetric(value: number): string {
  return Number.isInteger(value) ? String(value) : String(value);
}

function levelCell(dim: "pt" | "tl" | "td", level: number): string {
  return `<td class="sls-${dim} sls-${dim}-${level}">${level}</td>`;
}

export function renderBoard(
  payload: LeaderboardPayload,
  frontierIds: ReadonlySet<string>,
  state: ExplorerState,
): string {
  const headers = [
    "rank",
    "team",
    "entries",
    "date",
    "PT",
    "TL",
    "TD",
    ...payload.metrics,
  ]
    .map((h) => `<th>${esc(h)}</th>`)
    .join("");

  const rows = payload.rows
    .map((row) => {
      const highlight = state.frontier && frontierIds.has(row.id) ? " frontier-row" : "";
      const selected = state.selected === row.id ? " selected-row" : "";
      const metricCells = payload.metrics
        .map((name) => `<td class="metric">${formatMetric(row.metrics[name])}</td>`)
        .join("");
      return `
      <tr class="board-row${highlight}${selected}" data-action="select-row" data-id="${esc(row.id)}">
        <td>${row.rank ?? ""}</td>
        <td>${esc(row.team)}</td>
        <td>${row.entries}</td>
        <td>${esc(row.date)}</td>
        ${levelCell("pt", row.sls.pt)}${levelCell("tl", row.sls.tl)}${levelCell("td", row.sls.td)}
        ${metricCells}
      </tr>`;
    })
    .join("");

  return `
  <table class="sls-board">
    <thead><tr>${headers}</tr></thead>
    <tbody>${rows}</tbody>
  </table>`;
}

function slider(dim: "pt" | "tl" | "td", label: string, range: LevelRange): string {
  const [lo, hi] = range;
  return `
    <fieldset class="dim-slider" data-dimension="${dim}">
      <legend>${label} ${lo}..${hi}</legend>
      <input type="range" min="0" max="${MAX_LEVEL}" value="${lo}"
             data-action="set-bound" data-dimension="${dim}" data-end="min" aria-label="${label} minimum">
      <input type="range" min="0" max="${MAX_LEVEL}" value="${hi}"
             data-action="set-bound" data-dimension="${dim}" data-end="max" aria-label="${label} maximum">
    </fieldset>`;
}

export function renderControls(state: ExplorerState): string {
  return `
  <div class="controls" data-view="board">
    ${slider("pt", "PT", state.bounds.pt)}
    ${slider("tl", "TL", state.bounds.tl)}
    ${slider("td", "TD", state.bounds.td)}
    <label class="frontier-toggle">
      <input type="checkbox" data-action="toggle-frontier"${state.frontier ? " checked" : ""}>
      highlight Pareto frontier
    </label>
  </div>`;
}

export function renderDetail(row: BoardRow, described: DescribePayload): string {
  const texts = described.descriptions
    .map(
      (entry) => `
      <li class="sls-${entry.dimension.toLowerCase()}-${entry.level}">
        <strong>${entry.dimension}-${entry.level}</strong>
        ${entry.source === "override" ? "<em>(task-specific)</em>" : ""}
        ${esc(entry.text)}
      </li>`,
    )
    .join("");
  const stages = row.stages
    ? `<p>declared stages:</p><ul>${row.stages
        .map((s) => `<li>${esc(s.name)}: <code>${esc(s.sls)}</code></li>`)
        .join("")}</ul>`
    : "<p>single-stage declaration</p>";
  const caveats = row.caveats ? `<p class="caveats">caveats: ${esc(row.caveats)}</p>` : "";
  return `
  <aside class="detail" data-role="detail" data-id="${esc(row.id)}">
    <h3>${esc(row.team)} <code>${esc(row.sls.tag)}</code></h3>
    <ul class="level-texts">${texts}</ul>
    ${stages}
    ${caveats}
    <button data-action="close-detail">close</button>
  </aside>`;
}

export function renderFrontierNote(
  payload: FrontierPayload,
  enabled: boolean,
): string {
  if (!enabled) {
    return "";
  }
  return `<p class="frontier-note" data-role="frontier-note">
    ${payload.frontier.length} submission(s) on the frontier of ${payload.count}.
  </p>`;
}
