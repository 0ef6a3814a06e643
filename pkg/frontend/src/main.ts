// DOM glue: owns the mutable state, re-renders on change, and keeps the
// URL in sync so every view is shareable. All data comes from the
// service; renders are pure functions over its responses.

import { ApiClient, type LevelGrid } from "./api.js";
import {
  boundsQuery,
  defaultState,
  fromQuery,
  renderBoard,
  renderControls,
  renderDetail,
  renderFrontierNote,
  toQuery,
  type ExplorerState,
} from "./explorer.js";
import type { DescribePayload, LeaderboardPayload } from "./types.js";
import type { Dimension } from "./tags.js";
import {
  addStage,
  applyServiceErrors,
  buildPayload,
  canSubmit,
  chooseLevel,
  markNetworkFailure,
  markSubmitted,
  newWizard,
  removeStage,
  renderWizard,
  setCurrentDimension,
  setField,
  setFlag,
  setMetric,
  setMultiStage,
  updateStage,
  type WizardState,
} from "./wizard.js";

const api = new ApiClient("");
const app = document.getElementById("app") as HTMLElement;

let state: ExplorerState = defaultState("");
let wizard: WizardState | null = null;
let board: LeaderboardPayload | null = null;
let frontierIds = new Set<string>();
let frontierNote = "";
let detail = "";
let grid: LevelGrid | null = null;

function syncUrl(): void {
  history.replaceState(null, "", `?${toQuery(state)}`);
}

async function refreshBoard(): Promise<void> {
  board = await api.leaderboard(state.taskId, boundsQuery(state));
  if (state.frontier) {
    const frontier = await api.frontier(state.taskId);
    frontierIds = new Set(frontier.frontier);
    frontierNote = renderFrontierNote(frontier, true);
  } else {
    frontierIds = new Set();
    frontierNote = "";
  }
}

async function refreshDetail(): Promise<void> {
  detail = "";
  if (!state.selected || !board) {
    return;
  }
  const row = board.rows.find((r) => r.id === state.selected);
  if (!row) {
    return;
  }
  const described: DescribePayload = await api.describe(state.taskId, row.sls.tag);
  detail = renderDetail(row, described);
}

function render(): void {
  if (!board) {
    app.innerHTML = "<p>loading…</p>";
    return;
  }
  const tabs = `
    <nav class="view-tabs">
      <button data-action="goto-view" data-view="board" ${state.view === "board" ? "class=active" : ""}>board</button>
      <button data-action="goto-view" data-view="wizard" ${state.view === "wizard" ? "class=active" : ""}>declare</button>
    </nav>
    <h1>${board.task_name}</h1>`;
  if (state.view === "wizard") {
    if (!wizard) {
      wizard = newWizard(state.taskId, board.metrics);
    }
    app.innerHTML = tabs + renderWizard(wizard, grid);
    return;
  }
  app.innerHTML =
    tabs +
    renderControls(state) +
    frontierNote +
    renderBoard(board, frontierIds, state) +
    detail;
}

async function update(mutate: () => void): Promise<void> {
  mutate();
  syncUrl();
  try {
    await refreshBoard();
    await refreshDetail();
  } catch (err) {
    console.error(err);
  }
  render();
}

async function handleSubmit(): Promise<void> {
  if (!wizard || !canSubmit(wizard)) {
    return;
  }
  let result;
  try {
    result = await api.submit(wizard.taskId, buildPayload(wizard));
  } catch {
    wizard = markNetworkFailure(wizard);
    render();
    return;
  }
  if (result.ok) {
    wizard = markSubmitted(wizard, String(result.body.submission.id));
    await update(() => {
      state.view = "board";
      state.selected = String(result.body.submission.id);
    });
  } else {
    wizard = applyServiceErrors(wizard, result.error);
    render();
  }
}

function wizardAction(target: HTMLElement, action: string): void {
  if (!wizard) {
    return;
  }
  const index = Number(target.dataset.index ?? -1);
  switch (action) {
    case "choose-level":
      wizard = chooseLevel(
        wizard,
        target.dataset.dimension as Dimension,
        Number(target.dataset.level),
      );
      break;
    case "goto-dimension":
      wizard = setCurrentDimension(wizard, target.dataset.dimension as Dimension);
      break;
    case "toggle-multistage":
      wizard = setMultiStage(wizard, (target as HTMLInputElement).checked);
      break;
    case "add-stage":
      wizard = addStage(wizard);
      break;
    case "remove-stage":
      wizard = removeStage(wizard, index);
      break;
    case "stage-name":
      wizard = updateStage(wizard, index, { name: (target as HTMLInputElement).value });
      break;
    case "stage-level": {
      const raw = (target as HTMLSelectElement).value;
      const level = raw === "" ? null : Number(raw);
      const dim = (target.dataset.dimension as Dimension).toLowerCase() as
        | "pt"
        | "tl"
        | "td";
      wizard = updateStage(wizard, index, { [dim]: level });
      break;
    }
    case "set-field":
      wizard = setField(
        wizard,
        target.dataset.field as "team" | "date" | "caveats",
        (target as HTMLInputElement).value,
      );
      break;
    case "set-flag":
      wizard = setFlag(
        wizard,
        target.dataset.flag as "anonymous" | "semiSupervised",
        (target as HTMLInputElement).checked,
      );
      break;
    case "set-metric":
      wizard = setMetric(
        wizard,
        target.dataset.metric as string,
        (target as HTMLInputElement).value,
      );
      break;
    case "submit":
      void handleSubmit();
      return;
    default:
      return;
  }
  render();
}

function onAction(event: Event): void {
  const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
  if (!target) {
    return;
  }
  const action = target.dataset.action as string;

  if (action === "goto-view") {
    void update(() => {
      state.view = target.dataset.view === "wizard" ? "wizard" : "board";
    });
    return;
  }
  if (action === "set-bound") {
    const dim = target.dataset.dimension as "pt" | "tl" | "td";
    const end = target.dataset.end as "min" | "max";
    const value = Number((target as HTMLInputElement).value);
    void update(() => {
      const [lo, hi] = state.bounds[dim];
      state.bounds[dim] = end === "min" ? [Math.min(value, hi), hi] : [lo, Math.max(value, lo)];
    });
    return;
  }
  if (action === "toggle-frontier") {
    void update(() => {
      state.frontier = (target as HTMLInputElement).checked;
    });
    return;
  }
  if (action === "select-row") {
    void update(() => {
      state.selected = target.dataset.id ?? null;
    });
    return;
  }
  if (action === "close-detail") {
    void update(() => {
      state.selected = null;
    });
    return;
  }
  wizardAction(target, action);
}

async function start(): Promise<void> {
  let taskId = new URLSearchParams(location.search).get("task") ?? "";
  if (!taskId) {
    const tasks = await api.tasks();
    if (tasks.length === 0) {
      app.innerHTML = "<p>no tasks registered on this service yet.</p>";
      return;
    }
    taskId = tasks[0].task_id;
  }
  state = fromQuery(location.search, taskId);
  if (!state.taskId) {
    state.taskId = taskId;
  }
  try {
    await refreshBoard();
  } catch (err) {
    app.innerHTML = `<p class="banner">unknown task or unreachable service (${esc(String(err))})</p>`;
    return;
  }
  grid = await api.describeGrid(state.taskId).catch(() => null);
  await refreshDetail();
  syncUrl();
  render();
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

app.addEventListener("click", onAction);
app.addEventListener("change", onAction);
app.addEventListener("input", (event) => {
  const target = event.target as HTMLElement;
  const action = target.dataset.action;
  // Text inputs mutate state silently on each keystroke; a full render
  // here would steal focus, so re-render happens on change/click.
  if (!wizard || !action) {
    return;
  }
  if (action === "set-field") {
    wizard = setField(
      wizard,
      target.dataset.field as "team" | "date" | "caveats",
      (target as HTMLInputElement).value,
    );
  } else if (action === "set-metric") {
    wizard = setMetric(wizard, target.dataset.metric as string, (target as HTMLInputElement).value);
  } else if (action === "stage-name") {
    wizard = updateStage(wizard, Number(target.dataset.index), {
      name: (target as HTMLInputElement).value,
    });
  }
});

void start();
