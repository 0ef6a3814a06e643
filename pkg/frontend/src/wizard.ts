// Self-declaration wizard state. Walks PT -> TL -> TD showing the six
// level descriptions per dimension (task-specialized), with an optional
// multi-stage path whose composed maximum is previewed live. A
// declaration cannot be submitted until every dimension has a chosen
// level and every schema metric has a value; the service remains the
// validator of record and its per-field errors are surfaced inline.

import type { LevelGrid } from "./api.js";
import type { ApiErrorBody } from "./types.js";
import {
  DIMENSIONS,
  LEVELS,
  composeLevels,
  formatTag,
  type Dimension,
  type Levels,
} from "./tags.js";

export interface StageDraft {
  name: string;
  pt: number | null;
  tl: number | null;
  td: number | null;
}

export interface WizardState {
  taskId: string;
  metricNames: string[];
  currentDimension: Dimension;
  chosen: { pt: number | null; tl: number | null; td: number | null };
  multiStage: boolean;
  stages: StageDraft[];
  team: string;
  date: string;
  anonymous: boolean;
  semiSupervised: boolean;
  caveats: string;
  metrics: Record<string, string>;
  fieldErrors: Record<string, string>;
  banner: string | null;
  submittedId: string | null;
}

export function newWizard(
  taskId: string,
  metricNames: string[],
  today: string = new Date().toISOString().slice(0, 10),
): WizardState {
  return {
    taskId,
    metricNames,
    currentDimension: "PT",
    chosen: { pt: null, tl: null, td: null },
    multiStage: false,
    stages: [{ name: "stage 1", pt: null, tl: null, td: null }],
    team: "",
    date: today,
    anonymous: false,
    semiSupervised: false,
    caveats: "",
    metrics: Object.fromEntries(metricNames.map((name) => [name, ""])),
    fieldErrors: {},
    banner: null,
    submittedId: null,
  };
}

function nextDimension(dim: Dimension): Dimension {
  const index = DIMENSIONS.indexOf(dim);
  return DIMENSIONS[Math.min(index + 1, DIMENSIONS.length - 1)];
}

export function chooseLevel(
  state: WizardState,
  dimension: Dimension,
  level: number,
): WizardState {
  const chosen = { ...state.chosen, [dimension.toLowerCase()]: level };
  return {
    ...state,
    chosen,
    currentDimension: nextDimension(dimension),
    fieldErrors: { ...state.fieldErrors, sls: "" },
  };
}

export function setCurrentDimension(state: WizardState, dim: Dimension): WizardState {
  return { ...state, currentDimension: dim };
}

export function setMultiStage(state: WizardState, on: boolean): WizardState {
  return { ...state, multiStage: on };
}

export function addStage(state: WizardState): WizardState {
  const stage: StageDraft = {
    name: `stage ${state.stages.length + 1}`,
    pt: null,
    tl: null,
    td: null,
  };
  return { ...state, stages: [...state.stages, stage] };
}

export function removeStage(state: WizardState, index: number): WizardState {
  if (state.stages.length <= 1) {
    return state;
  }
  return { ...state, stages: state.stages.filter((_, i) => i !== index) };
}

export function updateStage(
  state: WizardState,
  index: number,
  patch: Partial<StageDraft>,
): WizardState {
  const stages = state.stages.map((stage, i) =>
    i === index ? { ...stage, ...patch } : stage,
  );
  return { ...state, stages };
}

export function setField(
  state: WizardState,
  field: "team" | "date" | "caveats",
  value: string,
): WizardState {
  return { ...state, [field]: value, fieldErrors: { ...state.fieldErrors, [field]: "" } };
}

export function setFlag(
  state: WizardState,
  flag: "anonymous" | "semiSupervised",
  value: boolean,
): WizardState {
  return { ...state, [flag]: value };
}

export function setMetric(state: WizardState, name: string, raw: string): WizardState {
  return {
    ...state,
    metrics: { ...state.metrics, [name]: raw },
    fieldErrors: { ...state.fieldErrors, [name]: "" },
  };
}

function completeStage(stage: StageDraft): Levels | null {
  if (stage.pt === null || stage.tl === null || stage.td === null) {
    return null;
  }
  return { pt: stage.pt, tl: stage.tl, td: stage.td };
}

// The levels the declaration would carry right now, or null while the
// choice (or any stage) is incomplete.
export function effectiveLevels(state: WizardState): Levels | null {
  if (state.multiStage) {
    const complete = state.stages.map(completeStage);
    if (complete.length === 0 || complete.some((s) => s === null)) {
      return null;
    }
    return composeLevels(complete as Levels[]);
  }
  const { pt, tl, td } = state.chosen;
  if (pt === null || tl === null || td === null) {
    return null;
  }
  return { pt, tl, td };
}

export function previewTag(state: WizardState): string | null {
  const levels = effectiveLevels(state);
  return levels === null ? null : formatTag(levels);
}

export function missingFields(state: WizardState): string[] {
  const missing: string[] = [];
  if (effectiveLevels(state) === null) {
    missing.push(state.multiStage ? "stages" : "sls");
  }
  if (!state.team.trim()) {
    missing.push("team");
  }
  if (!state.date.trim()) {
    missing.push("date");
  }
  for (const name of state.metricNames) {
    if (!(state.metrics[name] ?? "").trim()) {
      missing.push(name);
    }
  }
  if (state.semiSupervised && !state.caveats.trim()) {
    missing.push("caveats");
  }
  return missing;
}

export function canSubmit(state: WizardState): boolean {
  return missingFields(state).length === 0;
}

export function buildPayload(state: WizardState): Record<string, unknown> {
  const levels = effectiveLevels(state);
  if (levels === null) {
    throw new Error("declaration is incomplete");
  }
  const payload: Record<string, unknown> = {
    team: state.team.trim(),
    date: state.date.trim(),
    sls: formatTag(levels),
    metrics: Object.fromEntries(
      state.metricNames.map((name) => [name, Number(state.metrics[name])]),
    ),
  };
  if (state.multiStage) {
    payload.stages = state.stages.map((stage) => ({
      name: stage.name.trim(),
      sls: formatTag(completeStage(stage) as Levels),
    }));
  }
  if (state.anonymous) {
    payload.anonymous = true;
  }
  if (state.semiSupervised) {
    payload.semi_supervised = true;
  }
  if (state.caveats.trim()) {
    payload.caveats = state.caveats.trim();
  }
  return payload;
}

export function applyServiceErrors(
  state: WizardState,
  error: ApiErrorBody,
): WizardState {
  const fieldErrors = { ...state.fieldErrors };
  for (const issue of error.details) {
    fieldErrors[issue.field ?? "form"] = `${issue.code}: ${issue.message}`;
  }
  return { ...state, fieldErrors, banner: error.message };
}

export function markSubmitted(state: WizardState, id: string): WizardState {
  return { ...state, submittedId: id, banner: null };
}

export function markNetworkFailure(state: WizardState): WizardState {
  // Form state is preserved untouched; only the banner changes.
  return { ...state, banner: "network failure: the declaration was not sent" };
}

// ---------------------------------------------------------------------------
// rendering

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function levelCards(
  state: WizardState,
  grid: LevelGrid | null,
  dimension: Dimension,
): string {
  const chosen = state.chosen[dimension.toLowerCase() as "pt" | "tl" | "td"];
  const cards = LEVELS.map((level) => {
    const entry = grid?.[dimension]?.[level];
    const text = entry ? entry.text : "";
    const origin = entry?.source === "override" ? " (task-specific)" : "";
    const selected = chosen === level ? " selected" : "";
    return `
      <button class="level-card sls-${dimension.toLowerCase()}-${level}${selected}"
              data-action="choose-level" data-dimension="${dimension}" data-level="${level}">
        <span class="level-number">${dimension}-${level}${origin}</span>
        <span class="level-text">${esc(text)}</span>
      </button>`;
  });
  return `<div class="level-cards">${cards.join("")}</div>`;
}

function stageEditor(state: WizardState): string {
  const rows = state.stages
    .map((stage, i) => {
      const selects = DIMENSIONS.map((dim) => {
        const current = levelOfDraft(stage, dim);
        const options = LEVELS.map(
          (level) =>
            `<option value="${level}"${current === level ? " selected" : ""}>${level}</option>`,
        ).join("");
        return `
          <label>${dim}
            <select data-action="stage-level" data-index="${i}" data-dimension="${dim}">
              <option value=""${current === null ? " selected" : ""}>-</option>${options}
            </select>
          </label>`;
      }).join("");
      return `
        <li class="stage-row">
          <input type="text" value="${esc(stage.name)}" data-action="stage-name" data-index="${i}">
          ${selects}
          <button data-action="remove-stage" data-index="${i}">remove</button>
        </li>`;
    })
    .join("");
  return `
    <ol class="stage-list">${rows}</ol>
    <button data-action="add-stage">add stage</button>`;
}

function levelOfDraft(stage: StageDraft, dim: Dimension): number | null {
  switch (dim) {
    case "PT":
      return stage.pt;
    case "TL":
      return stage.tl;
    case "TD":
      return stage.td;
  }
}

function fieldError(state: WizardState, field: string): string {
  const message = state.fieldErrors[field];
  return message ? `<span class="field-error" data-field="${esc(field)}">${esc(message)}</span>` : "";
}

export function renderWizard(state: WizardState, grid: LevelGrid | null): string {
  const tag = previewTag(state);
  const preview = tag
    ? `<code class="preview-tag" data-role="preview-tag">${esc(tag)}</code>`
    : `<code class="preview-tag preview-incomplete" data-role="preview-tag">SLS-?-?-?</code>`;

  const dimensionTabs = DIMENSIONS.map(
    (dim) =>
      `<button class="dim-tab${state.currentDimension === dim ? " active" : ""}"
               data-action="goto-dimension" data-dimension="${dim}">${dim}</button>`,
  ).join("");

  const singlePath = `
    <nav class="dim-tabs">${dimensionTabs}</nav>
    ${levelCards(state, grid, state.currentDimension)}`;

  const metricInputs = state.metricNames
    .map(
      (name) => `
      <label class="metric-input">${esc(name)}
        <input type="number" step="any" name="${esc(name)}" value="${esc(state.metrics[name] ?? "")}"
               data-action="set-metric" data-metric="${esc(name)}">
        ${fieldError(state, name)}
      </label>`,
    )
    .join("");

  const banner = state.banner
    ? `<p class="banner" data-role="banner">${esc(state.banner)}</p>`
    : "";
  const submitted = state.submittedId
    ? `<p class="submitted" data-role="submitted">accepted as ${esc(state.submittedId)}</p>`
    : "";

  return `
  <section class="wizard" data-view="wizard">
    <h2>Declare a submission</h2>
    ${banner}${submitted}
    <p>Composed tag: ${preview}</p>
    <label class="multi-toggle">
      <input type="checkbox" data-action="toggle-multistage"${state.multiStage ? " checked" : ""}>
      multi-stage method (declares one level triple per stage; the maximum counts)
    </label>
    ${state.multiStage ? stageEditor(state) : singlePath}
    <div class="submission-fields">
      <label>team <input type="text" value="${esc(state.team)}" data-action="set-field" data-field="team">
        ${fieldError(state, "team")}</label>
      <label>date <input type="date" value="${esc(state.date)}" data-action="set-field" data-field="date">
        ${fieldError(state, "date")}</label>
      <label><input type="checkbox" data-action="set-flag" data-flag="anonymous"${state.anonymous ? " checked" : ""}> anonymous</label>
      <label><input type="checkbox" data-action="set-flag" data-flag="semiSupervised"${state.semiSupervised ? " checked" : ""}> semi-supervised (requires a caveat)</label>
      <label>caveats <input type="text" value="${esc(state.caveats)}" data-action="set-field" data-field="caveats">
        ${fieldError(state, "caveats")}</label>
      ${fieldError(state, "sls")}${fieldError(state, "stages")}${fieldError(state, "form")}
    </div>
    <div class="metric-fields">${metricInputs}</div>
    <button class="submit" data-action="submit" ${canSubmit(state) ? "" : "disabled"}>submit declaration</button>
  </section>`;
}
