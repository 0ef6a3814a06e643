// Contract tests for the demo board: the explorer displays exactly what
// the leaderboard endpoint returns, filters re-query rather than filter
// client-side, and the frontier toggle highlights precisely the ids the
// frontier endpoint reports. Responses are recorded verbatim from the
// live service (frontend/scripts/record-fixtures.py).

import { describe, expect, test } from "vitest";

import { ApiClient } from "../src/api.js";
import {
  boundsQuery,
  defaultState,
  displayedOrder,
  renderBoard,
} from "../src/explorer.js";
import type { FrontierPayload, LeaderboardPayload } from "../src/types.js";
import { FakeFetch, fixture } from "./fakes.js";

const TASK = "epic_kitchens_ar";
const BASE = `/v1/tasks/${TASK}`;

function client(): { api: ApiClient; fake: FakeFetch } {
  const fake = new FakeFetch();
  fake.route("GET", `${BASE}/leaderboard`, "leaderboard.json");
  fake.route("GET", `${BASE}/leaderboard?tl_max=3`, "leaderboard_tl_max3.json");
  fake.route("GET", `${BASE}/frontier`, "frontier.json");
  return { api: new ApiClient("", fake.fetch), fake };
}

describe("explorer/service contract on the demo board", () => {
  test("displayed row order equals the leaderboard response", async () => {
    const { api } = client();
    const payload = await api.leaderboard(TASK);
    const html = renderBoard(payload, new Set(), defaultState(TASK));
    const rendered = [...html.matchAll(/data-id="([^"]+)"/g)].map((m) => m[1]);
    expect(rendered).toEqual(displayedOrder(payload));
    expect(rendered).toEqual([
      "uts_baidu_2020",
      "nus_cvml_2020",
      "uts_baidu_2019",
      "saic_cambridge_2020",
      "fbk_hupba_2020",
      "gt_wisc_mpi_2020",
      "g_blend_2020",
      "tbn_2019",
      "fair_2019",
    ]);
  });

  test("the TL slider at 3 re-queries and leaves exactly six rows", async () => {
    const { api, fake } = client();
    const state = defaultState(TASK);
    state.bounds.tl = [0, 3];
    const payload = await api.leaderboard(TASK, boundsQuery(state));
    expect(fake.calls.at(-1)?.url).toBe(`${BASE}/leaderboard?tl_max=3`);
    expect(payload.count).toBe(6);
    const html = renderBoard(payload, new Set(), state);
    expect([...html.matchAll(/data-id="/g)]).toHaveLength(6);
    expect(payload.rows.every((row) => row.sls.tl <= 3)).toBe(true);
  });

  test("the frontier toggle highlights exactly the three frontier rows", async () => {
    const { api } = client();
    const board = await api.leaderboard(TASK);
    const frontier = await api.frontier(TASK);
    expect(frontier.frontier).toEqual([
      "uts_baidu_2020",
      "nus_cvml_2020",
      "saic_cambridge_2020",
    ]);
    const state = defaultState(TASK);
    state.frontier = true;
    const html = renderBoard(board, new Set(frontier.frontier), state);
    const highlighted = [
      ...html.matchAll(/class="board-row frontier-row[^"]*" data-action="select-row" data-id="([^"]+)"/g),
    ].map((m) => m[1]);
    expect(new Set(highlighted)).toEqual(new Set(frontier.frontier));
    expect(highlighted).toHaveLength(3);
  });

  test("frontier witnesses point at frontier members", () => {
    const payload = fixture<FrontierPayload>("frontier.json");
    const frontier = new Set(payload.frontier);
    for (const entry of payload.dominated) {
      expect(frontier.has(entry.witness.dominator)).toBe(true);
      const deltas = Object.values(entry.witness.sls_delta);
      expect(deltas.every((d) => d <= 0)).toBe(true);
    }
  });

  test("no client-side rank arithmetic: ranks come from the payload", () => {
    const payload = fixture<LeaderboardPayload>("leaderboard.json");
    const html = renderBoard(payload, new Set(), defaultState(TASK));
    // Dense ranks with the 40.00 tie at rank 4 appear verbatim.
    expect(payload.rows.map((row) => row.rank)).toEqual([1, 2, 3, 4, 4, 5, 6, 7, 8]);
    const firstCells = [...html.matchAll(/<tr[^>]*>\s*<td>(\d*)<\/td>/g)].map((m) => m[1]);
    expect(firstCells).toEqual(["1", "2", "3", "4", "4", "5", "6", "7", "8"]);
  });
});
