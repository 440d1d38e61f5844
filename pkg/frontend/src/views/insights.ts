/**
 * Leaderboard and crowd-analysis screen. The crowd chart consumes the
 * breakdown payload exactly as served (no client-side aggregation);
 * suppressed groups render an "n too small" placeholder instead of bars.
 */

import { ApiClient, BreakdownGroup, CrowdBreakdown, LeaderboardEntry } from "../api.js";
import { clear, el, option } from "../dom.js";
import { ViewState } from "../state.js";

const TRACKS = ["GENERATIVE", "KNOWLEDGE", "DISCRIMINATIVE"];
const DIMENSIONS = ["age_band", "gender", "profession", "education"];

export function renderInsightsScreen(root: HTMLElement, api: ApiClient, state: ViewState): void {
  clear(root);

  const trackSelect = el("select", { id: "insights-track" });
  TRACKS.forEach((t) => trackSelect.append(option(t)));
  const dimensionSelect = el("select", { id: "insights-dimension" });
  DIMENSIONS.forEach((d) => dimensionSelect.append(option(d)));

  const boardBox = el("div", { id: "leaderboard-box" });
  const chartBox = el("div", { id: "crowd-box" });

  root.append(
    el("h2", {}, "Leaderboard"),
    el("label", {}, "Ability track ", trackSelect),
    boardBox,
    el("h2", {}, "Crowd analysis"),
    el("label", {}, "Dimension ", dimensionSelect),
    chartBox,
  );

  function renderBoard(entries: LeaderboardEntry[]): void {
    clear(boardBox);
    if (entries.length === 0) {
      boardBox.append(el("p", { id: "leaderboard-empty", class: "empty" }, "No models on this leaderboard yet."));
      return;
    }
    const table = el("table", { id: "leaderboard-table" });
    const head = el("tr", {});
    for (const title of ["#", "Model", "Rating", "Matches"]) {
      head.append(el("th", {}, title));
    }
    table.append(head);
    for (const entry of entries) {
      const row = el("tr", { "data-model": entry.model_id });
      row.append(
        el("td", {}, String(entry.rank)),
        el("td", {}, entry.display_name),
        el("td", {}, String(entry.rating_displayed)),
        el("td", {}, String(entry.matches_played)),
      );
      table.append(row);
    }
    boardBox.append(table);
  }

  function renderGroup(group: BreakdownGroup): HTMLElement {
    const box = el("div", { class: "group", "data-group": group.label });
    box.append(el("h4", {}, `${group.label} (${group.vote_count} votes)`));
    if (group.suppressed) {
      box.append(el("p", { class: "suppressed" }, "n too small"));
      return box;
    }
    for (const stats of group.series) {
      const bar = el("div", { class: "bar-row" });
      const fill = el("div", { class: "bar-fill" });
      fill.style.width = `${Math.round(stats.win_rate * 100)}%`;
      const meanText = stats.mean_score === null ? "no scores" : `mean ${stats.mean_score.toFixed(2)}`;
      bar.append(
        el("span", { class: "bar-label" }, `${stats.model_id} (${meanText}, n=${stats.n})`),
        el("div", { class: "bar-track" }, fill),
        el("span", { class: "bar-value" }, `${(stats.win_rate * 100).toFixed(0)}%`),
      );
      box.append(bar);
    }
    return box;
  }

  function renderCrowd(breakdown: CrowdBreakdown): void {
    clear(chartBox);
    if (breakdown.groups.length === 0) {
      chartBox.append(el("p", { class: "empty" }, "No consenting votes yet for this track."));
      return;
    }
    for (const group of breakdown.groups) {
      chartBox.append(renderGroup(group));
    }
  }

  async function refreshBoard(): Promise<void> {
    const track = trackSelect.value;
    const { entries } = await api.leaderboard(track);
    state.leaderboardCache.set(track, entries);
    renderBoard(entries);
  }

  async function refreshCrowd(): Promise<void> {
    const key = `${dimensionSelect.value}:${trackSelect.value}`;
    const breakdown = await api.crowdBreakdown(dimensionSelect.value, trackSelect.value);
    state.breakdownCache.set(key, breakdown);
    renderCrowd(breakdown);
  }

  trackSelect.addEventListener("change", () => void Promise.all([refreshBoard(), refreshCrowd()]));
  dimensionSelect.addEventListener("change", () => void refreshCrowd());

  void refreshBoard();
  void refreshCrowd();
}
