/**
 * Single-page shell: three tabs (profile, arena, insights) over one
 * shared session. The only configuration is the API base URL.
 */

import { ApiClient } from "./api.js";
import { clear, el } from "./dom.js";
import { freshState, ViewState } from "./state.js";
import { renderArenaScreen } from "./views/arena.js";
import { renderInsightsScreen } from "./views/insights.js";
import { renderProfileScreen } from "./views/profile.js";

export type TabName = "profile" | "arena" | "insights";

export interface App {
  state: ViewState;
  api: ApiClient;
  show(tab: TabName): void;
}

export function mountApp(root: HTMLElement, api: ApiClient): App {
  const state = freshState();
  clear(root);

  const tabs: Record<TabName, HTMLButtonElement> = {
    profile: el("button", { id: "tab-profile", type: "button" }, "Profile"),
    arena: el("button", { id: "tab-arena", type: "button" }, "Arena"),
    insights: el("button", { id: "tab-insights", type: "button" }, "Insights"),
  };
  const nav = el("nav", { class: "tabs" }, tabs.profile, tabs.arena, tabs.insights);
  const screen = el("main", { id: "screen" });
  root.append(el("header", {}, el("h1", {}, "Model Arena"), nav), screen);

  const app: App = {
    state,
    api,
    show(tab: TabName) {
      Object.values(tabs).forEach((b) => b.classList.remove("active"));
      tabs[tab].classList.add("active");
      if (tab === "profile") {
        renderProfileScreen(screen, api, {
          onSession(userId) {
            state.userId = userId;
          },
        });
      } else if (tab === "arena") {
        renderArenaScreen(screen, api, state);
      } else {
        renderInsightsScreen(screen, api, state);
      }
    },
  };

  tabs.profile.addEventListener("click", () => app.show("profile"));
  tabs.arena.addEventListener("click", () => app.show("arena"));
  tabs.insights.addEventListener("click", () => app.show("insights"));

  app.show("profile");
  return app;
}

declare global {
  interface Window {
    MODELARENA_API_BASE?: string;
  }
}

// Browser entry point; tests mount explicitly instead.
if (typeof document !== "undefined" && document.getElementById("app")) {
  const base = window.MODELARENA_API_BASE ?? "";
  mountApp(document.getElementById("app") as HTMLElement, new ApiClient(base));
}
