import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderProfileScreen } from "../src/views/profile.js";
import { fakeServer, flush } from "./helpers.js";

function setup() {
  document.body.innerHTML = '<div id="root"></div>';
  const root = document.getElementById("root") as HTMLElement;
  const server = fakeServer();
  server.routes.set("POST /profiles", (body: any) => ({
    body: {
      profile: {
        user_id: "u-assigned",
        age_band: "UNDISCLOSED",
        gender: "UNDISCLOSED",
        profession: body.profession || "undisclosed",
        education: "UNDISCLOSED",
        consent: body.consent,
        seen_questions: [],
        domain_views: {},
      },
      token: "tok-1",
    },
  }));
  const api = new ApiClient("", server.fetchFn);
  const sessions: string[] = [];
  renderProfileScreen(root, api, { onSession: (id) => sessions.push(id) });
  return { root, server, api, sessions };
}

describe("profile screen", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("consent starts unchecked and is sent explicitly", async () => {
    const { root, server, sessions } = setup();
    const consent = root.querySelector("#profile-consent") as HTMLInputElement;
    expect(consent.checked).toBe(false);
    (root.querySelector("#profile-submit") as HTMLButtonElement).click();
    await flush();
    expect(server.calls[0].body).toMatchObject({ consent: false });
    expect(sessions).toEqual(["u-assigned"]);
  });

  it("shows the analytics-excluded notice when consent is off", async () => {
    const { root } = setup();
    (root.querySelector("#profile-submit") as HTMLButtonElement).click();
    await flush();
    expect(root.querySelector("#profile-status")?.textContent).toContain("excluded from analytics");
  });

  it("no notice when consent is granted", async () => {
    const { root } = setup();
    (root.querySelector("#profile-consent") as HTMLInputElement).click();
    (root.querySelector("#profile-submit") as HTMLButtonElement).click();
    await flush();
    const status = root.querySelector("#profile-status")?.textContent ?? "";
    expect(status).toContain("Profile saved");
    expect(status).not.toContain("excluded");
  });

  it("demographic fields are closed dropdowns", () => {
    const { root } = setup();
    const age = root.querySelector("#profile-age") as HTMLSelectElement;
    expect(age.tagName).toBe("SELECT");
    expect(Array.from(age.options).map((o) => o.value)).toContain("18-25");
    expect(root.querySelector("#profile-gender")?.tagName).toBe("SELECT");
    expect(root.querySelector("#profile-education")?.tagName).toBe("SELECT");
  });

  it("surfaces API errors inline", async () => {
    const { root, server } = setup();
    server.routes.set("POST /profiles", () => ({
      status: 400,
      body: { error: { code: "INVALID_ENUM", message: "bad age band" } },
    }));
    (root.querySelector("#profile-submit") as HTMLButtonElement).click();
    await flush();
    expect(root.querySelector("#profile-status")?.textContent).toContain("INVALID_ENUM");
  });

  it("network failure offers retry and preserves the draft", async () => {
    const { root, server, sessions } = setup();
    const profession = root.querySelector("#profile-profession") as HTMLInputElement;
    profession.value = "cartographer";
    server.fail = true;
    (root.querySelector("#profile-submit") as HTMLButtonElement).click();
    await flush();
    expect(root.querySelector("#profile-status")?.textContent).toContain("Network failure");
    expect(profession.value).toBe("cartographer"); // draft untouched
    server.fail = false;
    (root.querySelector("#profile-retry") as HTMLButtonElement).click();
    await flush();
    expect(sessions).toEqual(["u-assigned"]);
    expect(root.querySelector("#profile-status")?.textContent).toContain("Profile saved");
  });
});
