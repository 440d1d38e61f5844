import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { freshState } from "../src/state.js";
import { renderArenaScreen } from "../src/views/arena.js";
import { clickByText, fakeServer, flush, sampleRound } from "./helpers.js";

function setup() {
  document.body.innerHTML = '<div id="root"></div>';
  const root = document.getElementById("root") as HTMLElement;
  const server = fakeServer();
  server.routes.set("GET /questions/next", () => ({
    body: {
      question: { question_id: "q1", domain: "science", stem: "Which option is right?", options: ["1", "2", "3", "4"], source: "CURATED" },
    },
  }));
  server.routes.set("POST /rounds/centralized", () => ({ body: sampleRound() }));
  server.routes.set("POST /rounds/decentralized", (body: any) => ({
    body: sampleRound({ ticket_id: "t-free-1", prompt: body.prompt }),
  }));
  server.routes.set("POST /rounds/t-test-1/judges", () => ({
    body: sampleRound({
      judge_verdict_c: "Judge C thinks A is stronger.",
      judge_verdict_d: "Judge D sees them as equal.",
    }),
  }));
  server.routes.set("POST /votes", () => ({
    body: {
      deltas: {
        GENERATIVE: [
          { label: "A", model_id: "m-alpha", before: 1000, after: 1016 },
          { label: "B", model_id: "m-beta", before: 1000, after: 984 },
        ],
      },
    },
  }));
  server.routes.set("GET /rounds/t-test-1/reveal", () => ({
    body: { assignment: { A: "m-alpha", B: "m-beta" } },
  }));
  const api = new ApiClient("", server.fetchFn);
  const state = freshState();
  state.userId = "u-tester";
  renderArenaScreen(root, api, state);
  return { root, server, api, state };
}

async function startRound(root: HTMLElement) {
  (root.querySelector("#arena-next") as HTMLButtonElement).click();
  await flush();
}

describe("arena screen", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("renders the four exact verdict buttons after a round", async () => {
    const { root } = setup();
    await startRound(root);
    const labels = Array.from(root.querySelectorAll("#vote-buttons button")).map((b) => b.textContent);
    expect(labels).toEqual(["JUST AS GOOD", "A IS BETTER", "B IS BETTER", "JUST AS BAD"]);
  });

  it("shows the question and both anonymous panes", async () => {
    const { root } = setup();
    await startRound(root);
    expect(root.querySelector("#arena-question")?.textContent).toBe("Which option is right?");
    expect(root.querySelector("#pane-a")?.textContent).toContain("first anonymous model");
    expect(root.querySelector("#pane-b")?.textContent).toContain("second anonymous model");
    // nothing resembling an identity before the vote
    expect(document.body.innerHTML).not.toContain("m-alpha");
    expect(document.body.innerHTML).not.toContain("m-beta");
  });

  it("submit stays disabled until an outcome is selected", async () => {
    const { root } = setup();
    await startRound(root);
    const submit = root.querySelector("#vote-submit") as HTMLButtonElement;
    expect(submit.disabled).toBe(true);
    clickByText(root, "#vote-buttons button", "A IS BETTER");
    expect(submit.disabled).toBe(false);
  });

  it("vote posts a schema-valid payload and swaps in the reveal panel", async () => {
    const { root, server } = setup();
    await startRound(root);
    clickByText(root, "#vote-buttons button", "A IS BETTER");
    const includeA = root.querySelector("#score-a-include") as HTMLInputElement;
    includeA.click();
    (root.querySelector("#score-a") as HTMLInputElement).value = "5";
    (root.querySelector("#vote-submit") as HTMLButtonElement).click();
    await flush();

    const voteCall = server.calls.find((c) => c.path === "/votes");
    expect(voteCall?.body).toMatchObject({
      ticket_id: "t-test-1",
      user_id: "u-tester",
      outcome: "A_BETTER",
      score_a: 5,
    });
    expect((voteCall?.body as any).score_b).toBeUndefined();

    expect(root.querySelector("#vote-panel")?.className).toContain("hidden");
    const reveal = root.querySelector("#reveal-panel") as HTMLElement;
    expect(reveal.className).not.toContain("hidden");
    expect(reveal.textContent).toContain("m-alpha");
    expect(reveal.textContent).toContain("+16.0");
  });

  it("free prompt box runs a decentralized round", async () => {
    const { root, server } = setup();
    (root.querySelector("#arena-prompt-input") as HTMLTextAreaElement).value = "my own question";
    (root.querySelector("#arena-prompt-send") as HTMLButtonElement).click();
    await flush();
    expect(server.calls.some((c) => c.path === "/rounds/decentralized")).toBe(true);
    expect(root.querySelector("#arena-question")?.textContent).toBe("my own question");
  });

  it("judge flow shows verdicts and includes the judge vote in the payload", async () => {
    const { root, server } = setup();
    await startRound(root);
    (root.querySelector("#judge-request") as HTMLButtonElement).click();
    await flush();
    expect(root.querySelector("#judge-pane-c")?.textContent).toContain("Judge C");
    clickByText(root, "#judge-buttons button", "C IS BETTER");
    clickByText(root, "#vote-buttons button", "JUST AS GOOD");
    (root.querySelector("#vote-submit") as HTMLButtonElement).click();
    await flush();
    const voteCall = server.calls.find((c) => c.path === "/votes");
    expect(voteCall?.body).toMatchObject({ outcome: "BOTH_GOOD", judge_outcome: "A_BETTER" });
  });

  it("ALL_SEEN steers to the prompt box", async () => {
    const { root, server } = setup();
    server.routes.set("GET /questions/next", () => ({
      status: 409,
      body: { error: { code: "ALL_SEEN", message: "corpus exhausted" } },
    }));
    await startRound(root);
    const banner = root.querySelector("#arena-banner") as HTMLElement;
    expect(banner.className).not.toContain("hidden");
    expect(banner.textContent).toContain("ask your own question");
    expect(document.activeElement?.id).toBe("arena-prompt-input");
  });
});
