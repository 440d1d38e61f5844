/**
 * The battle screen: a recommended question or a custom prompt, two
 * anonymous answer panes (A/B), the four comparative verdict buttons,
 * optional 1-5 score sliders, optional judge verdicts (C/D), and after a
 * vote the reveal panel with rating deltas and true identities.
 *
 * The submit control is disabled until an outcome is chosen, and nothing
 * is rendered optimistically: the reveal panel only replaces the vote
 * panel once the server acknowledges the vote.
 */

import { ApiClient, ApiError, DeltasByTrack, RoundView } from "../api.js";
import { clear, el } from "../dom.js";
import { Outcome, VOTE_BUTTON_LABELS, validateVote } from "../schema.js";
import { ViewState, beginRound, canSubmit } from "../state.js";

const JUDGE_BUTTON_LABELS: ReadonlyArray<[string, Outcome]> = [
  ["JUST AS GOOD", "BOTH_GOOD"],
  ["C IS BETTER", "A_BETTER"],
  ["D IS BETTER", "B_BETTER"],
  ["JUST AS BAD", "BOTH_BAD"],
];

interface ScoreControl {
  wrapper: HTMLElement;
  include: HTMLInputElement;
  slider: HTMLInputElement;
  value(): number | undefined;
}

function scoreControl(id: string, label: string): ScoreControl {
  const include = el("input", { id: `${id}-include`, type: "checkbox" });
  const slider = el("input", { id, type: "range", min: "1", max: "5", step: "1", value: "3" });
  const wrapper = el("label", { class: "score-control" }, include, ` ${label} `, slider);
  return {
    wrapper,
    include,
    slider,
    value: () => (include.checked ? Number(slider.value) : undefined),
  };
}

export function renderArenaScreen(root: HTMLElement, api: ApiClient, state: ViewState): void {
  clear(root);

  const banner = el("div", { id: "arena-banner", class: "banner hidden" });
  const questionBox = el("div", { id: "arena-question", class: "question-box" });
  const paneA = el("div", { id: "pane-a", class: "answer-pane" });
  const paneB = el("div", { id: "pane-b", class: "answer-pane" });
  const panes = el(
    "div",
    { class: "panes" },
    el("div", { class: "pane-wrap" }, el("h3", {}, "Response A"), paneA),
    el("div", { class: "pane-wrap" }, el("h3", {}, "Response B"), paneB),
  );

  const judgeSection = el("div", { id: "judge-section", class: "hidden" });
  const votePanel = el("div", { id: "vote-panel", class: "hidden" });
  const revealPanel = el("div", { id: "reveal-panel", class: "hidden" });

  const nextButton = el("button", { id: "arena-next", type: "button" }, "Next recommended question");
  const promptInput = el("textarea", {
    id: "arena-prompt-input",
    placeholder: "Or ask your own question…",
  });
  const promptSend = el("button", { id: "arena-prompt-send", type: "button" }, "Evaluate my question");
  const controls = el(
    "div",
    { class: "arena-controls" },
    nextButton,
    el("div", { class: "prompt-box" }, promptInput, promptSend),
  );

  root.append(banner, controls, questionBox, panes, judgeSection, votePanel, revealPanel);

  const requireUser = (): string | null => {
    if (!state.userId) {
      banner.className = "banner";
      banner.textContent = "Create a profile first.";
      return null;
    }
    return state.userId;
  };

  const showRound = (round: RoundView, questionId: string | null) => {
    beginRound(state, round, questionId);
    banner.className = "banner hidden";
    questionBox.textContent = round.prompt;
    paneA.textContent = round.response_a;
    paneB.textContent = round.response_b;
    revealPanel.className = "hidden";
    clear(revealPanel);
    renderJudgeSection();
    renderVotePanel();
  };

  // -- judges ---------------------------------------------------------------

  let judgeOutcome: Outcome | null = null;
  let judgeScoreC: ScoreControl | null = null;
  let judgeScoreD: ScoreControl | null = null;

  function renderJudgeSection(): void {
    clear(judgeSection);
    judgeOutcome = null;
    judgeScoreC = null;
    judgeScoreD = null;
    const round = state.currentRound;
    if (!round) {
      judgeSection.className = "hidden";
      return;
    }
    judgeSection.className = "judge-section";
    if (!round.judge_verdict_c) {
      const request = el("button", { id: "judge-request", type: "button" }, "Ask two judge models");
      request.addEventListener("click", () => {
        void (async () => {
          try {
            const judged = await api.drawJudges(round.ticket_id);
            state.currentRound = judged;
            renderJudgeSection();
          } catch (error) {
            if (error instanceof ApiError) {
              banner.className = "banner";
              banner.textContent = `${error.code}: ${error.message}`;
            } else {
              throw error;
            }
          }
        })();
      });
      judgeSection.append(request);
      return;
    }
    const verdictC = el("div", { id: "judge-pane-c", class: "answer-pane" }, round.judge_verdict_c ?? "");
    const verdictD = el("div", { id: "judge-pane-d", class: "answer-pane" }, round.judge_verdict_d ?? "");
    const buttons = el("div", { id: "judge-buttons", class: "vote-buttons" });
    for (const [label, outcome] of JUDGE_BUTTON_LABELS) {
      const button = el("button", { type: "button", "data-judge-outcome": outcome, class: "judge-vote" }, label);
      button.addEventListener("click", () => {
        judgeOutcome = outcome;
        buttons.querySelectorAll("button").forEach((b) => b.classList.remove("selected"));
        button.classList.add("selected");
      });
      buttons.append(button);
    }
    judgeScoreC = scoreControl("judge-score-c", "Judge C score");
    judgeScoreD = scoreControl("judge-score-d", "Judge D score");
    judgeSection.append(
      el("h3", {}, "Judge verdicts"),
      el(
        "div",
        { class: "panes" },
        el("div", { class: "pane-wrap" }, el("h4", {}, "Judge C"), verdictC),
        el("div", { class: "pane-wrap" }, el("h4", {}, "Judge D"), verdictD),
      ),
      buttons,
      judgeScoreC.wrapper,
      judgeScoreD.wrapper,
    );
  }

  // -- voting ----------------------------------------------------------------

  function renderVotePanel(): void {
    clear(votePanel);
    const round = state.currentRound;
    if (!round || state.voted) {
      votePanel.className = "hidden";
      return;
    }
    votePanel.className = "vote-panel";
    const buttons = el("div", { id: "vote-buttons", class: "vote-buttons" });
    const submit = el("button", { id: "vote-submit", type: "button" }, "Submit vote");
    submit.disabled = true; // no outcome selected yet

    for (const [label, outcome] of VOTE_BUTTON_LABELS) {
      const button = el("button", { type: "button", "data-outcome": outcome, class: "vote-option" }, label);
      button.addEventListener("click", () => {
        state.draft.outcome = outcome;
        buttons.querySelectorAll("button").forEach((b) => b.classList.remove("selected"));
        button.classList.add("selected");
        submit.disabled = !canSubmit(state.draft);
      });
      buttons.append(button);
    }

    const scoreA = scoreControl("score-a", "Score A (1-5)");
    const scoreB = scoreControl("score-b", "Score B (1-5)");
    const voteStatus = el("div", { id: "vote-status", class: "status" });

    submit.addEventListener("click", () => {
      void (async () => {
        const payload = {
          ticket_id: round.ticket_id,
          user_id: state.userId ?? "",
          outcome: state.draft.outcome ?? "",
          score_a: scoreA.value(),
          score_b: scoreB.value(),
          judge_outcome: judgeOutcome ?? undefined,
          judge_score_c: judgeScoreC?.value(),
          judge_score_d: judgeScoreD?.value(),
        };
        const validation = validateVote(payload);
        if (!validation.ok) {
          voteStatus.className = "status error";
          voteStatus.textContent = validation.errors.join("; ");
          return;
        }
        try {
          const { deltas } = await api.submitVote(payload);
          state.voted = true;
          await showReveal(round, deltas);
        } catch (error) {
          if (error instanceof ApiError) {
            voteStatus.className = "status error";
            voteStatus.textContent = `${error.code}: ${error.message}`;
          } else {
            throw error;
          }
        }
      })();
    });

    votePanel.append(
      el("h3", {}, "Your verdict"),
      buttons,
      scoreA.wrapper,
      scoreB.wrapper,
      submit,
      voteStatus,
    );
  }

  async function showReveal(round: RoundView, deltas: DeltasByTrack): Promise<void> {
    const { assignment } = await api.reveal(round.ticket_id);
    votePanel.className = "hidden";
    clear(votePanel);
    judgeSection.className = "hidden";
    clear(revealPanel);
    revealPanel.className = "reveal-panel";
    const identity = el("ul", { id: "reveal-identities" });
    for (const [label, modelId] of Object.entries(assignment)) {
      identity.append(el("li", {}, `${label}: ${modelId}`));
    }
    const deltaList = el("ul", { id: "reveal-deltas" });
    for (const [track, rows] of Object.entries(deltas)) {
      for (const row of rows) {
        const change = row.after - row.before;
        const sign = change >= 0 ? "+" : "";
        deltaList.append(
          el("li", {}, `${track} ${row.label} (${row.model_id}): ${sign}${change.toFixed(1)}`),
        );
      }
    }
    revealPanel.append(el("h3", {}, "Revealed identities"), identity, el("h3", {}, "Rating changes"), deltaList);
  }

  // -- round entry points ------------------------------------------------------

  nextButton.addEventListener("click", () => {
    void (async () => {
      const userId = requireUser();
      if (!userId) return;
      try {
        const { question } = await api.nextQuestion(userId);
        const round = await api.centralizedRound(userId, question.question_id);
        showRound(round, question.question_id);
      } catch (error) {
        if (error instanceof ApiError && error.code === "ALL_SEEN") {
          banner.className = "banner";
          banner.textContent =
            "You have seen every curated question — ask your own question below instead.";
          promptInput.focus();
        } else if (error instanceof ApiError) {
          banner.className = "banner";
          banner.textContent = `${error.code}: ${error.message}`;
        } else {
          throw error;
        }
      }
    })();
  });

  promptSend.addEventListener("click", () => {
    void (async () => {
      const userId = requireUser();
      if (!userId) return;
      try {
        const round = await api.decentralizedRound(userId, promptInput.value);
        promptInput.value = "";
        showRound(round, null);
      } catch (error) {
        if (error instanceof ApiError) {
          banner.className = "banner";
          banner.textContent = `${error.code}: ${error.message}`;
        } else {
          throw error;
        }
      }
    })();
  });

  // returning to the tab with an unvoted round in flight: show it again
  if (state.currentRound && !state.voted) {
    showRound(state.currentRound, state.currentQuestionId);
  }
}
