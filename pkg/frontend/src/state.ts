/**
 * Per-tab view state. One evaluator session per tab; votes are never
 * optimistic — the UI only advances to the reveal panel after the server
 * acknowledges the vote.
 */

import type { CrowdBreakdown, LeaderboardEntry, RoundView } from "./api.js";
import type { Outcome } from "./schema.js";

export interface VoteDraft {
  outcome: Outcome | null;
  scoreA: number | null;
  scoreB: number | null;
  judgeOutcome: Outcome | null;
  judgeScoreC: number | null;
  judgeScoreD: number | null;
}

export function emptyDraft(): VoteDraft {
  return { outcome: null, scoreA: null, scoreB: null, judgeOutcome: null, judgeScoreC: null, judgeScoreD: null };
}

/** The submit control stays disabled until an outcome is selected. */
export function canSubmit(draft: VoteDraft): boolean {
  return draft.outcome !== null;
}

export interface ViewState {
  userId: string | null;
  currentRound: RoundView | null;
  currentQuestionId: string | null;
  draft: VoteDraft;
  voted: boolean;
  leaderboardCache: Map<string, LeaderboardEntry[]>;
  breakdownCache: Map<string, CrowdBreakdown>;
}

export function freshState(): ViewState {
  return {
    userId: null,
    currentRound: null,
    currentQuestionId: null,
    draft: emptyDraft(),
    voted: false,
    leaderboardCache: new Map(),
    breakdownCache: new Map(),
  };
}

export function beginRound(state: ViewState, round: RoundView, questionId: string | null): void {
  state.currentRound = round;
  state.currentQuestionId = questionId;
  state.draft = emptyDraft();
  state.voted = false;
}
