/**
 * Client-side validation of the vote payload. Every vote validates
 * against this schema before a request is sent; the server enforces the
 * same rules, this just fails earlier.
 */

import type { VotePayload } from "./api.js";

export const OUTCOMES = ["A_BETTER", "B_BETTER", "BOTH_GOOD", "BOTH_BAD"] as const;
export type Outcome = (typeof OUTCOMES)[number];

/** The four comparative verdict labels, in display order. */
export const VOTE_BUTTON_LABELS: ReadonlyArray<[string, Outcome]> = [
  ["JUST AS GOOD", "BOTH_GOOD"],
  ["A IS BETTER", "A_BETTER"],
  ["B IS BETTER", "B_BETTER"],
  ["JUST AS BAD", "BOTH_BAD"],
];

export interface ValidationResult {
  ok: boolean;
  errors: string[];
}

function isScore(value: unknown): boolean {
  return typeof value === "number" && Number.isInteger(value) && value >= 1 && value <= 5;
}

export function validateVote(payload: Partial<VotePayload>): ValidationResult {
  const errors: string[] = [];
  if (!payload.ticket_id) {
    errors.push("ticket_id is required");
  }
  if (!payload.user_id) {
    errors.push("user_id is required");
  }
  if (!payload.outcome || !OUTCOMES.includes(payload.outcome as Outcome)) {
    errors.push("outcome must be one of the four comparative verdicts");
  }
  for (const field of ["score_a", "score_b", "judge_score_c", "judge_score_d"] as const) {
    const value = payload[field];
    if (value !== undefined && !isScore(value)) {
      errors.push(`${field} must be an integer from 1 to 5`);
    }
  }
  if (payload.judge_outcome !== undefined && !OUTCOMES.includes(payload.judge_outcome as Outcome)) {
    errors.push("judge_outcome must be one of the four comparative verdicts");
  }
  return { ok: errors.length === 0, errors };
}
