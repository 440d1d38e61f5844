/**
 * Typed client for the arena gateway. All server communication goes
 * through this module; views never touch fetch directly, which keeps the
 * transport injectable for tests.
 */

export interface ProfileRecord {
  user_id: string;
  age_band: string;
  gender: string;
  profession: string;
  education: string;
  consent: boolean;
  seen_questions: string[];
  domain_views: Record<string, number>;
}

export interface PublicQuestion {
  question_id: string;
  domain: string;
  stem: string;
  options: string[];
  source: string;
}

export interface RoundView {
  ticket_id: string;
  prompt: string;
  response_a: string;
  response_b: string;
  judge_verdict_c: string | null;
  judge_verdict_d: string | null;
}

export interface RatingDelta {
  label: string;
  model_id: string;
  before: number;
  after: number;
}

export type DeltasByTrack = Record<string, RatingDelta[]>;

export interface LeaderboardEntry {
  model_id: string;
  display_name: string;
  track: string;
  rating: number;
  rating_displayed: number;
  matches_played: number;
  rank: number;
}

export interface GroupStats {
  model_id: string;
  win_rate: number;
  mean_score: number | null;
  n: number;
}

export interface BreakdownGroup {
  label: string;
  vote_count: number;
  suppressed: boolean;
  series: GroupStats[];
}

export interface CrowdBreakdown {
  dimension: string;
  track: string;
  groups: BreakdownGroup[];
  non_consenting_votes: number;
}

export interface VotePayload {
  ticket_id: string;
  user_id: string;
  outcome: string;
  score_a?: number;
  score_b?: number;
  judge_outcome?: string;
  judge_score_c?: number;
  judge_score_d?: number;
}

/** Error shape the gateway guarantees: one machine code per failure. */
export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Network-level failure (server unreachable, connection dropped). */
export class NetworkError extends Error {
  constructor(cause: unknown) {
    super(`network failure: ${String(cause)}`);
    this.name = "NetworkError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  token: string | null = null;

  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) {
      headers["Authorization"] = `Bearer ${this.token}`;
    }
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (cause) {
      throw new NetworkError(cause);
    }
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      const error = payload?.error ?? { code: "UNKNOWN", message: response.statusText };
      throw new ApiError(error.code, error.message, response.status);
    }
    return payload as T;
  }

  async createProfile(fields: Record<string, unknown>): Promise<{ profile: ProfileRecord; token: string }> {
    const result = await this.request<{ profile: ProfileRecord; token: string }>("POST", "/profiles", fields);
    this.token = result.token;
    return result;
  }

  nextQuestion(userId: string): Promise<{ question: PublicQuestion }> {
    return this.request("GET", `/questions/next?user_id=${encodeURIComponent(userId)}`);
  }

  centralizedRound(userId: string, questionId: string): Promise<RoundView> {
    return this.request("POST", "/rounds/centralized", { user_id: userId, question_id: questionId });
  }

  decentralizedRound(userId: string, prompt: string): Promise<RoundView> {
    return this.request("POST", "/rounds/decentralized", { user_id: userId, prompt });
  }

  drawJudges(ticketId: string): Promise<RoundView> {
    return this.request("POST", `/rounds/${encodeURIComponent(ticketId)}/judges`);
  }

  submitVote(vote: VotePayload): Promise<{ deltas: DeltasByTrack }> {
    return this.request("POST", "/votes", vote);
  }

  reveal(ticketId: string): Promise<{ assignment: Record<string, string> }> {
    return this.request("GET", `/rounds/${encodeURIComponent(ticketId)}/reveal`);
  }

  leaderboard(track: string): Promise<{ track: string; entries: LeaderboardEntry[] }> {
    return this.request("GET", `/leaderboard?track=${encodeURIComponent(track)}`);
  }

  crowdBreakdown(dimension: string, track: string): Promise<CrowdBreakdown> {
    return this.request(
      "GET",
      `/analytics/crowd?dimension=${encodeURIComponent(dimension)}&track=${encodeURIComponent(track)}`,
    );
  }
}
