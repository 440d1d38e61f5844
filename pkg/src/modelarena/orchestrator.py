"""Round orchestration: the three evaluation flows plus vote application.

The Arena owns the event log, the applied state, the provider adapters
and the seedable randomness. Every state change is an event append
followed by the shared fold, under a single writer lock, so live state
always equals a replay of the log. Provider calls happen before anything
is persisted: a round that fails its provider budget leaves no trace.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from typing import Any, Mapping, Optional

from modelarena import analytics, matchmaking, questions
from modelarena.config import ArenaConfig
from modelarena.domain import (
    AbilityTrack,
    ComparativeOutcome,
    ModelEntry,
    QuestionItem,
    QuestionSource,
    UserProfile,
    generate_id,
    utc_now_iso,
    validate_profile,
)
from modelarena.errors import (
    ConfigInvalid,
    DuplicateModel,
    DuplicateVote,
    EmptyPrompt,
    InvalidVote,
    NotMcq,
    PromptTooLong,
    ProviderFailure,
    ScoreOutOfRange,
    UnknownModel,
    UnknownQuestion,
    UnknownTicket,
    UnknownUser,
)
from modelarena.parsing import build_mcq_prompt, parse_choice
from modelarena.providers import DEFAULT_TIMEOUT_S, ProviderAdapter, ProviderError, build_provider
from modelarena.questions import IngestReport
from modelarena.storage import (
    ROUND_CENTRALIZED,
    ROUND_DECENTRALIZED,
    ArenaState,
    EventLog,
    apply_event,
    load_snapshot,
    replay,
    write_snapshot,
)

JUDGE_PROMPT_TEMPLATE = (
    "You are a judge. Question: {prompt}. Response A: {response_a}. "
    "Response B: {response_b}. State which response is better "
    "(A, B, equally good, or equally bad) and explain why."
)


@dataclass(frozen=True)
class RoundView:
    """What an evaluator sees: anonymized responses, never identities."""

    ticket_id: str
    prompt: str
    response_a: str
    response_b: str
    judge_verdict_c: Optional[str] = None
    judge_verdict_d: Optional[str] = None

    def to_record(self) -> dict[str, Any]:
        return {
            "ticket_id": self.ticket_id,
            "prompt": self.prompt,
            "response_a": self.response_a,
            "response_b": self.response_b,
            "judge_verdict_c": self.judge_verdict_c,
            "judge_verdict_d": self.judge_verdict_d,
        }


def _check_score(value: Optional[int], name: str) -> Optional[int]:
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int) or not 1 <= value <= 5:
        raise ScoreOutOfRange(f"{name} must be an integer in [1, 5], got {value!r}")
    return value


@dataclass(frozen=True)
class VoteSubmission:
    """One evaluator's verdict on a ticket; 1-5 scores are optional."""

    ticket_id: str
    user_id: str
    outcome: ComparativeOutcome
    score_a: Optional[int] = None
    score_b: Optional[int] = None
    judge_outcome: Optional[ComparativeOutcome] = None
    judge_score_c: Optional[int] = None
    judge_score_d: Optional[int] = None

    def __post_init__(self):
        _check_score(self.score_a, "score_a")
        _check_score(self.score_b, "score_b")
        _check_score(self.judge_score_c, "judge_score_c")
        _check_score(self.judge_score_d, "judge_score_d")


class Arena:
    """Event-sourced coordinator for the whole evaluation platform."""

    def __init__(
        self,
        config: ArenaConfig,
        providers: Optional[Mapping[str, ProviderAdapter]] = None,
        rng: Optional[random.Random] = None,
        clock=utc_now_iso,
    ):
        self.config = config
        self.elo = config.elo()
        self.rng = rng if rng is not None else random.Random(config.seed)
        self.clock = clock
        self.providers: dict[str, ProviderAdapter] = dict(providers) if providers is not None else {
            adapter_id: build_provider(adapter_id, cfg) for adapter_id, cfg in config.providers.items()
        }
        self._lock = threading.RLock()
        self.log = EventLog(config.events_path, fsync=config.fsync)
        events = self.log.read_all()
        if config.snapshot_path.exists():
            self.state: ArenaState = load_snapshot(config.snapshot_path, events, elo=self.elo)
        else:
            self.state = replay(events, elo=self.elo)

    # -- lifecycle ---------------------------------------------------------

    def validate_providers(self) -> None:
        """Every registered model must have a configured provider adapter."""
        missing = sorted(
            {m.provider_ref for m in self.state.models.values() if m.provider_ref not in self.providers}
        )
        if missing:
            raise ConfigInvalid(f"no provider configured for adapter(s): {missing}")

    def snapshot(self) -> None:
        with self._lock:
            write_snapshot(self.state, self.config.snapshot_path)

    def close(self) -> None:
        self.log.close()

    def _append(self, kind: str, payload: Mapping[str, Any]) -> dict[str, Any]:
        with self._lock:
            event = self.log.append(kind, payload, recorded_at=self.clock())
            return apply_event(self.state, event)

    # -- registry and profiles ---------------------------------------------

    def active_model_ids(self) -> list[str]:
        return sorted(m.model_id for m in self.state.models.values() if m.active)

    def register_model(self, display_name: str, provider_ref: str, model_id: Optional[str] = None) -> ModelEntry:
        with self._lock:
            if model_id is None:
                model_id = generate_id("m", self.rng)
                while model_id in self.state.models:
                    model_id = generate_id("m", self.rng)
            elif model_id in self.state.models:
                raise DuplicateModel(f"model_id {model_id!r} already registered")
            entry = ModelEntry(model_id=model_id, display_name=display_name, provider_ref=provider_ref)
            self._append("MODEL_REGISTERED", {"model": entry.to_record()})
            return self.state.models[model_id]

    def upsert_profile(self, raw: Mapping[str, Any]) -> UserProfile:
        """Validate and persist a profile; browsing history survives updates."""
        with self._lock:
            raw = dict(raw)
            if not str(raw.get("user_id", "") or "").strip():
                raw["user_id"] = generate_id("u", self.rng)
            profile = validate_profile(raw)
            existing = self.state.profiles.get(profile.user_id)
            if existing is not None:
                profile = UserProfile(
                    user_id=profile.user_id,
                    age_band=profile.age_band,
                    gender=profile.gender,
                    profession=profile.profession,
                    education=profile.education,
                    consent=profile.consent,
                    seen_questions=existing.seen_questions,
                    domain_views=existing.domain_views,
                )
            self._append("PROFILE_UPSERTED", {"profile": profile.to_record()})
            return self.state.profiles[profile.user_id]

    def _profile(self, user_id: str) -> UserProfile:
        profile = self.state.profiles.get(user_id)
        if profile is None:
            raise UnknownUser(f"no profile for user {user_id!r}")
        return profile

    # -- question bank -------------------------------------------------------

    def ingest_questions(self, lines) -> IngestReport:
        with self._lock:
            items, report = questions.ingest_questions(lines, existing_ids=self.state.questions)
            for item in items:
                self._append("QUESTION_INGESTED", {"question": item.to_record()})
            return report

    def next_question(self, user_id: str) -> QuestionItem:
        with self._lock:
            profile = self._profile(user_id)
            item = questions.choose_next(
                profile,
                self.state.questions,
                self.rng,
                alpha=self.config.affinity_alpha,
                allow_repeat=self.config.allow_repeat_after_exhaustion,
            )
            self._record_view(profile, item)
            return item

    def _record_view(self, profile: UserProfile, item: QuestionItem) -> None:
        updated = profile.with_view(item.question_id, item.domain)
        self._append("PROFILE_UPSERTED", {"profile": updated.to_record()})

    # -- providers ----------------------------------------------------------

    def _generate(self, model: ModelEntry, prompt: str) -> str:
        adapter = self.providers.get(model.provider_ref)
        if adapter is None:
            raise ProviderFailure(f"no provider configured for adapter {model.provider_ref!r}")
        params = {"timeout_s": DEFAULT_TIMEOUT_S}
        last_error: Optional[ProviderError] = None
        for _ in range(1 + self.config.retry_budget):
            try:
                return adapter.generate(prompt, params)
            except ProviderError as exc:
                last_error = exc
        raise ProviderFailure(f"provider {model.provider_ref!r} failed after retries: {last_error}")

    # -- evaluation flows ----------------------------------------------------

    def run_centralized_round(self, user_id: str, question_id: str) -> RoundView:
        """Answer a curated question with a random anonymous pair."""
        with self._lock:
            profile = self._profile(user_id)
            question = self.state.questions.get(question_id)
            if question is None:
                raise UnknownQuestion(f"no question {question_id!r}")
            if question.source is not QuestionSource.CURATED:
                raise NotMcq(f"question {question_id!r} is user-submitted free-form")
            prompt = build_mcq_prompt(question)
            ticket = matchmaking.draw_pair(
                self.active_model_ids(),
                self.rng,
                ticket_id=generate_id("t", self.rng),
                track=AbilityTrack.GENERATIVE,
                created_at=self.clock(),
            )
            response_a = self._generate(self.state.models[ticket.slot_a_model], prompt)
            response_b = self._generate(self.state.models[ticket.slot_b_model], prompt)
            parsed_a = parse_choice(response_a)
            parsed_b = parse_choice(response_b)
            if question_id not in profile.seen_questions:
                self._record_view(profile, question)
            self._append(
                "ROUND_CREATED",
                {
                    "phase": "answers",
                    "kind": ROUND_CENTRALIZED,
                    "ticket": ticket.to_record(),
                    "user_id": user_id,
                    "question_id": question_id,
                    "prompt": prompt,
                    "responses": {"a": response_a, "b": response_b},
                    "parsed": {"a": parsed_a.to_record(), "b": parsed_b.to_record()},
                },
            )
            return RoundView(
                ticket_id=ticket.ticket_id,
                prompt=question.stem,
                response_a=response_a,
                response_b=response_b,
            )

    def run_decentralized_round(self, user_id: str, custom_prompt: str) -> RoundView:
        """Answer a user-submitted prompt; the prompt joins the corpus."""
        with self._lock:
            self._profile(user_id)
            prompt = custom_prompt.strip()
            if not prompt:
                raise EmptyPrompt("prompt is empty after trimming")
            if len(prompt) > self.config.max_prompt_chars:
                raise PromptTooLong(f"prompt exceeds {self.config.max_prompt_chars} characters")
            ticket = matchmaking.draw_pair(
                self.active_model_ids(),
                self.rng,
                ticket_id=generate_id("t", self.rng),
                track=AbilityTrack.GENERATIVE,
                created_at=self.clock(),
            )
            response_a = self._generate(self.state.models[ticket.slot_a_model], prompt)
            response_b = self._generate(self.state.models[ticket.slot_b_model], prompt)
            question = QuestionItem(
                question_id=generate_id("q", self.rng),
                domain="custom",
                stem=prompt,
                source=QuestionSource.USER_SUBMITTED,
            )
            self._append("QUESTION_INGESTED", {"question": question.to_record()})
            self._append(
                "ROUND_CREATED",
                {
                    "phase": "answers",
                    "kind": ROUND_DECENTRALIZED,
                    "ticket": ticket.to_record(),
                    "user_id": user_id,
                    "question_id": question.question_id,
                    "prompt": prompt,
                    "responses": {"a": response_a, "b": response_b},
                    "parsed": {"a": None, "b": None},
                },
            )
            return RoundView(
                ticket_id=ticket.ticket_id,
                prompt=prompt,
                response_a=response_a,
                response_b=response_b,
            )

    def run_discriminative_round(self, ticket_id: str) -> RoundView:
        """Have two judge models assess the stored A/B responses."""
        with self._lock:
            round_rec = self.state.rounds.get(ticket_id)
            if round_rec is None:
                raise UnknownTicket(f"no ticket {ticket_id!r}")
            ticket, overlap = matchmaking.draw_judges(round_rec.ticket, self.active_model_ids(), self.rng)
            judge_prompt = JUDGE_PROMPT_TEMPLATE.format(
                prompt=round_rec.prompt,
                response_a=round_rec.response_a,
                response_b=round_rec.response_b,
            )
            verdict_c = self._generate(self.state.models[ticket.judge_c_model], judge_prompt)
            verdict_d = self._generate(self.state.models[ticket.judge_d_model], judge_prompt)
            self._append(
                "ROUND_CREATED",
                {
                    "phase": "judging",
                    "ticket_id": ticket_id,
                    "judge_c_model": ticket.judge_c_model,
                    "judge_d_model": ticket.judge_d_model,
                    "judge_overlap": overlap,
                    "judge_prompt": judge_prompt,
                    "judge_verdict_c": verdict_c,
                    "judge_verdict_d": verdict_d,
                },
            )
            updated = self.state.rounds[ticket_id]
            return RoundView(
                ticket_id=ticket_id,
                prompt=updated.prompt,
                response_a=updated.response_a,
                response_b=updated.response_b,
                judge_verdict_c=updated.judge_verdict_c,
                judge_verdict_d=updated.judge_verdict_d,
            )

    # -- votes and reveal -----------------------------------------------------

    def submit_vote(self, vote: VoteSubmission) -> dict[str, Any]:
        """Record the vote event and fold the rating updates it implies.

        Returns per-track before/after ratings keyed by track name. The
        generative track always updates; the knowledge track updates for
        centralized rounds from parsed correctness; the discriminative
        track updates when a judge outcome is present.
        """
        with self._lock:
            round_rec = self.state.rounds.get(vote.ticket_id)
            if round_rec is None:
                raise UnknownTicket(f"no ticket {vote.ticket_id!r}")
            self._profile(vote.user_id)
            if vote.user_id in round_rec.voted_by:
                raise DuplicateVote(f"user {vote.user_id!r} already voted on ticket {vote.ticket_id!r}")
            has_judge_fields = (
                vote.judge_outcome is not None or vote.judge_score_c is not None or vote.judge_score_d is not None
            )
            if has_judge_fields and not round_rec.ticket.has_judges:
                raise InvalidVote("judge verdict submitted for a ticket without judges")
            ticket = round_rec.ticket
            anonymization = {"A": ticket.slot_a_model, "B": ticket.slot_b_model}
            if ticket.has_judges:
                anonymization["C"] = ticket.judge_c_model
                anonymization["D"] = ticket.judge_d_model
            effects = self._append(
                "VOTE_APPLIED",
                {
                    "ticket": ticket.to_record(),
                    "anonymization": anonymization,
                    "responses": {"a": round_rec.response_a, "b": round_rec.response_b},
                    "parsed": {
                        "a": round_rec.parsed_a.to_record() if round_rec.parsed_a else None,
                        "b": round_rec.parsed_b.to_record() if round_rec.parsed_b else None,
                    },
                    "outcome": vote.outcome.value,
                    "scores": {"a": vote.score_a, "b": vote.score_b},
                    "judge_outcome": vote.judge_outcome.value if vote.judge_outcome else None,
                    "judge_scores": {"c": vote.judge_score_c, "d": vote.judge_score_d},
                    "flags": {"judge_overlap": round_rec.judge_overlap},
                    "user_id": vote.user_id,
                },
            )
            return effects["deltas"]

    def reveal(self, ticket_id: str) -> dict[str, str]:
        round_rec = self.state.rounds.get(ticket_id)
        if round_rec is None:
            raise UnknownTicket(f"no ticket {ticket_id!r}")
        return matchmaking.reveal(round_rec.ticket)

    # -- read models -----------------------------------------------------------

    def leaderboard(self, track: AbilityTrack) -> list[analytics.LeaderboardEntry]:
        return analytics.leaderboard(self.state, track)

    def crowd_breakdown(self, dimension: str, track: AbilityTrack) -> analytics.CrowdBreakdown:
        return analytics.crowd_breakdown(
            self.state, dimension, track, k_anonymity_threshold=self.config.k_anonymity_threshold
        )

    def accuracy_table(self, model_id: str) -> dict[str, Any]:
        if model_id not in self.state.models:
            raise UnknownModel(f"no model {model_id!r}")
        return analytics.accuracy_table(self.state, model_id)
