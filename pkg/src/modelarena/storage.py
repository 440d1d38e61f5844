"""Append-only event log and the deterministic state fold over it.

The log is the source of truth: registry, ratings, histories, rounds and
votes are all derived by folding events in id order through the same
application functions the live process uses, so replaying a log (or
loading a snapshot plus the log tail) reproduces the live state byte for
byte. Events are JSON Lines with canonical key order; ids are strictly
increasing and gap-free; events are never mutated or deleted. Timestamps
are recorded on events but never consulted by the fold.

Writes go through a single writer (append is locked and flushed before
the id is returned); readers see immutable applied values.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional

from modelarena.domain import (
    AbilityTrack,
    ComparativeOutcome,
    ModelEntry,
    QuestionItem,
    RatingState,
    UserProfile,
    canonical_dumps,
)
from modelarena.elo import EloConfig, update_pair
from modelarena.errors import CorruptLog, IoFailure, SchemaViolation, SnapshotLogMismatch
from modelarena.matchmaking import MatchTicket
from modelarena.parsing import ParsedChoice

EVENT_KINDS = (
    "MODEL_REGISTERED",
    "QUESTION_INGESTED",
    "ROUND_CREATED",
    "VOTE_APPLIED",
    "PROFILE_UPSERTED",
)

ROUND_CENTRALIZED = "CENTRALIZED"
ROUND_DECENTRALIZED = "DECENTRALIZED"

# Required payload keys per event kind (phase-specific keys checked in apply).
_PAYLOAD_REQUIRED = {
    "MODEL_REGISTERED": {"model"},
    "QUESTION_INGESTED": {"question"},
    "PROFILE_UPSERTED": {"profile"},
    "ROUND_CREATED": {"phase"},
    "VOTE_APPLIED": {"ticket", "anonymization", "responses", "parsed", "outcome", "scores", "flags", "user_id"},
}


@dataclass(frozen=True)
class EvaluationEvent:
    event_id: int
    kind: str
    payload: Mapping[str, Any]
    recorded_at: str

    def to_record(self) -> dict[str, Any]:
        return {
            "event_id": self.event_id,
            "kind": self.kind,
            "payload": self.payload,
            "recorded_at": self.recorded_at,
        }

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> "EvaluationEvent":
        return cls(
            event_id=int(rec["event_id"]),
            kind=rec["kind"],
            payload=rec["payload"],
            recorded_at=rec.get("recorded_at", ""),
        )


def validate_payload(kind: str, payload: Mapping[str, Any]) -> None:
    if kind not in EVENT_KINDS:
        raise SchemaViolation(f"unknown event kind {kind!r}")
    missing = _PAYLOAD_REQUIRED[kind] - set(payload)
    if missing:
        raise SchemaViolation(f"{kind} payload missing keys: {sorted(missing)}")


@dataclass
class RoundRecord:
    """Applied state for one round: the ticket plus everything shown anonymously."""

    ticket: MatchTicket
    kind: str
    user_id: str
    question_id: Optional[str]
    prompt: str
    response_a: str
    response_b: str
    parsed_a: Optional[ParsedChoice] = None
    parsed_b: Optional[ParsedChoice] = None
    judge_overlap: bool = False
    judge_verdict_c: Optional[str] = None
    judge_verdict_d: Optional[str] = None
    voted_by: set[str] = field(default_factory=set)

    def to_record(self) -> dict[str, Any]:
        return {
            "ticket": self.ticket.to_record(),
            "kind": self.kind,
            "user_id": self.user_id,
            "question_id": self.question_id,
            "prompt": self.prompt,
            "response_a": self.response_a,
            "response_b": self.response_b,
            "parsed_a": self.parsed_a.to_record() if self.parsed_a else None,
            "parsed_b": self.parsed_b.to_record() if self.parsed_b else None,
            "judge_overlap": self.judge_overlap,
            "judge_verdict_c": self.judge_verdict_c,
            "judge_verdict_d": self.judge_verdict_d,
            "voted_by": sorted(self.voted_by),
        }

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> "RoundRecord":
        return cls(
            ticket=MatchTicket.from_record(rec["ticket"]),
            kind=rec["kind"],
            user_id=rec["user_id"],
            question_id=rec.get("question_id"),
            prompt=rec["prompt"],
            response_a=rec["response_a"],
            response_b=rec["response_b"],
            parsed_a=ParsedChoice.from_record(rec["parsed_a"]) if rec.get("parsed_a") else None,
            parsed_b=ParsedChoice.from_record(rec["parsed_b"]) if rec.get("parsed_b") else None,
            judge_overlap=bool(rec.get("judge_overlap", False)),
            judge_verdict_c=rec.get("judge_verdict_c"),
            judge_verdict_d=rec.get("judge_verdict_d"),
            voted_by=set(rec.get("voted_by", ())),
        )


@dataclass
class VoteRecord:
    """One applied vote, self-contained enough for analytics recounts."""

    event_id: int
    ticket_id: str
    user_id: str
    round_kind: str
    anonymization: Mapping[str, str]
    outcome: ComparativeOutcome
    score_a: Optional[int]
    score_b: Optional[int]
    judge_outcome: Optional[ComparativeOutcome]
    judge_score_c: Optional[int]
    judge_score_d: Optional[int]
    knowledge_outcome: Optional[ComparativeOutcome]
    judge_overlap: bool = False

    def to_record(self) -> dict[str, Any]:
        return {
            "event_id": self.event_id,
            "ticket_id": self.ticket_id,
            "user_id": self.user_id,
            "round_kind": self.round_kind,
            "anonymization": dict(sorted(self.anonymization.items())),
            "outcome": self.outcome.value,
            "score_a": self.score_a,
            "score_b": self.score_b,
            "judge_outcome": self.judge_outcome.value if self.judge_outcome else None,
            "judge_score_c": self.judge_score_c,
            "judge_score_d": self.judge_score_d,
            "knowledge_outcome": self.knowledge_outcome.value if self.knowledge_outcome else None,
            "judge_overlap": self.judge_overlap,
        }

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> "VoteRecord":
        return cls(
            event_id=int(rec["event_id"]),
            ticket_id=rec["ticket_id"],
            user_id=rec["user_id"],
            round_kind=rec["round_kind"],
            anonymization=dict(rec["anonymization"]),
            outcome=ComparativeOutcome(rec["outcome"]),
            score_a=rec.get("score_a"),
            score_b=rec.get("score_b"),
            judge_outcome=ComparativeOutcome(rec["judge_outcome"]) if rec.get("judge_outcome") else None,
            judge_score_c=rec.get("judge_score_c"),
            judge_score_d=rec.get("judge_score_d"),
            knowledge_outcome=ComparativeOutcome(rec["knowledge_outcome"]) if rec.get("knowledge_outcome") else None,
            judge_overlap=bool(rec.get("judge_overlap", False)),
        )


@dataclass
class ArenaState:
    """Full in-memory state derived from the event log."""

    elo: EloConfig = field(default_factory=EloConfig)
    models: dict[str, ModelEntry] = field(default_factory=dict)
    questions: dict[str, QuestionItem] = field(default_factory=dict)
    profiles: dict[str, UserProfile] = field(default_factory=dict)
    rounds: dict[str, RoundRecord] = field(default_factory=dict)
    votes: list[VoteRecord] = field(default_factory=list)
    last_event_id: int = 0

    def rating_for(self, model_id: str, track: AbilityTrack) -> RatingState:
        entry = self.models[model_id]
        state = entry.ratings.get(track)
        if state is None:
            state = RatingState(rating=self.elo.initial_rating, matches_played=0)
        return state

    def _set_rating(self, model_id: str, track: AbilityTrack, state: RatingState) -> None:
        entry = self.models[model_id]
        ratings = dict(entry.ratings)
        ratings[track] = state
        self.models[model_id] = replace(entry, ratings=ratings)

    def to_record(self) -> dict[str, Any]:
        return {
            "last_event_id": self.last_event_id,
            "models": {mid: m.to_record() for mid, m in sorted(self.models.items())},
            "questions": {qid: q.to_record() for qid, q in sorted(self.questions.items())},
            "profiles": {uid: p.to_record() for uid, p in sorted(self.profiles.items())},
            "rounds": {tid: r.to_record() for tid, r in sorted(self.rounds.items())},
            "votes": [v.to_record() for v in self.votes],
        }

    def serialize(self) -> str:
        return canonical_dumps(self.to_record())

    @classmethod
    def from_record(cls, rec: Mapping[str, Any], elo: EloConfig) -> "ArenaState":
        state = cls(elo=elo)
        state.last_event_id = int(rec["last_event_id"])
        state.models = {mid: ModelEntry.from_record(m) for mid, m in rec["models"].items()}
        state.questions = {qid: QuestionItem.from_record(q) for qid, q in rec["questions"].items()}
        state.profiles = {uid: UserProfile.from_record(p) for uid, p in rec["profiles"].items()}
        state.rounds = {tid: RoundRecord.from_record(r) for tid, r in rec["rounds"].items()}
        state.votes = [VoteRecord.from_record(v) for v in rec["votes"]]
        return state


def derive_knowledge_outcome(
    parsed_a: Optional[ParsedChoice],
    parsed_b: Optional[ParsedChoice],
    correct: Optional[str],
) -> Optional[ComparativeOutcome]:
    """Auto-outcome for the knowledge track from parsed correctness.

    A correct and B wrong gives A the win (and symmetrically); both
    correct, both wrong, or any unparseable answer is a draw. Returns None
    outside centralized rounds (no parses or no answer key).
    """
    if parsed_a is None or parsed_b is None or correct is None:
        return None
    if parsed_a.letter is None or parsed_b.letter is None:
        return ComparativeOutcome.BOTH_BAD
    a_ok = parsed_a.letter == correct
    b_ok = parsed_b.letter == correct
    if a_ok and not b_ok:
        return ComparativeOutcome.A_BETTER
    if b_ok and not a_ok:
        return ComparativeOutcome.B_BETTER
    return ComparativeOutcome.BOTH_GOOD if a_ok else ComparativeOutcome.BOTH_BAD


def _apply_rated_match(
    state: ArenaState,
    track: AbilityTrack,
    model_x: str,
    model_y: str,
    outcome: ComparativeOutcome,
    label_x: str,
    label_y: str,
) -> list[dict[str, Any]]:
    before_x = state.rating_for(model_x, track)
    before_y = state.rating_for(model_y, track)
    after_x, after_y = update_pair(before_x, before_y, outcome, state.elo)
    state._set_rating(model_x, track, after_x)
    state._set_rating(model_y, track, after_y)
    return [
        {"label": label_x, "model_id": model_x, "before": before_x.rating, "after": after_x.rating},
        {"label": label_y, "model_id": model_y, "before": before_y.rating, "after": after_y.rating},
    ]


def apply_event(state: ArenaState, event: EvaluationEvent) -> dict[str, Any]:
    """Fold one event into the state; returns the per-track rating deltas
    for VOTE_APPLIED events (empty for the rest).

    Command-side validation happens before an event is ever appended; the
    fold itself trusts the log so that replay is total over valid logs.
    """
    payload = event.payload
    effects: dict[str, Any] = {}
    if event.kind == "MODEL_REGISTERED":
        entry = ModelEntry.from_record(payload["model"])
        state.models[entry.model_id] = entry
    elif event.kind == "QUESTION_INGESTED":
        item = QuestionItem.from_record(payload["question"])
        state.questions[item.question_id] = item
    elif event.kind == "PROFILE_UPSERTED":
        profile = UserProfile.from_record(payload["profile"])
        state.profiles[profile.user_id] = profile
    elif event.kind == "ROUND_CREATED":
        if payload["phase"] == "answers":
            round_rec = RoundRecord(
                ticket=MatchTicket.from_record(payload["ticket"]),
                kind=payload["kind"],
                user_id=payload["user_id"],
                question_id=payload.get("question_id"),
                prompt=payload["prompt"],
                response_a=payload["responses"]["a"],
                response_b=payload["responses"]["b"],
                parsed_a=ParsedChoice.from_record(payload["parsed"]["a"]) if payload["parsed"]["a"] else None,
                parsed_b=ParsedChoice.from_record(payload["parsed"]["b"]) if payload["parsed"]["b"] else None,
            )
            state.rounds[round_rec.ticket.ticket_id] = round_rec
        else:
            round_rec = state.rounds[payload["ticket_id"]]
            round_rec.ticket = replace(
                round_rec.ticket,
                judge_c_model=payload["judge_c_model"],
                judge_d_model=payload["judge_d_model"],
            )
            round_rec.judge_overlap = bool(payload["judge_overlap"])
            round_rec.judge_verdict_c = payload["judge_verdict_c"]
            round_rec.judge_verdict_d = payload["judge_verdict_d"]
    elif event.kind == "VOTE_APPLIED":
        round_rec = state.rounds[payload["ticket"]["ticket_id"]]
        ticket = round_rec.ticket
        outcome = ComparativeOutcome(payload["outcome"])
        judge_outcome = ComparativeOutcome(payload["judge_outcome"]) if payload.get("judge_outcome") else None

        deltas: dict[str, Any] = {}
        deltas[AbilityTrack.GENERATIVE.value] = _apply_rated_match(
            state, AbilityTrack.GENERATIVE, ticket.slot_a_model, ticket.slot_b_model, outcome, "A", "B"
        )
        correct = None
        if round_rec.question_id is not None:
            question = state.questions.get(round_rec.question_id)
            correct = question.correct if question else None
        knowledge_outcome = derive_knowledge_outcome(round_rec.parsed_a, round_rec.parsed_b, correct)
        if knowledge_outcome is not None:
            deltas[AbilityTrack.KNOWLEDGE.value] = _apply_rated_match(
                state, AbilityTrack.KNOWLEDGE, ticket.slot_a_model, ticket.slot_b_model, knowledge_outcome, "A", "B"
            )
        if judge_outcome is not None:
            deltas[AbilityTrack.DISCRIMINATIVE.value] = _apply_rated_match(
                state, AbilityTrack.DISCRIMINATIVE, ticket.judge_c_model, ticket.judge_d_model, judge_outcome, "C", "D"
            )

        scores = payload["scores"]
        judge_scores = payload.get("judge_scores") or {}
        state.votes.append(
            VoteRecord(
                event_id=event.event_id,
                ticket_id=ticket.ticket_id,
                user_id=payload["user_id"],
                round_kind=round_rec.kind,
                anonymization=dict(payload["anonymization"]),
                outcome=outcome,
                score_a=scores.get("a"),
                score_b=scores.get("b"),
                judge_outcome=judge_outcome,
                judge_score_c=judge_scores.get("c"),
                judge_score_d=judge_scores.get("d"),
                knowledge_outcome=knowledge_outcome,
                judge_overlap=bool(payload["flags"].get("judge_overlap", False)),
            )
        )
        round_rec.voted_by.add(payload["user_id"])
        if not ticket.revealed:
            round_rec.ticket = replace(round_rec.ticket, revealed=True)
        effects["deltas"] = deltas
    else:
        raise SchemaViolation(f"unknown event kind {event.kind!r}")
    state.last_event_id = event.event_id
    return effects


def replay(events: Iterable[EvaluationEvent], elo: EloConfig = EloConfig()) -> ArenaState:
    """Rebuild the full state by folding events in id order."""
    state = ArenaState(elo=elo)
    expected = 1
    for event in events:
        if event.event_id != expected:
            raise CorruptLog(
                f"event id {event.event_id} where {expected} was expected",
                last_valid_id=expected - 1,
            )
        apply_event(state, event)
        expected += 1
    return state


class EventLog:
    """File-backed append-only event log (JSON Lines, one event per line).

    append() assigns the next id under a lock and flushes before
    returning, so ids are arrival-ordered and an acknowledged event
    survives process exit. With fsync enabled (the default) it also
    survives a host crash; simulation workloads may turn fsync off.
    """

    def __init__(self, path: str | Path, fsync: bool = True):
        self.path = Path(path)
        self.fsync = fsync
        self._lock = threading.Lock()
        self._next_id = 1
        self._fh = None

    def read_all(self) -> list[EvaluationEvent]:
        """Read and integrity-check every event currently on disk."""
        if not self.path.exists():
            return []
        events: list[EvaluationEvent] = []
        last_valid = 0
        try:
            with open(self.path, "r", encoding="utf-8") as fh:
                for raw in fh:
                    if not raw.strip():
                        continue
                    try:
                        event = EvaluationEvent.from_record(json.loads(raw))
                    except (json.JSONDecodeError, KeyError, ValueError) as exc:
                        raise CorruptLog(f"unparseable event after id {last_valid}: {exc}", last_valid_id=last_valid)
                    if event.event_id != last_valid + 1:
                        raise CorruptLog(
                            f"event id {event.event_id} where {last_valid + 1} was expected",
                            last_valid_id=last_valid,
                        )
                    if event.kind not in EVENT_KINDS:
                        raise CorruptLog(f"unknown kind {event.kind!r} at id {event.event_id}", last_valid_id=last_valid)
                    events.append(event)
                    last_valid = event.event_id
        except OSError as exc:
            raise IoFailure(f"cannot read event log {self.path}: {exc}")
        self._next_id = last_valid + 1
        return events

    def append(self, kind: str, payload: Mapping[str, Any], recorded_at: str) -> EvaluationEvent:
        validate_payload(kind, payload)
        with self._lock:
            event = EvaluationEvent(
                event_id=self._next_id,
                kind=kind,
                payload=payload,
                recorded_at=recorded_at,
            )
            try:
                if self._fh is None:
                    self.path.parent.mkdir(parents=True, exist_ok=True)
                    self._fh = open(self.path, "a", encoding="utf-8")
                self._fh.write(canonical_dumps(event.to_record()) + "\n")
                self._fh.flush()
                if self.fsync:
                    os.fsync(self._fh.fileno())
            except OSError as exc:
                raise IoFailure(f"cannot append to event log {self.path}: {exc}")
            self._next_id += 1
            return event

    def close(self) -> None:
        with self._lock:
            if self._fh is not None:
                self._fh.flush()
                try:
                    os.fsync(self._fh.fileno())
                except OSError:
                    pass
                self._fh.close()
                self._fh = None


def write_snapshot(state: ArenaState, path: str | Path) -> None:
    """Write a canonical snapshot document covering state.last_event_id.

    Must be taken at a quiescent point (between event applications); the
    write is atomic via rename. The rating constants the fold ran with are
    embedded so later replays can reproduce the same state.
    """
    path = Path(path)
    doc = {
        "covering_event_id": state.last_event_id,
        "elo": {
            "k_factor": state.elo.k_factor,
            "initial_rating": state.elo.initial_rating,
            "logistic_base": state.elo.logistic_base,
            "scale": state.elo.scale,
        },
        "state": state.to_record(),
    }
    tmp = path.with_suffix(path.suffix + ".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp.write_text(canonical_dumps(doc), encoding="utf-8")
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure(f"cannot write snapshot {path}: {exc}")


def read_snapshot_elo(path: str | Path) -> Optional[EloConfig]:
    """Rating constants embedded in a snapshot, if any."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoFailure(f"cannot read snapshot {path}: {exc}")
    if "elo" not in doc:
        return None
    return EloConfig(**doc["elo"])


def load_snapshot(
    path: str | Path, events: Iterable[EvaluationEvent], elo: Optional[EloConfig] = None
) -> ArenaState:
    """Rebuild state from a snapshot plus the log events after it.

    Events at or before the covering id are skipped, so passing the full
    log is fine; a non-empty log that ends before the covering id is a
    mismatch (the snapshot claims events the log does not have). With no
    explicit elo config the one embedded in the snapshot applies.
    """
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoFailure(f"cannot read snapshot {path}: {exc}")
    covering = int(doc["covering_event_id"])
    if elo is None:
        elo = EloConfig(**doc["elo"]) if "elo" in doc else EloConfig()
    state = ArenaState.from_record(doc["state"], elo=elo)
    events = list(events)
    if events and max(e.event_id for e in events) < covering:
        raise SnapshotLogMismatch(
            f"snapshot covers event {covering} but the log ends at {max(e.event_id for e in events)}"
        )
    expected = covering + 1
    for event in sorted(events, key=lambda e: e.event_id):
        if event.event_id <= covering:
            continue
        if event.event_id != expected:
            raise CorruptLog(
                f"event id {event.event_id} where {expected} was expected",
                last_valid_id=expected - 1,
            )
        apply_event(state, event)
        expected += 1
    return state
