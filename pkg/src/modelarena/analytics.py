"""Read-side aggregations: leaderboards, crowd breakdowns, accuracy tables.

Everything here recomputes from applied state, never caches, so results
always reflect the event log at read time. Ratings stay full-precision
internally; only the displayed value is rounded (half-up).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Optional

from modelarena.domain import AbilityTrack, ComparativeOutcome
from modelarena.errors import UnknownDimension
from modelarena.parsing import score_accuracy
from modelarena.storage import ROUND_CENTRALIZED, ArenaState, VoteRecord

CROWD_DIMENSIONS = ("age_band", "gender", "profession", "education")


@dataclass(frozen=True)
class LeaderboardEntry:
    model_id: str
    display_name: str
    track: AbilityTrack
    rating: float
    rating_displayed: int
    matches_played: int
    rank: int

    def to_record(self) -> dict[str, Any]:
        return {
            "model_id": self.model_id,
            "display_name": self.display_name,
            "track": self.track.value,
            "rating": self.rating,
            "rating_displayed": self.rating_displayed,
            "matches_played": self.matches_played,
            "rank": self.rank,
        }


@dataclass(frozen=True)
class ModelGroupStats:
    model_id: str
    win_rate: float
    mean_score: Optional[float]
    n: int

    def to_record(self) -> dict[str, Any]:
        return {"model_id": self.model_id, "win_rate": self.win_rate, "mean_score": self.mean_score, "n": self.n}


@dataclass(frozen=True)
class BreakdownGroup:
    label: str
    vote_count: int
    suppressed: bool
    series: tuple[ModelGroupStats, ...]

    def to_record(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "vote_count": self.vote_count,
            "suppressed": self.suppressed,
            "series": [s.to_record() for s in self.series],
        }


@dataclass(frozen=True)
class CrowdBreakdown:
    dimension: str
    track: AbilityTrack
    groups: tuple[BreakdownGroup, ...]
    non_consenting_votes: int

    def to_record(self) -> dict[str, Any]:
        return {
            "dimension": self.dimension,
            "track": self.track.value,
            "groups": [g.to_record() for g in self.groups],
            "non_consenting_votes": self.non_consenting_votes,
        }


def round_half_up(value: float) -> int:
    return math.floor(value + 0.5)


def leaderboard(state: ArenaState, track: AbilityTrack) -> list[LeaderboardEntry]:
    """All registered models ordered by rating; ties break on matches
    played (descending) then model_id, so ranks are total and gap-free."""
    rows = []
    for model_id, entry in state.models.items():
        rating = state.rating_for(model_id, track)
        rows.append((entry, rating))
    rows.sort(key=lambda r: (-r[1].rating, -r[1].matches_played, r[0].model_id))
    return [
        LeaderboardEntry(
            model_id=entry.model_id,
            display_name=entry.display_name,
            track=track,
            rating=rating.rating,
            rating_displayed=round_half_up(rating.rating),
            matches_played=rating.matches_played,
            rank=position,
        )
        for position, (entry, rating) in enumerate(rows, start=1)
    ]


def _vote_on_track(vote: VoteRecord, track: AbilityTrack):
    """(outcome, {label: model}, {model: score}) for this vote on this track,
    or None when the vote carries nothing for the track."""
    if track is AbilityTrack.GENERATIVE:
        participants = {"A": vote.anonymization["A"], "B": vote.anonymization["B"]}
        scores = {}
        if vote.score_a is not None:
            scores[participants["A"]] = vote.score_a
        if vote.score_b is not None:
            scores[participants["B"]] = vote.score_b
        return vote.outcome, participants, scores
    if track is AbilityTrack.KNOWLEDGE:
        if vote.knowledge_outcome is None:
            return None
        return vote.knowledge_outcome, {"A": vote.anonymization["A"], "B": vote.anonymization["B"]}, {}
    if track is AbilityTrack.DISCRIMINATIVE:
        if vote.judge_outcome is None:
            return None
        participants = {"A": vote.anonymization["C"], "B": vote.anonymization["D"]}
        scores = {}
        if vote.judge_score_c is not None:
            scores[participants["A"]] = vote.judge_score_c
        if vote.judge_score_d is not None:
            scores[participants["B"]] = vote.judge_score_d
        return vote.judge_outcome, participants, scores
    raise ValueError(f"unhandled track {track}")


def _outcome_points(outcome: ComparativeOutcome, side: str) -> float:
    if outcome is ComparativeOutcome.A_BETTER:
        return 1.0 if side == "A" else 0.0
    if outcome is ComparativeOutcome.B_BETTER:
        return 1.0 if side == "B" else 0.0
    return 0.5


def crowd_breakdown(
    state: ArenaState,
    dimension: str,
    track: AbilityTrack,
    k_anonymity_threshold: int = 5,
) -> CrowdBreakdown:
    """Per-demographic-group win rates and mean 1-5 scores per model.

    Only consenting users' votes enter any group; groups smaller than the
    anonymity threshold are kept in the output but suppressed (no series),
    so small groups cannot be re-identified yet the counts still add up.
    """
    if dimension not in CROWD_DIMENSIONS:
        raise UnknownDimension(f"dimension must be one of {CROWD_DIMENSIONS}, got {dimension!r}")

    per_group_votes: dict[str, int] = {}
    per_group_models: dict[str, dict[str, dict[str, float]]] = {}
    non_consenting = 0
    for vote in state.votes:
        contribution = _vote_on_track(vote, track)
        if contribution is None:
            continue
        outcome, participants, scores = contribution
        profile = state.profiles.get(vote.user_id)
        if profile is None or not profile.consent:
            non_consenting += 1
            continue
        value = getattr(profile, dimension)
        label = value if isinstance(value, str) else value.value
        per_group_votes[label] = per_group_votes.get(label, 0) + 1
        models = per_group_models.setdefault(label, {})
        for side, model_id in participants.items():
            stats = models.setdefault(model_id, {"points": 0.0, "votes": 0, "score_sum": 0.0, "score_n": 0})
            stats["points"] += _outcome_points(outcome, side)
            stats["votes"] += 1
            if model_id in scores:
                stats["score_sum"] += scores[model_id]
                stats["score_n"] += 1

    groups = []
    for label in sorted(per_group_votes):
        vote_count = per_group_votes[label]
        if vote_count < k_anonymity_threshold:
            groups.append(BreakdownGroup(label=label, vote_count=vote_count, suppressed=True, series=()))
            continue
        series = []
        for model_id in sorted(per_group_models[label]):
            stats = per_group_models[label][model_id]
            series.append(
                ModelGroupStats(
                    model_id=model_id,
                    win_rate=stats["points"] / stats["votes"],
                    mean_score=stats["score_sum"] / stats["score_n"] if stats["score_n"] else None,
                    n=int(stats["votes"]),
                )
            )
        groups.append(BreakdownGroup(label=label, vote_count=vote_count, suppressed=False, series=tuple(series)))
    return CrowdBreakdown(
        dimension=dimension,
        track=track,
        groups=tuple(groups),
        non_consenting_votes=non_consenting,
    )


def accuracy_table(state: ArenaState, model_id: str) -> dict[str, Any]:
    """Per-domain answer accuracy over the model's centralized rounds."""
    by_domain: dict[str, list] = {}
    for round_rec in state.rounds.values():
        if round_rec.kind != ROUND_CENTRALIZED or round_rec.question_id is None:
            continue
        question = state.questions.get(round_rec.question_id)
        if question is None or question.correct is None:
            continue
        if round_rec.ticket.slot_a_model == model_id:
            by_domain.setdefault(question.domain, []).append((round_rec.parsed_a, question.correct))
        if round_rec.ticket.slot_b_model == model_id:
            by_domain.setdefault(question.domain, []).append((round_rec.parsed_b, question.correct))
    table = {}
    for domain in sorted(by_domain):
        result = score_accuracy(by_domain[domain])
        table[domain] = {
            "accuracy": result.accuracy,
            "parseable": result.parseable,
            "unparsed": result.unparsed,
        }
    return table
