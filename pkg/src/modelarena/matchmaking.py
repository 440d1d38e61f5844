"""Anonymized pair selection for answering and judging.

Answer pairs are drawn uniformly over all unordered pairs of active
models, and the A/B label assignment is an independent fair coin flip, so
no model systematically lands in either slot. Judges are drawn the same
way from the pool excluding the answerers whenever that pool is large
enough. Identities stay concealed until a vote is recorded.

All draws consume an injected seedable random source, which makes every
sampling behavior reproducible in tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Any, Mapping, Optional, Sequence

from modelarena.domain import AbilityTrack
from modelarena.errors import ArenaError, InsufficientModels, NotYetVoted


class JudgesAlreadyDrawn(ArenaError):
    code = "JUDGES_ALREADY_DRAWN"


@dataclass(frozen=True)
class MatchTicket:
    """One anonymized match: answer slots A/B, optional judge slots C/D.

    revealed stays False until a vote for the ticket is recorded; the pair
    never changes after creation.
    """

    ticket_id: str
    track: AbilityTrack
    slot_a_model: str
    slot_b_model: str
    judge_c_model: Optional[str] = None
    judge_d_model: Optional[str] = None
    revealed: bool = False
    created_at: str = ""

    def __post_init__(self):
        if self.slot_a_model == self.slot_b_model:
            raise ValueError("answer slots must hold two different models")
        if self.judge_c_model is not None and self.judge_c_model == self.judge_d_model:
            raise ValueError("judge slots must hold two different models")

    @property
    def has_judges(self) -> bool:
        return self.judge_c_model is not None and self.judge_d_model is not None

    def to_record(self) -> dict[str, Any]:
        return {
            "ticket_id": self.ticket_id,
            "track": self.track.value,
            "slot_a_model": self.slot_a_model,
            "slot_b_model": self.slot_b_model,
            "judge_c_model": self.judge_c_model,
            "judge_d_model": self.judge_d_model,
            "revealed": self.revealed,
            "created_at": self.created_at,
        }

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> "MatchTicket":
        return cls(
            ticket_id=rec["ticket_id"],
            track=AbilityTrack(rec["track"]),
            slot_a_model=rec["slot_a_model"],
            slot_b_model=rec["slot_b_model"],
            judge_c_model=rec.get("judge_c_model"),
            judge_d_model=rec.get("judge_d_model"),
            revealed=bool(rec.get("revealed", False)),
            created_at=rec.get("created_at", ""),
        )


def draw_pair(
    active_models: Sequence[str],
    randomness: random.Random,
    ticket_id: str,
    track: AbilityTrack = AbilityTrack.GENERATIVE,
    created_at: str = "",
) -> MatchTicket:
    """Draw an anonymized answer pair from the active registry.

    The unordered pair is uniform over all C(n, 2) pairs; which member
    becomes slot A is a separate fair coin flip.
    """
    pool = sorted(set(active_models))
    if len(pool) < 2:
        raise InsufficientModels(f"need at least 2 active models, have {len(pool)}")
    first, second = (pool[i] for i in sorted(randomness.sample(range(len(pool)), 2)))
    if randomness.random() < 0.5:
        first, second = second, first
    return MatchTicket(
        ticket_id=ticket_id,
        track=track,
        slot_a_model=first,
        slot_b_model=second,
        created_at=created_at,
    )


def draw_judges(
    ticket: MatchTicket,
    active_models: Sequence[str],
    randomness: random.Random,
) -> tuple[MatchTicket, bool]:
    """Attach two judge models to a ticket.

    Judges are drawn uniformly from the active pool minus the answerers
    when that leaves at least two candidates; otherwise from the full
    active pool, in which case the returned overlap flag is True so the
    event record can be marked judge_overlap.
    """
    if ticket.has_judges:
        raise JudgesAlreadyDrawn(f"ticket {ticket.ticket_id} already has judges")
    pool = sorted(set(active_models))
    if len(pool) < 2:
        raise InsufficientModels(f"need at least 2 active models to judge, have {len(pool)}")
    non_answerers = [m for m in pool if m not in (ticket.slot_a_model, ticket.slot_b_model)]
    overlap = len(non_answerers) < 2
    candidates = pool if overlap else non_answerers
    first, second = (candidates[i] for i in sorted(randomness.sample(range(len(candidates)), 2)))
    if randomness.random() < 0.5:
        first, second = second, first
    return replace(ticket, judge_c_model=first, judge_d_model=second), overlap


def reveal(ticket: MatchTicket) -> dict[str, str]:
    """Label-to-identity map for a ticket whose vote has been recorded."""
    if not ticket.revealed:
        raise NotYetVoted(f"ticket {ticket.ticket_id} has no recorded vote yet")
    mapping = {"A": ticket.slot_a_model, "B": ticket.slot_b_model}
    if ticket.has_judges:
        mapping["C"] = ticket.judge_c_model
        mapping["D"] = ticket.judge_d_model
    return mapping
