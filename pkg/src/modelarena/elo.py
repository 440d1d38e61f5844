"""Pure ELO arithmetic for pairwise model comparisons.

Key formulas:
    Expected score:  E_A = 1 / (1 + base^((R_B - R_A) / scale))
    Rating update:   R_A' = R_A + K * (S_A - E_A)

with base 10 and scale 400 by default, S = 1 for a win, 0 for a loss and
0.5 for a draw. Everything here is a total function over finite inputs
with no shared state; updates against stored ratings are serialized by
the orchestrator, not here. Ratings are kept at full float precision;
display rounding happens in analytics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from modelarena.domain import ComparativeOutcome, RatingState
from modelarena.errors import NonFiniteInput

__all__ = ["EloConfig", "RatingState", "ScorePair", "expected_outcome", "outcome_to_scores", "update_pair"]


@dataclass(frozen=True)
class EloConfig:
    """Constants of the rating system.

    k_factor bounds the per-match rating change; initial_rating seeds new
    rating states; logistic_base and scale shape the expected-score curve.
    """

    k_factor: float = 32.0
    initial_rating: float = 1000.0
    logistic_base: float = 10.0
    scale: float = 400.0

    def __post_init__(self):
        if not (self.k_factor > 0):
            raise ValueError("k_factor must be positive")
        if not (self.scale > 0):
            raise ValueError("scale must be positive")
        if not (self.logistic_base > 1):
            raise ValueError("logistic_base must exceed 1")


@dataclass(frozen=True)
class ScorePair:
    """Match scores for the two participants; always sums to 1."""

    s_a: float
    s_b: float

    def __post_init__(self):
        if self.s_a not in (0.0, 0.5, 1.0) or self.s_b not in (0.0, 0.5, 1.0):
            raise ValueError("scores must be 0, 0.5 or 1")
        if self.s_a + self.s_b != 1.0:
            raise ValueError("scores must sum to 1")


def _require_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise NonFiniteInput(f"non-finite rating input: {v!r}")


def expected_outcome(r_a: float, r_b: float, config: EloConfig = EloConfig()) -> float:
    """Expected score of participant A against B, in (0, 1)."""
    _require_finite(r_a, r_b)
    return 1.0 / (1.0 + config.logistic_base ** ((r_b - r_a) / config.scale))


def outcome_to_scores(outcome: ComparativeOutcome) -> ScorePair:
    """Map a comparative vote to match scores.

    Both "equally good" and "equally bad" count as a draw for rating
    purposes; the distinction survives in the stored event for analytics.
    """
    if outcome is ComparativeOutcome.A_BETTER:
        return ScorePair(1.0, 0.0)
    if outcome is ComparativeOutcome.B_BETTER:
        return ScorePair(0.0, 1.0)
    return ScorePair(0.5, 0.5)


def update_pair(
    state_a: RatingState,
    state_b: RatingState,
    outcome: ComparativeOutcome,
    config: EloConfig = EloConfig(),
) -> tuple[RatingState, RatingState]:
    """One rated match between A and B: returns both post-match states."""
    _require_finite(state_a.rating, state_b.rating)
    scores = outcome_to_scores(outcome)
    e_a = expected_outcome(state_a.rating, state_b.rating, config)
    e_b = expected_outcome(state_b.rating, state_a.rating, config)
    return (
        RatingState(
            rating=state_a.rating + config.k_factor * (scores.s_a - e_a),
            matches_played=state_a.matches_played + 1,
        ),
        RatingState(
            rating=state_b.rating + config.k_factor * (scores.s_b - e_b),
            matches_played=state_b.matches_played + 1,
        ),
    )
