"""Crowd-sourced, anonymized evaluation arena for language models.

Curated and user-submitted questions are answered by anonymous model
pairs, human evaluators vote and score, per-ability ELO leaderboards
track the results, and demographic breakdowns aggregate over consenting
evaluators. State is an append-only event log; everything replays.
"""

from modelarena.analytics import CrowdBreakdown, LeaderboardEntry
from modelarena.config import ArenaConfig
from modelarena.domain import (
    AbilityTrack,
    AgeBand,
    ComparativeOutcome,
    Education,
    Gender,
    ModelEntry,
    QuestionItem,
    QuestionSource,
    RatingState,
    UserProfile,
    validate_profile,
)
from modelarena.elo import EloConfig, ScorePair, expected_outcome, outcome_to_scores, update_pair
from modelarena.errors import ArenaError
from modelarena.gateway import create_app, serve
from modelarena.matchmaking import MatchTicket, draw_judges, draw_pair
from modelarena.orchestrator import Arena, RoundView, VoteSubmission
from modelarena.parsing import ParsedChoice, build_mcq_prompt, parse_choice, score_accuracy
from modelarena.providers import FailingProvider, MockProvider, ProviderAdapter
from modelarena.questions import AffinityVector, affinity, ingest_questions
from modelarena.simulate import kendall_tau, run_pairwise_convergence, run_simulation
from modelarena.storage import ArenaState, EvaluationEvent, EventLog, load_snapshot, replay, write_snapshot

__version__ = "0.1.0"

__all__ = [
    "AbilityTrack",
    "AffinityVector",
    "AgeBand",
    "Arena",
    "ArenaConfig",
    "ArenaError",
    "ArenaState",
    "ComparativeOutcome",
    "CrowdBreakdown",
    "Education",
    "EloConfig",
    "EvaluationEvent",
    "EventLog",
    "FailingProvider",
    "Gender",
    "LeaderboardEntry",
    "MatchTicket",
    "MockProvider",
    "ModelEntry",
    "ParsedChoice",
    "ProviderAdapter",
    "QuestionItem",
    "QuestionSource",
    "RatingState",
    "RoundView",
    "ScorePair",
    "UserProfile",
    "VoteSubmission",
    "affinity",
    "build_mcq_prompt",
    "create_app",
    "draw_judges",
    "draw_pair",
    "expected_outcome",
    "ingest_questions",
    "kendall_tau",
    "load_snapshot",
    "outcome_to_scores",
    "parse_choice",
    "replay",
    "run_pairwise_convergence",
    "run_simulation",
    "score_accuracy",
    "serve",
    "update_pair",
    "validate_profile",
    "write_snapshot",
]
