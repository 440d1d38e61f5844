"""Synthetic-population simulations for validating the rating pipeline.

A Bradley-Terry style latent model generates vote outcomes: each synthetic
model carries a latent strength on the same logistic scale the rating
engine uses, matches are uniform random pairs, and A beats B with the
probability implied by the latent gap. Running those votes through the
full round/vote path and comparing the recovered leaderboard order with
the latent order (Kendall tau) checks the whole system end to end, not
just the update formula.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from modelarena.config import ArenaConfig
from modelarena.domain import AbilityTrack, ComparativeOutcome, RatingState
from modelarena.elo import EloConfig, expected_outcome, update_pair
from modelarena.orchestrator import Arena, VoteSubmission

_PROFESSIONS = ("engineer", "teacher", "physician", "student", "writer", "analyst")
_AGE_BANDS = ("<18", "18-25", "26-35", "36-50", ">50")
_GENDERS = ("male", "female", "non-binary", "undisclosed")
_EDUCATIONS = ("secondary", "bachelor", "master", "doctorate")


def kendall_tau(reference: Sequence[str], observed: Sequence[str]) -> float:
    """Tau-a rank correlation between two strict orderings of one item set."""
    if sorted(reference) != sorted(observed):
        raise ValueError("orderings must rank the same items")
    n = len(reference)
    if n < 2:
        return 1.0
    pos = {item: i for i, item in enumerate(observed)}
    concordant = 0
    discordant = 0
    for i in range(n):
        for j in range(i + 1, n):
            if pos[reference[i]] < pos[reference[j]]:
                concordant += 1
            else:
                discordant += 1
    return (concordant - discordant) / (n * (n - 1) / 2)


def run_pairwise_convergence(
    p_true: float = 0.75,
    matches: int = 5000,
    k_factor: float = 16.0,
    seed: int = 0,
) -> float:
    """Rate one Bernoulli(p_true) pair for `matches` rounds; returns the
    win probability implied by the final rating gap."""
    rng = random.Random(seed)
    config = EloConfig(k_factor=k_factor)
    state_a = RatingState(config.initial_rating)
    state_b = RatingState(config.initial_rating)
    for _ in range(matches):
        outcome = ComparativeOutcome.A_BETTER if rng.random() < p_true else ComparativeOutcome.B_BETTER
        state_a, state_b = update_pair(state_a, state_b, outcome, config)
    return expected_outcome(state_a.rating, state_b.rating, config)


@dataclass
class SimulationResult:
    kendall_tau: float
    latent_order: list[str]
    recovered_order: list[str]
    votes: int
    events: int
    data_dir: Path


def run_simulation(
    data_dir: str | Path,
    models: int = 8,
    votes: int = 20000,
    seed: int = 7,
    k_factor: float = 16.0,
    users: int = 12,
    latent_base: float = 1000.0,
    latent_step: float = 100.0,
    fsync: bool = False,
) -> SimulationResult:
    """Drive a synthetic population through the full vote path.

    Models get latent strengths latent_base, latent_base + latent_step, ...
    Every vote runs a real decentralized round (providers and all), then a
    vote whose outcome is sampled from the logistic latent-gap probability.
    """
    if models < 2:
        raise ValueError("need at least 2 models to simulate")
    providers = {f"sim-adapter-{i:02d}": {"kind": "mock", "seed": seed * 1000 + i} for i in range(models)}
    config = ArenaConfig(
        data_dir=Path(data_dir),
        k_factor=k_factor,
        seed=seed,
        fsync=fsync,
        providers=providers,
    )
    arena = Arena(config)
    outcome_rng = random.Random(seed + 1)

    latent: dict[str, float] = {}
    for i in range(models):
        model_id = f"m-sim-{i:02d}"
        arena.register_model(
            display_name=f"Synthetic model {i:02d}",
            provider_ref=f"sim-adapter-{i:02d}",
            model_id=model_id,
        )
        latent[model_id] = latent_base + latent_step * i

    user_ids = []
    for i in range(users):
        profile = arena.upsert_profile(
            {
                "user_id": f"u-sim-{i:03d}",
                "age_band": _AGE_BANDS[i % len(_AGE_BANDS)],
                "gender": _GENDERS[i % len(_GENDERS)],
                "profession": _PROFESSIONS[i % len(_PROFESSIONS)],
                "education": _EDUCATIONS[i % len(_EDUCATIONS)],
                "consent": "true" if i % 3 != 0 else "false",
            }
        )
        user_ids.append(profile.user_id)

    elo = config.elo()
    for n in range(votes):
        user_id = user_ids[n % len(user_ids)]
        view = arena.run_decentralized_round(user_id, f"simulation round {n}: which answer is stronger?")
        ticket = arena.state.rounds[view.ticket_id].ticket
        p_a = expected_outcome(latent[ticket.slot_a_model], latent[ticket.slot_b_model], elo)
        a_wins = outcome_rng.random() < p_a
        outcome = ComparativeOutcome.A_BETTER if a_wins else ComparativeOutcome.B_BETTER
        arena.submit_vote(
            VoteSubmission(
                ticket_id=view.ticket_id,
                user_id=user_id,
                outcome=outcome,
                score_a=outcome_rng.randint(3, 5) if a_wins else outcome_rng.randint(1, 3),
                score_b=outcome_rng.randint(1, 3) if a_wins else outcome_rng.randint(3, 5),
            )
        )

    board = arena.leaderboard(AbilityTrack.GENERATIVE)
    recovered = [entry.model_id for entry in board]
    latent_order = sorted(latent, key=lambda m: -latent[m])
    tau = kendall_tau(latent_order, recovered)
    arena.snapshot()
    arena.close()
    return SimulationResult(
        kendall_tau=tau,
        latent_order=latent_order,
        recovered_order=recovered,
        votes=votes,
        events=arena.state.last_event_id,
        data_dir=Path(data_dir),
    )
