"""Leaderboard ordering, crowd breakdowns, and accuracy tables."""

from __future__ import annotations

import pytest

from modelarena.analytics import crowd_breakdown, leaderboard, round_half_up
from modelarena.domain import AbilityTrack, ComparativeOutcome
from modelarena.errors import UnknownDimension, UnknownModel
from modelarena.orchestrator import VoteSubmission

from conftest import add_user, corpus_lines, make_arena


def _vote(arena, user, outcome, **kwargs):
    view = arena.run_decentralized_round(user, kwargs.pop("prompt"))
    arena.submit_vote(VoteSubmission(view.ticket_id, user, outcome, **kwargs))
    return view


class TestRounding:
    @pytest.mark.parametrize(
        "value,expected",
        [(1216.4, 1216), (1216.5, 1217), (1216.6, 1217), (1000.0, 1000), (999.5, 1000), (-0.5, 0)],
    )
    def test_round_half_up(self, value, expected):
        assert round_half_up(value) == expected


class TestLeaderboard:
    def test_ranks_follow_ratings(self, tmp_path):
        arena = make_arena(tmp_path, n_models=2, initial_rating=1200.0, k_factor=32.0)
        add_user(arena, "u1")
        _vote(arena, "u1", ComparativeOutcome.A_BETTER, prompt="rank this")
        board = arena.leaderboard(AbilityTrack.GENERATIVE)
        assert [e.rank for e in board] == [1, 2]
        assert board[0].rating_displayed == 1216
        assert board[1].rating_displayed == 1184

    def test_fresh_registry_tie_break_by_matches_then_id(self, tmp_path):
        arena = make_arena(tmp_path, n_models=3)
        board = arena.leaderboard(AbilityTrack.GENERATIVE)
        assert [e.model_id for e in board] == ["m0", "m1", "m2"]
        assert [e.rank for e in board] == [1, 2, 3]
        assert all(e.rating == 1000.0 for e in board)

    def test_matches_played_breaks_rating_ties(self, tmp_path):
        arena = make_arena(tmp_path, n_models=3)
        add_user(arena, "u1")
        # one drawn vote between two models: same rating as the idle model,
        # but more matches played
        view = arena.run_decentralized_round("u1", "a draw")
        arena.submit_vote(VoteSubmission(view.ticket_id, "u1", ComparativeOutcome.BOTH_GOOD))
        ticket = arena.state.rounds[view.ticket_id].ticket
        board = arena.leaderboard(AbilityTrack.GENERATIVE)
        assert {board[0].model_id, board[1].model_id} == {ticket.slot_a_model, ticket.slot_b_model}
        assert board[0].matches_played == 1 and board[2].matches_played == 0
        assert [e.rank for e in board] == [1, 2, 3]

    def test_empty_registry(self, tmp_path):
        arena = make_arena(tmp_path, n_models=0)
        assert arena.leaderboard(AbilityTrack.GENERATIVE) == []

    def test_board_deterministic_under_replay(self, tmp_path):
        from modelarena.domain import canonical_dumps
        from modelarena.storage import EventLog, replay

        arena = make_arena(tmp_path)
        add_user(arena, "u1")
        for i in range(6):
            _vote(arena, "u1", ComparativeOutcome.A_BETTER if i % 2 else ComparativeOutcome.B_BETTER,
                  prompt=f"battle {i}")
        arena.close()
        replayed = replay(EventLog(arena.config.events_path, fsync=False).read_all(), elo=arena.elo)
        live_board = canonical_dumps([e.to_record() for e in leaderboard(arena.state, AbilityTrack.GENERATIVE)])
        replay_board = canonical_dumps([e.to_record() for e in leaderboard(replayed, AbilityTrack.GENERATIVE)])
        assert live_board == replay_board


class TestCrowdBreakdown:
    def test_win_rate_counts_draws_as_half(self, tmp_path):
        arena = make_arena(tmp_path, n_models=2)
        add_user(arena, "u1", age_band="18-25")
        # m-first beats m-second twice, then one draw
        outcomes = [ComparativeOutcome.A_BETTER, ComparativeOutcome.A_BETTER, ComparativeOutcome.BOTH_GOOD]
        winners = []
        for i, wanted in enumerate(outcomes):
            view = arena.run_decentralized_round("u1", f"crowd battle {i}")
            ticket = arena.state.rounds[view.ticket_id].ticket
            # normalize: "A better" should always mean the same physical model wins
            if wanted is not ComparativeOutcome.BOTH_GOOD:
                wanted = ComparativeOutcome.A_BETTER if ticket.slot_a_model == "m0" else ComparativeOutcome.B_BETTER
            arena.submit_vote(VoteSubmission(view.ticket_id, "u1", wanted))
            winners.append(ticket)
        breakdown = arena.crowd_breakdown("age_band", AbilityTrack.GENERATIVE)
        group = {g.label: g for g in breakdown.groups}["AGE_18_25"]
        assert group.suppressed is True  # 3 votes < default threshold 5
        unsuppressed = crowd_breakdown(arena.state, "age_band", AbilityTrack.GENERATIVE, k_anonymity_threshold=1)
        stats = {s.model_id: s for g in unsuppressed.groups for s in g.series}
        assert stats["m0"].win_rate == pytest.approx((2 + 0.5) / 3)
        assert stats["m1"].win_rate == pytest.approx(0.5 / 3)
        assert stats["m0"].n == 3

    def test_small_group_suppressed_at_threshold(self, tmp_path):
        arena = make_arena(tmp_path, n_models=2, k_anonymity_threshold=5)
        add_user(arena, "u1", age_band="26-35")
        for i in range(4):
            _vote(arena, "u1", ComparativeOutcome.A_BETTER, prompt=f"almost enough {i}")
        breakdown = arena.crowd_breakdown("age_band", AbilityTrack.GENERATIVE)
        group = breakdown.groups[0]
        assert group.vote_count == 4
        assert group.suppressed is True
        assert group.series == ()

    def test_fifth_vote_unsuppresses(self, tmp_path):
        arena = make_arena(tmp_path, n_models=2, k_anonymity_threshold=5)
        add_user(arena, "u1", age_band="26-35")
        for i in range(5):
            _vote(arena, "u1", ComparativeOutcome.A_BETTER, prompt=f"enough now {i}")
        group = arena.crowd_breakdown("age_band", AbilityTrack.GENERATIVE).groups[0]
        assert group.suppressed is False
        assert len(group.series) == 2

    def test_non_consenting_votes_excluded(self, tmp_path):
        arena = make_arena(tmp_path, n_models=2)
        add_user(arena, "u-yes", consent=True, age_band="18-25")
        add_user(arena, "u-no", consent=False, age_band="18-25")
        for i in range(5):
            _vote(arena, "u-yes", ComparativeOutcome.A_BETTER, prompt=f"consent yes {i}")
        for i in range(7):
            _vote(arena, "u-no", ComparativeOutcome.B_BETTER, prompt=f"consent no {i}")
        breakdown = arena.crowd_breakdown("age_band", AbilityTrack.GENERATIVE)
        assert breakdown.non_consenting_votes == 7
        assert sum(g.vote_count for g in breakdown.groups) == 5
        # counts add up to total votes on the track
        assert sum(g.vote_count for g in breakdown.groups) + breakdown.non_consenting_votes == len(arena.state.votes)

    def test_mean_score_aggregation(self, tmp_path):
        arena = make_arena(tmp_path, n_models=2)
        add_user(arena, "u1", profession="engineer")
        scores = [(5, 1), (4, 2), (3, 3), (5, 2), (4, 1)]
        for i, (sa, sb) in enumerate(scores):
            view = arena.run_decentralized_round("u1", f"scored battle {i}")
            ticket = arena.state.rounds[view.ticket_id].ticket
            # pin scores to physical models so the mean is predictable
            if ticket.slot_a_model == "m0":
                arena.submit_vote(VoteSubmission(view.ticket_id, "u1", ComparativeOutcome.A_BETTER,
                                                 score_a=sa, score_b=sb))
            else:
                arena.submit_vote(VoteSubmission(view.ticket_id, "u1", ComparativeOutcome.B_BETTER,
                                                 score_a=sb, score_b=sa))
        breakdown = arena.crowd_breakdown("profession", AbilityTrack.GENERATIVE)
        group = {g.label: g for g in breakdown.groups}["engineer"]
        stats = {s.model_id: s for s in group.series}
        assert stats["m0"].mean_score == pytest.approx(sum(s for s, _ in scores) / 5)
        assert stats["m1"].mean_score == pytest.approx(sum(s for _, s in scores) / 5)

    def test_discriminative_track_uses_judge_votes(self, tmp_path):
        arena = make_arena(tmp_path, n_models=4, k_anonymity_threshold=1)
        add_user(arena, "u1", education="master")
        view = arena.run_decentralized_round("u1", "with judges")
        arena.run_discriminative_round(view.ticket_id)
        arena.submit_vote(
            VoteSubmission(view.ticket_id, "u1", ComparativeOutcome.A_BETTER,
                           judge_outcome=ComparativeOutcome.A_BETTER, judge_score_c=5, judge_score_d=1)
        )
        _vote(arena, "u1", ComparativeOutcome.B_BETTER, prompt="no judges")
        breakdown = arena.crowd_breakdown("education", AbilityTrack.DISCRIMINATIVE)
        group = {g.label: g for g in breakdown.groups}["MASTER"]
        assert group.vote_count == 1  # only the judge-voted round counts here
        ticket = arena.state.rounds[view.ticket_id].ticket
        stats = {s.model_id: s for s in group.series}
        assert stats[ticket.judge_c_model].win_rate == 1.0
        assert stats[ticket.judge_c_model].mean_score == 5.0

    def test_unknown_dimension(self, tmp_path):
        arena = make_arena(tmp_path, n_models=2)
        with pytest.raises(UnknownDimension):
            arena.crowd_breakdown("favorite_color", AbilityTrack.GENERATIVE)


class TestAccuracyTable:
    def test_counts_against_brute_force(self, tmp_path):
        arena = make_arena(tmp_path, n_models=2)
        arena.ingest_questions(corpus_lines(6))
        add_user(arena, "u1")
        for qid in list(arena.state.questions):
            arena.run_centralized_round("u1", qid)
        for model_id in arena.state.models:
            table = arena.accuracy_table(model_id)
            # independent recount straight off the round records
            expected: dict[str, list] = {}
            for rec in arena.state.rounds.values():
                question = arena.state.questions[rec.question_id]
                for slot, parsed in (("slot_a_model", rec.parsed_a), ("slot_b_model", rec.parsed_b)):
                    if getattr(rec.ticket, slot) == model_id:
                        expected.setdefault(question.domain, []).append(parsed.letter == question.correct)
            assert set(table) == set(expected)
            for domain, hits in expected.items():
                assert table[domain]["parseable"] == len(hits)
                assert table[domain]["accuracy"] == pytest.approx(sum(hits) / len(hits))

    def test_no_centralized_rounds_empty(self, tmp_path):
        arena = make_arena(tmp_path, n_models=2)
        add_user(arena, "u1")
        _vote(arena, "u1", ComparativeOutcome.A_BETTER, prompt="decentralized only")
        assert arena.accuracy_table("m0") == {}

    def test_unknown_model(self, tmp_path):
        arena = make_arena(tmp_path, n_models=2)
        with pytest.raises(UnknownModel):
            arena.accuracy_table("m-ghost")
