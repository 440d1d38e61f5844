"""Prompt template, rule-priority extraction fixtures, and accuracy math."""

from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modelarena.domain import QuestionItem, QuestionSource
from modelarena.errors import NotMcq
from modelarena.parsing import (
    MCQ_PROMPT_PREFIX,
    ParsedChoice,
    build_mcq_prompt,
    parse_choice,
    score_accuracy,
)


class TestPromptTemplate:
    def test_byte_exact(self):
        q = QuestionItem("q1", "science", "2+2=?", ("3", "4", "5", "6"), "B")
        assert build_mcq_prompt(q) == (
            "For the following questions, please give the correct option and explanation. "
            "2+2=?, (A) 3, (B) 4, (C) 5, (D) 6."
        )

    def test_options_with_commas_inserted_verbatim(self):
        q = QuestionItem("q1", "science", "Pick one", ("x, y", "z", "w", "v"), "A")
        assert ", (A) x, y, (B) z," in build_mcq_prompt(q)

    def test_user_submitted_rejected(self):
        free = QuestionItem("q2", "custom", "write a poem", source=QuestionSource.USER_SUBMITTED)
        with pytest.raises(NotMcq):
            build_mcq_prompt(free)


# Fixture suite: (text, expected letter, expected rule). Covers rule
# priority, earliest-occurrence tiebreaks, case rules, and non-matches.
EXTRACTION_FIXTURES = [
    ("The correct option is (B). Because of the valence shell.", "B", "R1"),
    ("Answer: C) the mitochondria", "C", "R2"),
    ("Both are plausible.", None, None),
    ("(A) is the right choice here.", "A", "R1"),
    ("I lean towards (D), though (A) has merit.", "D", "R1"),
    ("The answer is (C), not (B).", "C", "R1"),
    ("option b looks right to me", "B", "R2"),
    ("The answer is C.", "C", "R2"),
    ("answer: d", "D", "R2"),
    ("ANSWER IS A", "A", "R2"),
    ("Answer: A or maybe answer is B", "A", "R2"),
    ("I would pick option D here.", "D", "R2"),
    ("A. The first option is correct.", "A", "R3"),
    ("  B) with leading whitespace", "B", "R3"),
    ("Some preamble first.\nC. second line wins", "C", "R3"),
    ("D) final answer\nA. also a line", "D", "R3"),
    ("b. lowercase line start does not fire", None, None),
    ("(b) lowercase parenthesis does not fire", None, None),
    ("First A. is mid-line, so no rule fires", None, None),
    ("E) letters outside A-D never match", None, None),
    ("", None, None),
    ("日本語のテキスト", None, None),
    ("Answer:B without a space", "B", "R2"),
    ("They said 'answer is a' in the end.", "A", "R2"),
    ("Totally unrelated sentence about options in general.", None, None),
]


@pytest.mark.parametrize("text,letter,rule", EXTRACTION_FIXTURES)
def test_extraction_fixtures(text, letter, rule):
    choice = parse_choice(text)
    assert choice.letter == letter
    assert choice.matched_rule == rule
    if letter is None:
        assert choice.span is None
    else:
        assert choice.span is not None and choice.span[0] >= 0


def test_rule_two_beats_rule_three():
    # "Answer: C" fires R2 before the "C)" fragment could ever reach R3.
    choice = parse_choice("Answer: C) the mitochondria")
    assert (choice.letter, choice.matched_rule) == ("C", "R2")


def test_earliest_occurrence_wins_within_rule():
    choice = parse_choice("(C) comes before (A) in this text")
    assert choice.letter == "C"
    assert choice.span == (0, 3)


@given(st.text(max_size=300))
def test_parse_choice_total_and_deterministic(text):
    first = parse_choice(text)
    second = parse_choice(text)
    assert first == second
    assert first.letter in (None, "A", "B", "C", "D")
    assert (first.letter is None) == (first.matched_rule is None)


@pytest.mark.parametrize("letter", ["A", "B", "C", "D"])
def test_canonical_mock_shape_roundtrip(letter):
    choice = parse_choice(f"The correct option is ({letter}) because reasons.")
    assert choice.letter == letter
    assert choice.matched_rule == "R1"


class TestScoreAccuracy:
    def test_two_of_three(self):
        records = [
            (ParsedChoice("B", "R1", (0, 3)), "B"),
            (ParsedChoice("C", "R1", (0, 3)), "B"),
            (ParsedChoice("A", "R1", (0, 3)), "A"),
        ]
        result = score_accuracy(records)
        assert result.accuracy == pytest.approx(2 / 3)
        assert result.parseable == 3
        assert result.unparsed == 0

    def test_unparsed_excluded_from_denominator(self):
        result = score_accuracy([(ParsedChoice(None), "B")])
        assert result.accuracy is None
        assert result.unparsed == 1
        assert result.parseable == 0

    def test_empty(self):
        result = score_accuracy([])
        assert result.accuracy is None
        assert result.parseable == 0
        assert result.unparsed == 0

    def test_thirty_record_fixture_matches_brute_force(self):
        rng = random.Random(303)
        records = []
        for _ in range(30):
            if rng.random() < 0.2:
                records.append((ParsedChoice(None), rng.choice("ABCD")))
            else:
                records.append((ParsedChoice(rng.choice("ABCD"), "R1", (0, 3)), rng.choice("ABCD")))
        result = score_accuracy(records)
        # independent recount
        hits = sum(1 for c, ans in records if c.letter is not None and c.letter == ans)
        parseable = sum(1 for c, _ in records if c.letter is not None)
        unparsed = 30 - parseable
        assert result.parseable == parseable
        assert result.unparsed == unparsed
        assert result.accuracy == pytest.approx(hits / parseable)

    def test_permutation_invariant(self):
        rng = random.Random(7)
        records = [(ParsedChoice(rng.choice("ABCD"), "R1", (0, 3)), rng.choice("ABCD")) for _ in range(25)]
        shuffled = records[:]
        rng.shuffle(shuffled)
        assert score_accuracy(records) == score_accuracy(shuffled)


def test_prefix_constant_matches_template():
    q = QuestionItem("q1", "science", "stem", ("1", "2", "3", "4"), "A")
    assert build_mcq_prompt(q).startswith(MCQ_PROMPT_PREFIX)
