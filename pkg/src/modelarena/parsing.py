"""MCQ prompt construction, option-letter extraction, and accuracy scoring.

Extraction is deliberately rule-based and ordered so that every stored
event can be re-derived: same text in, same choice out. The rule that
fired is recorded alongside the letter for audit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from modelarena.domain import QuestionItem, QuestionSource
from modelarena.errors import NotMcq

MCQ_PROMPT_PREFIX = "For the following questions, please give the correct option and explanation. "

# R1: a parenthesized option letter.
_R1 = re.compile(r"\(([A-D])\)")
# R2: "option X" / "answer is X" / "Answer: X", case-insensitive.
_R2 = re.compile(r"\b(?:option\s+([A-Da-d])\b|answer\s+is\s+([A-Da-d])\b|answer\s*:\s*([A-Da-d])\b)", re.IGNORECASE)
# R3: a line beginning "X." or "X)" (leading whitespace allowed).
_R3 = re.compile(r"^[ \t]*([A-D])[.)]", re.MULTILINE)


@dataclass(frozen=True)
class ParsedChoice:
    """Extraction result: letter is None iff no rule fired."""

    letter: Optional[str]
    matched_rule: Optional[str] = None
    span: Optional[tuple[int, int]] = None

    def to_record(self) -> dict:
        return {
            "letter": self.letter,
            "matched_rule": self.matched_rule,
            "span": list(self.span) if self.span is not None else None,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ParsedChoice":
        span = rec.get("span")
        return cls(
            letter=rec.get("letter"),
            matched_rule=rec.get("matched_rule"),
            span=tuple(span) if span is not None else None,
        )


NO_CHOICE = ParsedChoice(letter=None)


def build_mcq_prompt(q: QuestionItem) -> str:
    """Render the frozen multiple-choice prompt for a curated question.

    The template is byte-exact (single space after each comma, trailing
    period); option texts are inserted verbatim, commas and all.
    """
    if q.source is not QuestionSource.CURATED:
        raise NotMcq(f"question {q.question_id} is user-submitted free-form")
    a, b, c, d = q.options
    return f"{MCQ_PROMPT_PREFIX}{q.stem}, (A) {a}, (B) {b}, (C) {c}, (D) {d}."


def parse_choice(text: str) -> ParsedChoice:
    """Extract the chosen option letter from free-text model output.

    Rules fire in priority order, first match wins:
      R1  parenthesized letter "(X)"
      R2  the phrase "option X" / "answer is X" / "Answer: X" (case-insensitive)
      R3  a line beginning "X." or "X)"
    with X one of A-D. Within a rule the earliest occurrence wins. If no
    rule fires the letter is None; that is a value, not an error.
    """
    m = _R1.search(text)
    if m:
        return ParsedChoice(letter=m.group(1), matched_rule="R1", span=m.span())
    m = _R2.search(text)
    if m:
        letter = next(g for g in m.groups() if g is not None)
        return ParsedChoice(letter=letter.upper(), matched_rule="R2", span=m.span())
    m = _R3.search(text)
    if m:
        return ParsedChoice(letter=m.group(1), matched_rule="R3", span=m.span())
    return NO_CHOICE


@dataclass(frozen=True)
class AccuracyResult:
    """Accuracy over parseable records; None when nothing was parseable."""

    accuracy: Optional[float]
    parseable: int
    unparsed: int


def score_accuracy(records: Iterable[tuple[ParsedChoice, str]]) -> AccuracyResult:
    """Fraction of parseable records whose letter matches the correct one.

    Records whose choice letter is None count as unparsed and are excluded
    from the denominator; with no parseable records the accuracy is absent
    rather than zero.
    """
    parseable = 0
    correct = 0
    unparsed = 0
    for choice, answer in records:
        if choice.letter is None:
            unparsed += 1
            continue
        parseable += 1
        if choice.letter == answer:
            correct += 1
    if parseable == 0:
        return AccuracyResult(accuracy=None, parseable=0, unparsed=unparsed)
    return AccuracyResult(accuracy=correct / parseable, parseable=parseable, unparsed=unparsed)
