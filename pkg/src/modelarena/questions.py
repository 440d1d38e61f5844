"""Curated question store operations and browsing-affinity recommendation.

Recommendation is Laplace-smoothed sampling over the user's per-domain
view counts: a domain is drawn with probability (views + alpha) /
(total_views + alpha * n_domains), then an unseen question uniformly
within it. Domains whose questions the user has exhausted drop out and
the remaining mass renormalizes, so a user never gets the same curated
question twice until the corpus is exhausted.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from modelarena.domain import QuestionItem, QuestionSource, UserProfile
from modelarena.errors import AllSeen, NoDomains

_CORPUS_KEYS = {"question_id", "domain", "stem", "options", "correct", "source"}


@dataclass(frozen=True)
class RejectedLine:
    line: int
    code: str
    message: str


@dataclass(frozen=True)
class IngestReport:
    ingested: int
    rejections: tuple[RejectedLine, ...]

    def to_record(self) -> dict:
        return {
            "ingested": self.ingested,
            "rejections": [
                {"line": r.line, "code": r.code, "message": r.message} for r in self.rejections
            ],
        }


@dataclass(frozen=True)
class AffinityVector:
    """Per-domain sampling probabilities; sums to 1 over registered domains."""

    probabilities: Mapping[str, float]

    def sample(self, randomness: random.Random) -> str:
        roll = randomness.random()
        acc = 0.0
        domains = sorted(self.probabilities)
        for domain in domains:
            acc += self.probabilities[domain]
            if roll < acc:
                return domain
        return domains[-1]  # guard against accumulated float error at roll ~= 1


def _is_domain_token(value) -> bool:
    return isinstance(value, str) and value != "" and value == value.lower() and not value.isspace()


def parse_question_record(rec: dict) -> QuestionItem:
    """Validate one corpus record; raises ValueError with the reason."""
    if not isinstance(rec, dict):
        raise ValueError("record must be a JSON object")
    unknown = set(rec) - _CORPUS_KEYS
    if unknown:
        raise ValueError(f"unknown keys: {sorted(unknown)}")
    for key in ("question_id", "domain", "stem"):
        if not rec.get(key) or not isinstance(rec[key], str):
            raise ValueError(f"missing or non-text field {key!r}")
    if not _is_domain_token(rec["domain"]):
        raise ValueError("domain must be a non-empty lowercase token")
    source = QuestionSource(rec["source"]) if "source" in rec else QuestionSource.CURATED
    options = rec.get("options", [])
    if not isinstance(options, list) or not all(isinstance(o, str) for o in options):
        raise ValueError("options must be a list of texts")
    return QuestionItem(
        question_id=rec["question_id"],
        domain=rec["domain"],
        stem=rec["stem"],
        options=tuple(options),
        correct=rec.get("correct"),
        source=source,
    )


def ingest_questions(
    lines: Iterable[str],
    existing_ids: Iterable[str] = (),
) -> tuple[list[QuestionItem], IngestReport]:
    """Parse a JSON Lines corpus stream into question items.

    Malformed lines and duplicate ids (against the store or earlier lines)
    are rejected with a per-line report; valid items come back in order.
    """
    seen_ids = set(existing_ids)
    items: list[QuestionItem] = []
    rejections: list[RejectedLine] = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            rejections.append(RejectedLine(line_no, "MALFORMED_LINE", f"invalid JSON: {exc.msg}"))
            continue
        try:
            item = parse_question_record(rec)
        except (ValueError, KeyError) as exc:
            rejections.append(RejectedLine(line_no, "MALFORMED_LINE", str(exc)))
            continue
        if item.question_id in seen_ids:
            rejections.append(RejectedLine(line_no, "DUPLICATE_ID", f"duplicate question_id {item.question_id!r}"))
            continue
        seen_ids.add(item.question_id)
        items.append(item)
    return items, IngestReport(ingested=len(items), rejections=tuple(rejections))


def registered_domains(questions: Iterable[QuestionItem]) -> list[str]:
    return sorted({q.domain for q in questions if q.source is QuestionSource.CURATED})


def affinity(user: UserProfile, domains: Sequence[str], alpha: float = 1.0) -> AffinityVector:
    """Laplace-smoothed browsing affinity over the registered domains."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    pool = sorted(set(domains))
    if not pool:
        raise NoDomains("no domains registered")
    views = {d: user.domain_views.get(d, 0) for d in pool}
    total = sum(views.values())
    denom = total + alpha * len(pool)
    return AffinityVector({d: (views[d] + alpha) / denom for d in pool})


def choose_next(
    user: UserProfile,
    questions: Mapping[str, QuestionItem],
    randomness: random.Random,
    alpha: float = 1.0,
    allow_repeat: bool = False,
) -> QuestionItem:
    """Pick the next curated question for a user.

    Samples a domain from the user's affinity restricted to domains that
    still hold unseen questions (mass renormalizes), then a uniform unseen
    question within it. Raises AllSeen once the corpus is exhausted unless
    repeats after exhaustion are allowed, in which case the draw runs over
    the full corpus again without clearing history.
    """
    curated = {qid: q for qid, q in questions.items() if q.source is QuestionSource.CURATED}
    unseen_by_domain: dict[str, list[str]] = {}
    for qid, q in curated.items():
        if qid not in user.seen_questions:
            unseen_by_domain.setdefault(q.domain, []).append(qid)
    if not unseen_by_domain:
        if not allow_repeat or not curated:
            raise AllSeen("every curated question has been served to this user")
        for qid, q in curated.items():
            unseen_by_domain.setdefault(q.domain, []).append(qid)

    base = affinity(user, registered_domains(curated.values()), alpha=alpha)
    open_domains = sorted(unseen_by_domain)
    mass = sum(base.probabilities[d] for d in open_domains)
    restricted = AffinityVector({d: base.probabilities[d] / mass for d in open_domains})
    domain = restricted.sample(randomness)
    candidates = sorted(unseen_by_domain[domain])
    return curated[candidates[randomness.randrange(len(candidates))]]
