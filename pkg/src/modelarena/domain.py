"""Shared vocabulary types for the evaluation arena.

Everything here is an immutable value: construction validates, and all
mutation elsewhere in the system happens by replacing values through the
storage module's event application. The canonical record format is UTF-8
JSON with snake_case keys; enumerations serialize as uppercase strings.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Mapping

from modelarena.errors import ProfileValidationError

OPTION_LETTERS = ("A", "B", "C", "D")


class AbilityTrack(str, Enum):
    KNOWLEDGE = "KNOWLEDGE"
    GENERATIVE = "GENERATIVE"
    DISCRIMINATIVE = "DISCRIMINATIVE"


class ComparativeOutcome(str, Enum):
    A_BETTER = "A_BETTER"
    B_BETTER = "B_BETTER"
    BOTH_GOOD = "BOTH_GOOD"
    BOTH_BAD = "BOTH_BAD"


class QuestionSource(str, Enum):
    CURATED = "CURATED"
    USER_SUBMITTED = "USER_SUBMITTED"


class AgeBand(str, Enum):
    UNDER_18 = "UNDER_18"
    AGE_18_25 = "AGE_18_25"
    AGE_26_35 = "AGE_26_35"
    AGE_36_50 = "AGE_36_50"
    OVER_50 = "OVER_50"
    UNDISCLOSED = "UNDISCLOSED"


class Gender(str, Enum):
    MALE = "MALE"
    FEMALE = "FEMALE"
    NON_BINARY = "NON_BINARY"
    OTHER = "OTHER"
    UNDISCLOSED = "UNDISCLOSED"


class Education(str, Enum):
    SECONDARY = "SECONDARY"
    BACHELOR = "BACHELOR"
    MASTER = "MASTER"
    DOCTORATE = "DOCTORATE"
    OTHER = "OTHER"
    UNDISCLOSED = "UNDISCLOSED"


@dataclass(frozen=True)
class RatingState:
    """ELO rating and match count for one model on one ability track."""

    rating: float
    matches_played: int = 0

    def to_record(self) -> dict[str, Any]:
        return {"rating": self.rating, "matches_played": self.matches_played}

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> "RatingState":
        return cls(rating=float(rec["rating"]), matches_played=int(rec["matches_played"]))


@dataclass(frozen=True)
class ModelEntry:
    """A registered model with provider binding and per-track rating state."""

    model_id: str
    display_name: str
    provider_ref: str
    active: bool = True
    ratings: Mapping[AbilityTrack, RatingState] = field(default_factory=dict)

    def to_record(self) -> dict[str, Any]:
        return {
            "model_id": self.model_id,
            "display_name": self.display_name,
            "provider_ref": self.provider_ref,
            "active": self.active,
            "ratings": {t.value: s.to_record() for t, s in sorted(self.ratings.items(), key=lambda kv: kv[0].value)},
        }

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> "ModelEntry":
        return cls(
            model_id=rec["model_id"],
            display_name=rec["display_name"],
            provider_ref=rec["provider_ref"],
            active=bool(rec["active"]),
            ratings={AbilityTrack(t): RatingState.from_record(s) for t, s in rec.get("ratings", {}).items()},
        )


@dataclass(frozen=True)
class QuestionItem:
    """A question in the corpus.

    CURATED items carry exactly four non-empty options labeled A-D plus the
    correct letter. USER_SUBMITTED items are free-form prompts: options is
    empty and correct is absent.
    """

    question_id: str
    domain: str
    stem: str
    options: tuple[str, ...] = ()
    correct: str | None = None
    source: QuestionSource = QuestionSource.CURATED

    def __post_init__(self):
        if self.source is QuestionSource.CURATED:
            if len(self.options) != 4 or any(not o for o in self.options):
                raise ValueError("curated question needs exactly 4 non-empty options")
            if self.correct not in OPTION_LETTERS:
                raise ValueError("correct must be one of A/B/C/D")
        else:
            if self.options or self.correct is not None:
                raise ValueError("user-submitted question must have no options and no correct letter")

    def to_record(self) -> dict[str, Any]:
        rec: dict[str, Any] = {
            "question_id": self.question_id,
            "domain": self.domain,
            "stem": self.stem,
            "options": list(self.options),
            "source": self.source.value,
        }
        if self.correct is not None:
            rec["correct"] = self.correct
        return rec

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> "QuestionItem":
        return cls(
            question_id=rec["question_id"],
            domain=rec["domain"],
            stem=rec["stem"],
            options=tuple(rec.get("options", ())),
            correct=rec.get("correct"),
            source=QuestionSource(rec["source"]),
        )


@dataclass(frozen=True)
class UserProfile:
    """Evaluator demographics, consent flag, and browsing history.

    With consent False the demographic fields are excluded from every
    analytics aggregation. seen_questions and domain_views only ever grow.
    """

    user_id: str
    age_band: AgeBand = AgeBand.UNDISCLOSED
    gender: Gender = Gender.UNDISCLOSED
    profession: str = "undisclosed"
    education: Education = Education.UNDISCLOSED
    consent: bool = False
    seen_questions: frozenset[str] = frozenset()
    domain_views: Mapping[str, int] = field(default_factory=dict)

    def with_view(self, question_id: str, domain: str) -> "UserProfile":
        """Profile after one more served question (monotone history growth)."""
        views = dict(self.domain_views)
        views[domain] = views.get(domain, 0) + 1
        return UserProfile(
            user_id=self.user_id,
            age_band=self.age_band,
            gender=self.gender,
            profession=self.profession,
            education=self.education,
            consent=self.consent,
            seen_questions=self.seen_questions | {question_id},
            domain_views=views,
        )

    def to_record(self) -> dict[str, Any]:
        return {
            "user_id": self.user_id,
            "age_band": self.age_band.value,
            "gender": self.gender.value,
            "profession": self.profession,
            "education": self.education.value,
            "consent": self.consent,
            "seen_questions": sorted(self.seen_questions),
            "domain_views": {d: int(n) for d, n in sorted(self.domain_views.items())},
        }

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> "UserProfile":
        return cls(
            user_id=rec["user_id"],
            age_band=AgeBand(rec["age_band"]),
            gender=Gender(rec["gender"]),
            profession=rec["profession"],
            education=Education(rec["education"]),
            consent=bool(rec["consent"]),
            seen_questions=frozenset(rec.get("seen_questions", ())),
            domain_views=dict(rec.get("domain_views", {})),
        )


def canonical_dumps(record: Any) -> str:
    """Serialize to the canonical record format: UTF-8, sorted keys, compact."""
    return json.dumps(record, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def canonical_loads(text: str) -> Any:
    return json.loads(text)


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def generate_id(prefix: str, rng: random.Random) -> str:
    return f"{prefix}-{rng.getrandbits(48):012x}"


_AGE_ALIASES = {
    "<18": AgeBand.UNDER_18,
    "under 18": AgeBand.UNDER_18,
    "under_18": AgeBand.UNDER_18,
    "18–25": AgeBand.AGE_18_25,  # en dash
    "18-25": AgeBand.AGE_18_25,
    "18_25": AgeBand.AGE_18_25,
    "26–35": AgeBand.AGE_26_35,
    "26-35": AgeBand.AGE_26_35,
    "26_35": AgeBand.AGE_26_35,
    "36–50": AgeBand.AGE_36_50,
    "36-50": AgeBand.AGE_36_50,
    "36_50": AgeBand.AGE_36_50,
    ">50": AgeBand.OVER_50,
    "over 50": AgeBand.OVER_50,
    "over_50": AgeBand.OVER_50,
    "50+": AgeBand.OVER_50,
}

_GENDER_ALIASES = {
    "m": Gender.MALE,
    "male": Gender.MALE,
    "f": Gender.FEMALE,
    "female": Gender.FEMALE,
    "non-binary": Gender.NON_BINARY,
    "nonbinary": Gender.NON_BINARY,
    "non_binary": Gender.NON_BINARY,
    "other": Gender.OTHER,
}

_EDUCATION_ALIASES = {
    "secondary": Education.SECONDARY,
    "high school": Education.SECONDARY,
    "bachelor": Education.BACHELOR,
    "bachelors": Education.BACHELOR,
    "undergraduate": Education.BACHELOR,
    "master": Education.MASTER,
    "masters": Education.MASTER,
    "doctorate": Education.DOCTORATE,
    "phd": Education.DOCTORATE,
    "other": Education.OTHER,
}

_PROFILE_FIELDS = {"user_id", "age_band", "gender", "profession", "education", "consent"}


def _parse_enum(enum_cls, aliases: Mapping[str, Any], raw: str):
    token = raw.strip()
    if not token or token.lower() == "undisclosed":
        return enum_cls.UNDISCLOSED
    if token.lower() in aliases:
        return aliases[token.lower()]
    try:
        return enum_cls(token.upper())
    except ValueError:
        return None


def validate_profile(raw: Mapping[str, Any]) -> UserProfile:
    """Normalize a raw field map into a UserProfile.

    Unknown fields are rejected, undisclosed defaults applied, and consent
    defaults to False (opt-in). Raises ProfileValidationError carrying the
    per-field report when anything is off.
    """
    issues: list[tuple[str, str, str]] = []
    for key in raw:
        if key not in _PROFILE_FIELDS:
            issues.append((key, "UNKNOWN_FIELD", f"unknown field {key!r}"))

    user_id = str(raw.get("user_id", "") or "").strip()
    if not user_id:
        issues.append(("user_id", "MISSING_ID", "user_id is required"))

    age_band = AgeBand.UNDISCLOSED
    if "age_band" in raw:
        parsed = _parse_enum(AgeBand, _AGE_ALIASES, str(raw["age_band"]))
        if parsed is None:
            issues.append(("age_band", "INVALID_ENUM", f"not a recognized age band: {raw['age_band']!r}"))
        else:
            age_band = parsed

    gender = Gender.UNDISCLOSED
    if "gender" in raw:
        parsed = _parse_enum(Gender, _GENDER_ALIASES, str(raw["gender"]))
        if parsed is None:
            issues.append(("gender", "INVALID_ENUM", f"not a recognized gender value: {raw['gender']!r}"))
        else:
            gender = parsed

    education = Education.UNDISCLOSED
    if "education" in raw:
        parsed = _parse_enum(Education, _EDUCATION_ALIASES, str(raw["education"]))
        if parsed is None:
            issues.append(("education", "INVALID_ENUM", f"not a recognized education level: {raw['education']!r}"))
        else:
            education = parsed

    profession = str(raw.get("profession", "") or "").strip() or "undisclosed"

    consent = False
    if "consent" in raw:
        value = raw["consent"]
        if isinstance(value, bool):
            consent = value
        elif str(value).strip().lower() in ("true", "yes", "1"):
            consent = True
        elif str(value).strip().lower() in ("false", "no", "0", ""):
            consent = False
        else:
            issues.append(("consent", "INVALID_ENUM", f"consent must be true or false, got {value!r}"))

    if issues:
        raise ProfileValidationError(issues)
    return UserProfile(
        user_id=user_id,
        age_band=age_band,
        gender=gender,
        profession=profession,
        education=education,
        consent=consent,
    )
