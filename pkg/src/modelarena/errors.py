"""Error types shared by every arena module.

Each error carries a machine-readable ``code`` token; the HTTP gateway maps
each token to exactly one status code. Library callers catch ``ArenaError``
(or a subclass) and can rely on ``code`` being stable.
"""

from __future__ import annotations


class ArenaError(Exception):
    """Base class for all arena errors."""

    code = "ARENA_ERROR"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


class NonFiniteInput(ArenaError):
    code = "NON_FINITE_INPUT"


class MissingId(ArenaError):
    code = "MISSING_ID"


class InvalidEnum(ArenaError):
    code = "INVALID_ENUM"


class UnknownField(ArenaError):
    code = "UNKNOWN_FIELD"


class ProfileValidationError(ArenaError):
    """Validation report for a rejected raw profile.

    ``issues`` is a list of ``(field, code, message)`` triples; ``code`` is
    taken from the first issue so the gateway maps the report like any other
    single error.
    """

    code = "INVALID_PROFILE"

    def __init__(self, issues: list[tuple[str, str, str]]):
        self.issues = issues
        self.code = issues[0][1] if issues else "INVALID_PROFILE"
        super().__init__("; ".join(f"{f}: {m}" for f, _, m in issues))


class InsufficientModels(ArenaError):
    code = "INSUFFICIENT_MODELS"


class UnknownTicket(ArenaError):
    code = "UNKNOWN_TICKET"


class NotYetVoted(ArenaError):
    code = "NOT_YET_VOTED"


class DuplicateVote(ArenaError):
    code = "DUPLICATE_VOTE"


class ScoreOutOfRange(ArenaError):
    code = "SCORE_OUT_OF_RANGE"


class InvalidVote(ArenaError):
    code = "INVALID_VOTE"


class UnknownQuestion(ArenaError):
    code = "UNKNOWN_QUESTION"


class UnknownModel(ArenaError):
    code = "UNKNOWN_MODEL"


class UnknownUser(ArenaError):
    code = "UNKNOWN_USER"


class DuplicateModel(ArenaError):
    code = "DUPLICATE_MODEL"


class UnknownDimension(ArenaError):
    code = "UNKNOWN_DIMENSION"


class AllSeen(ArenaError):
    code = "ALL_SEEN"


class NoDomains(ArenaError):
    code = "NO_DOMAINS"


class NotMcq(ArenaError):
    code = "NOT_MCQ"


class EmptyPrompt(ArenaError):
    code = "EMPTY_PROMPT"


class PromptTooLong(ArenaError):
    code = "PROMPT_TOO_LONG"


class ProviderFailure(ArenaError):
    code = "PROVIDER_FAILURE"


class SchemaViolation(ArenaError):
    code = "SCHEMA_VIOLATION"


class IoFailure(ArenaError):
    code = "IO_FAILURE"


class CorruptLog(ArenaError):
    """Event log failed integrity checks; ``last_valid_id`` is the highest
    event id that replayed cleanly (0 when the very first event is bad)."""

    code = "CORRUPT_LOG"

    def __init__(self, message: str, last_valid_id: int):
        super().__init__(message)
        self.last_valid_id = last_valid_id


class SnapshotLogMismatch(ArenaError):
    code = "SNAPSHOT_LOG_MISMATCH"


class BindFailure(ArenaError):
    code = "BIND_FAILURE"


class ConfigInvalid(ArenaError):
    code = "CONFIG_INVALID"


class AuthRequired(ArenaError):
    code = "AUTH_REQUIRED"


class AuthInvalid(ArenaError):
    code = "AUTH_INVALID"


class AdminRequired(ArenaError):
    code = "ADMIN_REQUIRED"


class ConsentRequired(ArenaError):
    code = "CONSENT_REQUIRED"
