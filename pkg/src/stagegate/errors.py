"""Exception hierarchy shared across the engine, store, CLI and service."""


class StagegateError(Exception):
    """Base class for all domain errors; maps to CLI exit code 1."""

    code = "error"


class ParseError(StagegateError):
    """Model file is not valid JSON; carries line/column where known."""

    code = "parse_error"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class SchemaError(StagegateError):
    """Model file parses but violates the model schema."""

    code = "schema_error"


class RankMismatch(StagegateError):
    """A rank was requested that the indicator is not assigned to."""

    code = "rank_mismatch"


class ModelMismatch(StagegateError):
    """Responses or reports reference a different model id/version."""

    code = "model_mismatch"


class UnknownIndicator(StagegateError):
    """An answer or override names a code absent from the model."""

    code = "unknown_indicator"


class AnswerKindError(StagegateError):
    """Answer value variant does not match the indicator's response kind."""

    code = "answer_kind_error"


class InvalidTransition(StagegateError):
    """Measurement-cycle operation attempted out of order."""

    code = "invalid_transition"


class InvalidRank(StagegateError):
    """Rank outside 1..5."""

    code = "invalid_rank"


class NotFound(StagegateError):
    """Requested record does not exist in the workspace."""

    code = "not_found"


class StorageError(StagegateError):
    """Workspace I/O failure."""

    code = "storage_error"


class VersionConflict(StagegateError):
    """Optimistic-concurrency check failed: base version is stale."""

    code = "version_conflict"
