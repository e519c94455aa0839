"""Exception types shared across the toolkit.

Numeric domain violations (bad shapes, empty inputs, out-of-range
parameters) raise plain ``ValueError`` like the rest of the numpy
ecosystem; the classes here cover I/O-shaped failures where callers need
to distinguish what went wrong.
"""


class IdeaspaceError(Exception):
    """Base class for all toolkit-specific errors."""


class CorpusParseError(IdeaspaceError):
    """Input bytes could not be decoded or parsed as a corpus file.

    Carries the record/line position when known.
    """

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at {position})")
        self.position = position


class CorpusValidationError(IdeaspaceError):
    """Parsed corpus violates an invariant (missing field, duplicate id, ...)."""

    def __init__(self, message, idea_id=None, field=None):
        super().__init__(message)
        self.idea_id = idea_id
        self.field = field


class TemplateError(IdeaspaceError):
    """An idea-text template references an unknown field."""


class TransportError(IdeaspaceError):
    """Remote embedding call failed after all retries.

    ``status`` holds the last HTTP status code, or None for connection
    failures.
    """

    def __init__(self, message, status=None):
        super().__init__(message)
        self.status = status


class ProtocolError(IdeaspaceError):
    """Remote embedding response violated the wire contract (row count or
    dimension mismatch)."""


class PipelineStageError(IdeaspaceError):
    """A pipeline stage failed for one idea set; names the stage and set."""

    def __init__(self, set_id, stage, cause):
        super().__init__(f"stage {stage!r} failed for set {set_id!r}: {cause}")
        self.set_id = set_id
        self.stage = stage
        self.cause = cause
