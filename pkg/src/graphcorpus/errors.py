"""Exception types shared across the package."""


class GraphCorpusError(Exception):
    """Base class for all package errors."""


class InvalidSpecError(GraphCorpusError, ValueError):
    """A parameter is outside its documented domain (n <= 0, p not in [0,1], ...)."""


class GraphInvalidError(GraphCorpusError, ValueError):
    """A Graph violates a structural invariant."""


class GraphKindError(GraphCorpusError, ValueError):
    """A solver was handed the wrong kind of graph (directedness, weights)."""


class InvalidQueryError(GraphCorpusError, ValueError):
    """A query references missing nodes or is otherwise ill-formed."""


class OracleLimitError(GraphCorpusError, ValueError):
    """An instance exceeds the brute-force oracle's size limit."""


class ParseError(GraphCorpusError, ValueError):
    """Problem text could not be parsed; carries the byte offset of the fault."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class BackendError(GraphCorpusError, RuntimeError):
    """A sampling backend failed (auth, transport, request budget)."""

    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class CacheError(GraphCorpusError, RuntimeError):
    """The completion cache file is corrupt."""


class RecordError(GraphCorpusError, ValueError):
    """A corpus record failed validation; names the offending record."""


class SchemaError(GraphCorpusError, ValueError):
    """A JSONL line is malformed; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class StageError(GraphCorpusError, RuntimeError):
    """A pipeline stage could not satisfy its contract (balance, retries)."""
