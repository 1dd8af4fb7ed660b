"""Exception hierarchy shared by every core module."""


class CompgraphError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSizesError(CompgraphError, ValueError):
    """A partite size tuple is empty, has a non-positive entry, or is unsorted."""


class VertexRangeError(CompgraphError, IndexError):
    """A vertex index lies outside [0, n)."""


class InvalidDigraphError(CompgraphError, ValueError):
    """A digraph has a self-loop, a 2-cycle, or an out-of-range arc."""


class InvalidTournamentError(CompgraphError, ValueError):
    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


class FormatError(CompgraphError, ValueError):
    """DMT/JSON input could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PreconditionError(CompgraphError, ValueError):
    """An operation was called outside its documented domain."""


class ConstructionError(CompgraphError, AssertionError):
    """A construction produced an output that failed its own postcondition."""


class WitnessDataError(CompgraphError, AssertionError):
    """An embedded witness matrix failed validation."""


class EmbeddingNotFoundError(CompgraphError):
    pass


class SearchLimitError(CompgraphError, ValueError):
    """An instance exceeds a configured search or enumeration cap."""
