"""Exception hierarchy shared by every analysis module."""


class PstlabError(Exception):
    """Base class for all library errors."""


class GraphParseError(PstlabError, ValueError):
    """Raised when graph text cannot be decoded.

    ``offset`` is the byte offset of the offending character when known.
    """

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class DisconnectedGraphError(PstlabError):
    """An operation that needs a connected graph received a disconnected one."""


class ClusterAmbiguityError(PstlabError):
    """Two eigenvalue clusters are too close to be told apart safely."""


class IllConditionedError(PstlabError):
    """A floating-point solve produced a residual in the undecidable band."""


class PreconditionError(PstlabError):
    """A documented hypothesis of an operation does not hold for the input."""


class TheoryViolation(PstlabError):
    """A computed result contradicts a proven structural theorem.

    This is never expected on valid input. It indicates either a bug or a
    numerical breakdown and must not be silently swallowed.
    """
