"""Exception hierarchy shared by all modules."""


class LocographError(Exception):
    """Base class for every error raised by locograph."""


class DegenerateLatticeError(LocographError, ValueError):
    def __init__(self, msg: str = "degenerate lattice"):
        super().__init__(msg)


class QuotientNotSimpleError(LocographError, ValueError):
    def __init__(self, msg: str = "quotient not simple"):
        super().__init__(msg)


class ParameterError(LocographError, ValueError):
    """Bad user-facing parameter (CLI exit code 2)."""


class EmptySupportError(LocographError):
    """No structure of the requested size exists (CLI exit code 3)."""

    def __init__(self, msg: str = "empty support"):
        super().__init__(msg)


class CensusRangeError(LocographError):
    """A census table does not reach the requested index."""


class ConsistencyError(LocographError, AssertionError):
    """An internal self-check failed (CLI exit code 4)."""


class SaddleBracketError(LocographError):
    def __init__(self, msg: str = "saddle not bracketed"):
        super().__init__(msg)
