"""Exception hierarchy shared by all modules."""


class BithreshError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameter(BithreshError, ValueError):
    """A constructor argument is outside its legal domain."""


class InvalidInput(BithreshError, ValueError):
    """An input value violates an operation's precondition."""


class InvalidMove(BithreshError, ValueError):
    """A source-to-sink conversion was requested at a non-source vertex."""


class NotApplicable(BithreshError, ValueError):
    """The operation is undefined for this input (e.g. a row with period <= 2)."""


class ResourceLimit(BithreshError, RuntimeError):
    """The requested computation exceeds a configured size cap."""


class InternalInconsistency(BithreshError, AssertionError):
    """A checked mathematical identity failed; indicates an implementation bug."""
