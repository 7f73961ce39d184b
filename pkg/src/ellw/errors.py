"""Exception and warning types shared by every module."""


class EllwError(ValueError):
    """Base class for numeric failures (CLI exit status 3)."""


class DomainError(EllwError):
    pass


class PoleError(EllwError):
    """A denominator fell below the pole threshold."""


class TruncationError(EllwError):
    """The estimated discarded tail exceeds the configured bound."""


class BranchError(EllwError):
    pass


class BranchWarning(UserWarning):
    """An argument sits close to the principal-branch cut of log."""
