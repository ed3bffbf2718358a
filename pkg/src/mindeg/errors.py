"""Shared exception types."""


class MindegError(Exception):
    """Base class for library errors."""


class ResourceBudgetError(MindegError):
    """A configured search/node budget was exceeded."""


class LimitExceededError(MindegError):
    """An order/size limit was exceeded."""


class NotFittingFree(MindegError):
    """The input group has a nontrivial abelian normal subgroup."""


class HintRequired(MindegError):
    """A recognition hint is needed to decide this case."""


class UnsupportedCase(MindegError):
    """The case is recognized but outside the supported scope."""
