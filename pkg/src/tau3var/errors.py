"""Shared exception types."""


class CapacityError(ValueError):
    """A requested table or transform size exceeds the configured capacity."""


class InternalConsistencyError(RuntimeError):
    """Two routes that must agree (fast path vs oracle, dual evaluation) diverged."""
