"""Shared exception types."""


class RetroscopeError(Exception):
    """Base class for all engine errors."""


class ConfigurationError(RetroscopeError):
    """Bad configuration: unknown adapter, invalid run parameters, etc."""


class DataError(RetroscopeError):
    """The loaded data cannot support the requested operation."""


class AnalysisError(DataError):
    """An analysis precondition failed (too few events, no intensity, ...)."""


class EventSkipped(Exception):
    """Raised internally when a single event cannot enter an analysis.

    Carries the reason ("boundary", "no control", "zero reference", ...);
    runners catch it and record the event as skipped.
    """

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason
