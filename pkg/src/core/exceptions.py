"""Exception hierarchy shared by every module."""

from typing import Any, Optional


class AirlError(Exception):
    """Base exception for simulator errors."""
    pass


class ConfigError(AirlError):
    """Raised when an experiment config field is missing or invalid."""

    def __init__(self, field: str, value: Any, reason: str):
        self.field = field
        self.value = value
        self.reason = reason
        super().__init__(f"{field}={value!r}: {reason}")


class ParseError(AirlError):
    """Raised when a data file cannot be parsed; carries the byte offset."""

    def __init__(self, path: Optional[str], offset: int, reason: str):
        self.path = path
        self.offset = offset
        self.reason = reason
        where = path or "<memory>"
        super().__init__(f"{where} at byte {offset}: {reason}")


class CostmapStageError(AirlError):
    """Raised when a costmap operation receives a map in the wrong stage."""
    pass


class DynamicsError(AirlError):
    """Raised when a dynamics model is misconfigured."""
    pass


class EpisodeError(AirlError):
    """Raised when an episode cannot be set up."""
    pass
