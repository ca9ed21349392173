from enum import auto, unique

from .._compat import StrEnum


@unique
class TerminalCause(StrEnum):
    """Причина завершения эпизода."""

    NONE = auto()
    ARRIVED = auto()
    SHOT_DOWN = auto()
    OUT_OF_BOUNDS = auto()
    TIMEOUT = auto()
