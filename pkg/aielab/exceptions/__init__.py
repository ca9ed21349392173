from .config import ConfigError, DimensionMismatch, VariantMismatch
from .encoding import (
    CheckpointFormatError,
    CoordinateOutOfRange,
    EncodingFormatError,
)
from .harness import RunFailed
from .numeric import NumericalError, SimulationError
from .usage import EpisodeFinished, InvalidAction, MissingSeries, UsageError

__all__ = [
    "CheckpointFormatError",
    "ConfigError",
    "CoordinateOutOfRange",
    "DimensionMismatch",
    "EncodingFormatError",
    "EpisodeFinished",
    "InvalidAction",
    "MissingSeries",
    "NumericalError",
    "RunFailed",
    "SimulationError",
    "UsageError",
    "VariantMismatch",
]
