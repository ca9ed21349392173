from .activation import Activation
from .grid import GridAction, GridMode
from .terminal_cause import TerminalCause
from .training import PenaltyThreshold, PlotKind, PredictorMode
from .variant import AgentVariant

__all__ = [
    "Activation",
    "AgentVariant",
    "GridAction",
    "GridMode",
    "PenaltyThreshold",
    "PlotKind",
    "PredictorMode",
    "TerminalCause",
]
