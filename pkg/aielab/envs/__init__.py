from .base import BaseEnvironment, StepResult
from .grid import GridConfig, GridWorld
from .ucav import Scenario, UcavEnvironment, load_scenario

__all__ = [
    "BaseEnvironment",
    "GridConfig",
    "GridWorld",
    "Scenario",
    "StepResult",
    "UcavEnvironment",
    "load_scenario",
]
