from .agents import Agent, AgentConfig
from .envs import GridConfig, GridWorld, UcavEnvironment
from .harness import ExperimentConfig, load_config, run_experiment

__all__ = [
    "Agent",
    "AgentConfig",
    "ExperimentConfig",
    "GridConfig",
    "GridWorld",
    "UcavEnvironment",
    "load_config",
    "run_experiment",
]
