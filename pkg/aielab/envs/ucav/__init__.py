from .actions import (
    CRUISE_ACTION,
    N_ACTIONS,
    NOOP_ACTION,
    ControlCommand,
    apply_action,
    decode_action,
)
from .dynamics import UcavParams, UcavState, integrate_dynamics
from .env import (
    TrajectoryRecord,
    UcavEnvironment,
    replay_actions,
    trajectory_to_jsonl,
)
from .missile import Missile, MissileParams, missile_pn_step, pn_acceleration
from .observation import (
    ObservationBuilder,
    build_observation,
    coordinate_feature,
    observation_size,
)
from .scenario import (
    Bounds,
    SamSite,
    Scenario,
    StartPoint,
    TargetPoint,
    load_scenario,
    parse_scenario,
)

__all__ = [
    "CRUISE_ACTION",
    "N_ACTIONS",
    "NOOP_ACTION",
    "Bounds",
    "ControlCommand",
    "Missile",
    "MissileParams",
    "ObservationBuilder",
    "SamSite",
    "Scenario",
    "StartPoint",
    "TargetPoint",
    "TrajectoryRecord",
    "UcavEnvironment",
    "UcavParams",
    "UcavState",
    "apply_action",
    "build_observation",
    "coordinate_feature",
    "decode_action",
    "integrate_dynamics",
    "load_scenario",
    "missile_pn_step",
    "observation_size",
    "parse_scenario",
    "pn_acceleration",
    "replay_actions",
    "trajectory_to_jsonl",
]
