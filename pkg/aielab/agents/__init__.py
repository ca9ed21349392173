from .a2c import A2cStats, a2c_update
from .agent import Agent, AgentRngs, EpisodeRecord, StepEvent, StepObserver
from .buffers import (
    FeatureBuffer,
    FeatureRecord,
    SilBuffer,
    SumTree,
    Transition,
)
from .checkpoint import load_checkpoint, save_checkpoint
from .config import AgentConfig
from .normalizer import RunningMeanStd
from .penalty import PenaltyResult, PenaltyTracker, apply_penalty
from .policy import ActorCriticLoss, PolicyValueNet, SelfImitationLoss
from .returns import compute_returns
from .rnd import (
    PredictorUpdate,
    RndPair,
    predictor_update,
    rnd_intrinsic,
    rnd_intrinsic_batch,
    train_predictor,
)
from .sil import SilStats, sil_update

__all__ = [
    "A2cStats",
    "ActorCriticLoss",
    "Agent",
    "AgentConfig",
    "AgentRngs",
    "EpisodeRecord",
    "FeatureBuffer",
    "FeatureRecord",
    "PenaltyResult",
    "PenaltyTracker",
    "PolicyValueNet",
    "PredictorUpdate",
    "RndPair",
    "RunningMeanStd",
    "SelfImitationLoss",
    "SilBuffer",
    "SilStats",
    "StepEvent",
    "StepObserver",
    "SumTree",
    "Transition",
    "a2c_update",
    "apply_penalty",
    "compute_returns",
    "load_checkpoint",
    "predictor_update",
    "rnd_intrinsic",
    "rnd_intrinsic_batch",
    "save_checkpoint",
    "sil_update",
    "train_predictor",
]
