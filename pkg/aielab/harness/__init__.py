from .config import (
    EnvironmentConfig,
    ExperimentConfig,
    MetricsConfig,
    load_config,
    preset_names,
)
from .evaluate import EvalSummary, evaluate_policy, resolve_environment
from .export import export_run
from .metrics import (
    ExplorationScore,
    LearningCurve,
    VisitCounter,
    exploration_score,
    learning_curve,
    predictor_loss_map,
    quadrant_coverages,
    score_from_coverages,
    shotdown_curve,
)
from .plots import build_figure, emit_plots
from .records import RunRecord, load_run_record, load_run_records
from .replay import ActionLog, read_action_log, replay_action_log
from .runner import run_experiment, run_seed, write_run_record

__all__ = [
    "ActionLog",
    "EnvironmentConfig",
    "EvalSummary",
    "ExperimentConfig",
    "ExplorationScore",
    "LearningCurve",
    "MetricsConfig",
    "RunRecord",
    "VisitCounter",
    "build_figure",
    "emit_plots",
    "evaluate_policy",
    "exploration_score",
    "export_run",
    "learning_curve",
    "load_config",
    "load_run_record",
    "load_run_records",
    "predictor_loss_map",
    "preset_names",
    "quadrant_coverages",
    "read_action_log",
    "replay_action_log",
    "resolve_environment",
    "run_experiment",
    "run_seed",
    "score_from_coverages",
    "shotdown_curve",
    "write_run_record",
]
