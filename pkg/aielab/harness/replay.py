from __future__ import annotations

from pathlib import Path

from pydantic import BaseModel, ConfigDict, ValidationError

from ..envs.ucav.env import (
    TrajectoryRecord,
    replay_actions,
    trajectory_to_jsonl,
)
from ..envs.ucav.scenario import Scenario
from ..exceptions.config import ConfigError
from ..loggers import logger_harness


class ActionLog(BaseModel):
    """
    Журнал действий эпизода UCAV.

    Хранит сценарий целиком, поэтому воспроизведение не зависит
    от пресетов, существующих на момент запуска.
    """

    model_config = ConfigDict(extra="forbid")

    seed: int
    episode: int
    scenario: Scenario
    actions: list[int]


def read_action_log(path: str | Path) -> ActionLog:
    try:
        return ActionLog.model_validate_json(
            Path(path).read_text(encoding="utf-8")
        )
    except (OSError, ValidationError) as e:
        raise ConfigError(f"Некорректный журнал действий {path}: {e}") from e


def replay_action_log(log: ActionLog) -> list[TrajectoryRecord]:
    trajectory = replay_actions(log.scenario, log.actions)
    logger_harness.info(
        "Воспроизведён эпизод %d (seed %d): %d шагов, %s",
        log.episode,
        log.seed,
        len(trajectory) - 1,
        trajectory[-1].cause,
    )
    return trajectory


def replay_to_jsonl(path: str | Path) -> str:
    return trajectory_to_jsonl(replay_action_log(read_action_log(path)))
