from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict

from .._compat import tomllib
from ..envs.ucav.env import UcavEnvironment
from ..envs.ucav.scenario import load_scenario, parse_scenario
from ..exceptions.config import ConfigError
from ..loggers import logger_harness
from .config import load_config, parse_config, preset_names

if TYPE_CHECKING:
    from ..agents.agent import Agent
    from ..envs.base import BaseEnvironment


class EvalSummary(BaseModel):
    """Итог прогона политики без обучения."""

    model_config = ConfigDict(extra="forbid")

    episodes: int
    greedy: bool
    mean_return: float
    mean_length: float
    returns: list[float]
    causes: dict[str, int]


def resolve_environment(ref: str) -> BaseEnvironment:
    """
    Среда по ссылке: имя пресета эксперимента, путь к конфигурации
    эксперимента, имя встроенного сценария UCAV или путь к нему.

    Raises:
        ConfigError: Ссылка не распознана или файл некорректен.
    """

    if ref in preset_names():
        return load_config(ref).environment.build()

    path = Path(ref)
    if not path.exists():
        return UcavEnvironment(load_scenario(ref))
    try:
        data = tomllib.loads(path.read_text(encoding="utf-8"))
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise ConfigError(f"Не удалось прочитать {ref!r}: {e}") from e
    if "environment" in data:
        return parse_config(data).environment.build()
    return UcavEnvironment(parse_scenario(data, name=path.stem))


def evaluate_policy(
    agent: Agent,
    env: BaseEnvironment,
    episodes: int,
    *,
    seed: int = 0,
    greedy: bool = False,
) -> EvalSummary:
    """
    Прогоняет политику агента ``episodes`` раз без обучения.

    Raises:
        DimensionMismatch: Чекпоинт обучен на среде другой размерности.
    """

    rng = np.random.default_rng(seed)
    returns: list[float] = []
    lengths: list[int] = []
    causes: Counter[str] = Counter()
    for _ in range(episodes):
        total, cause, steps = agent.run_policy(env, rng, greedy=greedy)
        returns.append(total)
        lengths.append(steps)
        causes[str(cause)] += 1

    summary = EvalSummary(
        episodes=episodes,
        greedy=greedy,
        mean_return=float(np.mean(returns)) if returns else 0.0,
        mean_length=float(np.mean(lengths)) if lengths else 0.0,
        returns=returns,
        causes=dict(sorted(causes.items())),
    )
    logger_harness.info(
        "Оценка: %d эпизодов, средний возврат %.3f, %s",
        episodes,
        summary.mean_return,
        summary.causes,
    )
    return summary
