from __future__ import annotations

import os
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    model_validator,
)

from .._compat import tomllib
from ..agents.config import AgentConfig
from ..envs.grid import GridConfig, GridWorld
from ..envs.ucav.env import UcavEnvironment
from ..envs.ucav.scenario import Scenario, load_scenario
from ..exceptions.config import ConfigError
from ..loggers import logger_harness

if TYPE_CHECKING:
    from ..enums.variant import AgentVariant
    from ..envs.base import BaseEnvironment

PRESET_PACKAGE = "aielab.presets"
OUTPUT_DIR_ENV = "AIELAB_OUTPUT_DIR"


class EnvironmentConfig(BaseModel):
    """
    Среда эксперимента.

    Attributes:
        kind (str): ``grid`` или ``ucav``.
        grid (GridConfig): Параметры сетки (для ``grid``).
        scenario (str): Имя встроенного сценария или путь к TOML
            (для ``ucav``).
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["grid", "ucav"] = "grid"
    grid: GridConfig = GridConfig()
    scenario: str = "ucav-small"

    def load_scenario(self) -> Scenario:
        return load_scenario(self.scenario)

    def build(self) -> BaseEnvironment:
        if self.kind == "grid":
            return GridWorld(self.grid)
        return UcavEnvironment(self.load_scenario())


class MetricsConfig(BaseModel):
    """
    Периодичность выгрузки.

    Attributes:
        map_every (int): Период (в эпизодах) снимков карты потерь
            предиктора и траекторий UCAV.
        checkpoint_every (int | None): Период промежуточных чекпоинтов.
        log_every (int): Период INFO-сообщений о прогрессе.
        coverage_episodes (int | None): Окно первых эпизодов для
            покрытия четвертей. ``None``: все эпизоды.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    map_every: int = Field(default=100, gt=0)
    checkpoint_every: int | None = Field(default=None, gt=0)
    log_every: int = Field(default=100, gt=0)
    coverage_episodes: int | None = Field(default=None, gt=0)


class ExperimentConfig(BaseModel):
    """
    Полное описание эксперимента.

    Attributes:
        name (str): Имя эксперимента (каталог внутри ``output_dir``).
        episodes (int): Эпизодов на каждый seed.
        seeds (tuple[int, ...]): Список seed.
        output_dir (Path): Каталог результатов.
        workers (int): Число процессов для параллельных seed.
        environment (EnvironmentConfig): Среда.
        agent (AgentConfig): Агент.
        metrics (MetricsConfig): Периодичность выгрузки.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = "experiment"
    episodes: int = Field(default=1000, gt=0)
    seeds: tuple[int, ...] = Field(default=(0,), min_length=1)
    output_dir: Path = Path("runs")
    workers: int = Field(default=1, gt=0)
    environment: EnvironmentConfig = EnvironmentConfig()
    agent: AgentConfig = AgentConfig()
    metrics: MetricsConfig = MetricsConfig()

    @model_validator(mode="after")
    def _check_seeds(self) -> ExperimentConfig:
        if len(set(self.seeds)) != len(self.seeds):
            msg = "Список seeds содержит повторы"
            raise ValueError(msg)
        if any(seed < 0 for seed in self.seeds):
            msg = "seed должен быть неотрицательным"
            raise ValueError(msg)
        return self

    @property
    def run_dir(self) -> Path:
        return self.output_dir / self.name

    def with_overrides(
        self,
        *,
        seed: int | None = None,
        episodes: int | None = None,
        output_dir: str | Path | None = None,
        variant: AgentVariant | str | None = None,
    ) -> ExperimentConfig:
        """
        Копия с переопределениями командной строки.

        ``output_dir`` берётся из аргумента, иначе из переменной
        окружения ``AIELAB_OUTPUT_DIR``, иначе из конфигурации.
        Переопределённый вариант добавляется к имени эксперимента:
        ``grid-20`` с ``variant="asil"`` пишется в ``grid-20-asil``.
        """

        data = self.model_dump()
        if seed is not None:
            data["seeds"] = (seed,)
        if episodes is not None:
            data["episodes"] = episodes
        env_dir = os.environ.get(OUTPUT_DIR_ENV)
        if output_dir is not None:
            data["output_dir"] = Path(output_dir)
        elif env_dir:
            data["output_dir"] = Path(env_dir)
        if variant is not None:
            data["agent"]["variant"] = variant
        config = parse_config(data)
        if variant is not None:
            config = config.model_copy(
                update={"name": f"{self.name}-{config.agent.variant}"}
            )
        return config


def parse_config(data: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Некорректная конфигурация: {e}") from e


def preset_names() -> list[str]:
    return sorted(
        entry.name.removesuffix(".toml")
        for entry in resources.files(PRESET_PACKAGE).iterdir()
        if entry.name.endswith(".toml")
    )


def read_config_text(ref: str | Path) -> str:
    path = Path(ref)
    if path.suffix == ".toml" or path.exists():
        return path.read_text(encoding="utf-8")
    resource = resources.files(PRESET_PACKAGE) / f"{ref}.toml"
    return resource.read_text(encoding="utf-8")


def load_config(ref: str | Path) -> ExperimentConfig:
    """
    Загружает конфигурацию из TOML-файла или встроенный пресет
    (``grid-20``, ``grid-noreward-20``, ``ucav-small`` и другие).

    Raises:
        ConfigError: Файл не найден, содержит ошибку TOML,
            неизвестные ключи или значения вне допустимых диапазонов.
    """

    try:
        data = tomllib.loads(read_config_text(ref))
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise ConfigError(
            f"Не удалось прочитать конфигурацию {ref!r}: {e}"
        ) from e

    config = parse_config(data)
    if config.environment.kind == "ucav":
        # сценарий проверяется при загрузке, а не в середине прогона
        config.environment.load_scenario()
    logger_harness.debug("Загружена конфигурация %s", config.name)
    return config
