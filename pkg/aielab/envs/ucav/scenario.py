from __future__ import annotations

import math
from importlib import resources
from pathlib import Path

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    model_validator,
)

from ..._compat import tomllib
from ...exceptions.config import ConfigError
from ...loggers import logger_env
from .dynamics import UcavParams, UcavState
from .missile import MissileParams

FEATURE_SIZE = 33
SCENARIO_PACKAGE = "aielab.presets.scenarios"


class _Frozen(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class Bounds(_Frozen):
    """Границы поля боя, км."""

    x_min: float = 0.0
    x_max: float = 20.0
    y_min: float = 0.0
    y_max: float = 20.0
    z_min: float = 0.0
    z_max: float = 6.0

    @model_validator(mode="after")
    def _check(self) -> Bounds:
        if not (
            self.x_max > self.x_min
            and self.y_max > self.y_min
            and self.z_max > self.z_min
        ):
            msg = "Верхние границы поля должны быть больше нижних"
            raise ValueError(msg)
        return self

    def contains(self, x: float, y: float, z: float) -> bool:
        return (
            self.x_min <= x <= self.x_max
            and self.y_min <= y <= self.y_max
            and self.z_min <= z <= self.z_max
        )

    def clamp(self, x: float, y: float, z: float) -> tuple[float, ...]:
        return (
            min(max(x, self.x_min), self.x_max),
            min(max(y, self.y_min), self.y_max),
            min(max(z, self.z_min), self.z_max),
        )

    @property
    def diagonal(self) -> float:
        return math.dist(
            (self.x_min, self.y_min, self.z_min),
            (self.x_max, self.y_max, self.z_max),
        )


class StartPoint(_Frozen):
    x: float = 2.0
    y: float = 2.0
    z: float = 2.0
    v: float = Field(default=250.0, gt=0)
    psi_deg: float = 45.0
    gamma_deg: float = 0.0


class TargetPoint(_Frozen):
    x: float = 18.0
    y: float = 18.0
    z: float = 1.0
    arrival_radius: float = Field(default=1.0, gt=0)


class SamSite(_Frozen):
    """
    Пусковая установка ЗРК.

    Attributes:
        x, y, z (float): Позиция, км.
        engagement_radius (float): Горизонтальный радиус поражения, км.
        cooldown (float): Пауза между пусками, с.
    """

    x: float
    y: float
    z: float = 0.0
    engagement_radius: float = Field(default=5.0, gt=0)
    cooldown: float = Field(default=10.0, ge=0)

    def horizontal_distance(self, x: float, y: float) -> float:
        return math.hypot(x - self.x, y - self.y)


class RewardConfig(_Frozen):
    arrival: float = 30.0
    shot_down: float = -30.0
    out_of_bounds: float = -30.0
    speed_penalty: float = -0.01


class Scenario(_Frozen):
    """
    Сценарий миссии UCAV.

    Attributes:
        name (str): Имя сценария.
        bounds (Bounds): Поле боя.
        start (StartPoint): Начальное состояние.
        target (TargetPoint): Точка назначения и радиус прибытия.
        sites (list[SamSite]): Сеть ПВО.
        time_limit (int): Лимит шагов решения.
        kill_radius (float): Дистанция поражения ракетой, км.
        decision_substeps (int): Число шагов интегрирования на одно
            решение агента.
        min_detect_altitude (float): Высота, ниже которой ЗРК
            не обнаруживает цель, км.
        feature_bins (tuple[int, int, int]): Узлы координатного
            признака по осям x, y, z, в сумме 33.
    """

    name: str = "custom"
    bounds: Bounds = Bounds()
    start: StartPoint = StartPoint()
    target: TargetPoint = TargetPoint()
    sites: tuple[SamSite, ...] = ()
    time_limit: int = Field(default=300, gt=0)
    kill_radius: float = Field(default=0.5, gt=0)
    decision_substeps: int = Field(default=10, gt=0)
    min_detect_altitude: float = Field(default=0.3, ge=0)
    feature_bins: tuple[int, int, int] = (13, 13, 7)
    ucav: UcavParams = UcavParams()
    missile: MissileParams = MissileParams()
    rewards: RewardConfig = RewardConfig()

    @model_validator(mode="after")
    def _check(self) -> Scenario:
        t, s = self.target, self.start
        if not self.bounds.contains(t.x, t.y, t.z):
            msg = "Точка назначения вне поля боя"
            raise ValueError(msg)
        if not self.bounds.contains(s.x, s.y, s.z):
            msg = "Стартовая точка вне поля боя"
            raise ValueError(msg)
        bins = self.feature_bins
        if sum(bins) != FEATURE_SIZE or min(bins) < 2:
            msg = (
                f"feature_bins={self.feature_bins}: нужно не меньше 2 узлов "
                f"на ось и {FEATURE_SIZE} в сумме"
            )
            raise ValueError(msg)
        return self

    def start_state(self) -> UcavState:
        return UcavState(
            x=self.start.x,
            y=self.start.y,
            z=self.start.z,
            v=min(max(self.start.v, self.ucav.v_min), self.ucav.v_max),
            psi=math.radians(self.start.psi_deg),
            gamma=math.radians(self.start.gamma_deg),
            thrust=self.ucav.cruise_thrust,
            load=self.ucav.cruise_load,
            bank=math.radians(self.ucav.cruise_bank_deg),
        )


def parse_scenario(data: dict, name: str | None = None) -> Scenario:
    try:
        scenario = Scenario.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Некорректный сценарий: {e}") from e
    if name and scenario.name == "custom":
        scenario = scenario.model_copy(update={"name": name})
    return scenario


def load_scenario(ref: str | Path) -> Scenario:
    """
    Загружает сценарий из TOML-файла или встроенный по имени
    (``ucav-small``, ``ucav-full``).

    Raises:
        ConfigError: Файл не найден, не читается или не проходит
            валидацию.
    """

    path = Path(ref)
    try:
        if path.suffix == ".toml" or path.exists():
            raw = path.read_text(encoding="utf-8")
            name = path.stem
        else:
            resource = resources.files(SCENARIO_PACKAGE) / f"{ref}.toml"
            raw = resource.read_text(encoding="utf-8")
            name = str(ref)
        data = tomllib.loads(raw)
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise ConfigError(f"Не удалось прочитать сценарий {ref!r}: {e}") from e

    logger_env.debug("Загружен сценарий %s", name)
    return parse_scenario(data, name=name)
