from __future__ import annotations

from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ...exceptions.numeric import SimulationError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    Array = NDArray[np.float64]

KM = 1000.0


class MissileParams(BaseModel):
    """
    Параметры зенитной ракеты.

    Attributes:
        speed (float): Постоянная скорость, м/с.
        nav_gain (float): Навигационная постоянная N.
        max_accel (float): Предел поперечного ускорения, м/с².
        lifetime (float): Время полёта до самоликвидации, с.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    speed: float = Field(default=680.0, gt=0)
    nav_gain: float = Field(default=3.0, gt=0)
    max_accel: float = Field(default=400.0, gt=0)
    lifetime: float = Field(default=40.0, gt=0)


@dataclass(slots=True, frozen=True, eq=False)
class Missile:
    """
    Ракета с пропорциональным наведением.

    Attributes:
        position (ndarray): Позиция, км.
        velocity (ndarray): Скорость, м/с.
        nav_gain (float): Навигационная постоянная.
        active (bool): Ракета в полёте.
        hit (bool): Зафиксировано попадание (вырожденная дальность).
        age (float): Время полёта, с.
        site (int): Индекс пусковой установки.
    """

    position: Array
    velocity: Array
    nav_gain: float = 3.0
    active: bool = True
    hit: bool = False
    age: float = 0.0
    site: int = -1

    @classmethod
    def launch(
        cls,
        origin: ArrayLike,
        target: ArrayLike,
        params: MissileParams,
        site: int = -1,
    ) -> Missile:
        """Пуск из ``origin`` со скоростью, направленной на ``target``."""
        start = np.asarray(origin, dtype=np.float64)
        line = np.asarray(target, dtype=np.float64) - start
        distance = float(np.linalg.norm(line))
        direction = (
            line / distance if distance > 0.0 else np.array([0.0, 0.0, 1.0])
        )
        return cls(
            position=start,
            velocity=direction * params.speed,
            nav_gain=params.nav_gain,
            site=site,
        )

    @property
    def speed(self) -> float:
        return float(np.linalg.norm(self.velocity))

    def distance_to(self, point: ArrayLike) -> float:
        """Расстояние до точки, км."""
        return float(
            np.linalg.norm(np.asarray(point, dtype=np.float64) - self.position)
        )


def pn_acceleration(
    relative_position: Array,
    relative_velocity: Array,
    missile_velocity: Array,
    nav_gain: float,
) -> Array:
    """
    Истинная пропорциональная навигация:
    ``a = N · (Ω × v_m)``, ``Ω = (r × v_rel) / |r|²``.

    Ускорение перпендикулярно скорости ракеты.

    Args:
        relative_position: Вектор ракета → цель, м.
        relative_velocity: ``v_цели − v_ракеты``, м/с.
        missile_velocity: Скорость ракеты, м/с.
        nav_gain: Навигационная постоянная N.
    """

    range_sq = float(np.dot(relative_position, relative_position))
    omega = np.cross(relative_position, relative_velocity) / range_sq
    return nav_gain * np.cross(omega, missile_velocity)


def missile_pn_step(
    missile: Missile,
    target_position: ArrayLike,
    target_velocity: ArrayLike,
    params: MissileParams,
    dt: float,
) -> Missile:
    """
    Один шаг наведения и интегрирования ракеты.

    Модуль скорости сохраняется, поперечное ускорение ограничено
    ``max_accel``. Нулевая дальность до цели считается попаданием.

    Args:
        missile: Активная ракета.
        target_position: Позиция цели, км.
        target_velocity: Скорость цели, м/с.
        params: Параметры ракеты.
        dt: Шаг, с.

    Returns:
        Missile: Новое состояние ракеты.
    """

    if not missile.active:
        return missile

    r = (np.asarray(target_position, dtype=np.float64) - missile.position) * KM
    if not np.any(r):
        return replace(missile, active=False, hit=True)

    v_rel = np.asarray(target_velocity, dtype=np.float64) - missile.velocity
    accel = pn_acceleration(r, v_rel, missile.velocity, missile.nav_gain)
    magnitude = float(np.linalg.norm(accel))
    if magnitude > params.max_accel:
        accel *= params.max_accel / magnitude

    speed = missile.speed
    velocity = missile.velocity + accel * dt
    velocity *= speed / float(np.linalg.norm(velocity))
    position = missile.position + velocity * dt / KM

    if not (np.all(np.isfinite(position)) and np.all(np.isfinite(velocity))):
        raise SimulationError(variable="missile", value=float("nan"))

    age = missile.age + dt
    return replace(
        missile,
        position=position,
        velocity=velocity,
        age=age,
        active=age < params.lifetime,
    )
