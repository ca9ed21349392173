from __future__ import annotations

import math
from dataclasses import astuple, dataclass, replace

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ...exceptions.numeric import SimulationError

KN = 1000.0
KM = 1000.0


class UcavParams(BaseModel):
    """
    Параметры точечной модели UCAV.

    Сила сопротивления ``D = drag_coeff * V²`` (Н), где
    ``drag_coeff = cruise_thrust * 1000 / v_cruise²``: тяга крейсерского
    режима удерживает ``v_cruise`` в горизонтальном полёте.

    Углы задаются в градусах, тяга в кН, перегрузка в g.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    mass: float = Field(default=12000.0, gt=0)
    g: float = Field(default=9.81, gt=0)
    v_cruise: float = Field(default=250.0, gt=0)
    v_min: float = Field(default=100.0, gt=0)
    v_max: float = Field(default=340.0, gt=0)
    dt: float = Field(default=0.1, gt=0, le=0.1)
    gamma_max_deg: float = Field(default=60.0, gt=0, lt=90)

    thrust_min: float = Field(default=0.0, ge=0)
    thrust_max: float = Field(default=120.0, gt=0)
    thrust_step: float = Field(default=10.0, gt=0)
    load_min: float = -2.0
    load_max: float = Field(default=7.0, gt=0)
    load_step: float = Field(default=0.5, gt=0)
    bank_max_deg: float = Field(default=80.0, gt=0, le=90)
    bank_step_deg: float = Field(default=10.0, gt=0)

    cruise_thrust: float = Field(default=50.0, gt=0)
    cruise_load: float = 1.0
    cruise_bank_deg: float = 0.0

    @model_validator(mode="after")
    def _check_bounds(self) -> UcavParams:
        if not self.v_min < self.v_cruise <= self.v_max:
            msg = "Требуется v_min < v_cruise <= v_max"
            raise ValueError(msg)
        if not self.thrust_min <= self.cruise_thrust <= self.thrust_max:
            msg = "cruise_thrust вне [thrust_min, thrust_max]"
            raise ValueError(msg)
        if not self.load_min <= self.cruise_load <= self.load_max:
            msg = "cruise_load вне [load_min, load_max]"
            raise ValueError(msg)
        if abs(self.cruise_bank_deg) > self.bank_max_deg:
            msg = "cruise_bank_deg вне [-bank_max_deg, bank_max_deg]"
            raise ValueError(msg)
        return self

    @property
    def drag_coeff(self) -> float:
        return self.cruise_thrust * KN / self.v_cruise**2

    @property
    def bank_max(self) -> float:
        return math.radians(self.bank_max_deg)

    @property
    def bank_step(self) -> float:
        return math.radians(self.bank_step_deg)

    @property
    def gamma_max(self) -> float:
        return math.radians(self.gamma_max_deg)

    def drag(self, v: float) -> float:
        return self.drag_coeff * v * v


@dataclass(slots=True, frozen=True)
class UcavState:
    """
    Кинематическое состояние и органы управления.

    Attributes:
        x, y, z (float): Позиция, км.
        v (float): Скорость, м/с.
        psi (float): Курс, рад.
        gamma (float): Угол наклона траектории, рад.
        thrust (float): Тяга, кН.
        load (float): Перегрузка n, g.
        bank (float): Угол крена φ, рад.
    """

    x: float
    y: float
    z: float
    v: float
    psi: float = 0.0
    gamma: float = 0.0
    thrust: float = 50.0
    load: float = 1.0
    bank: float = 0.0

    @property
    def position(self) -> tuple[float, float, float]:
        return self.x, self.y, self.z

    def velocity_vector(self) -> tuple[float, float, float]:
        """Вектор скорости, м/с."""
        horizontal = self.v * math.cos(self.gamma)
        return (
            horizontal * math.cos(self.psi),
            horizontal * math.sin(self.psi),
            self.v * math.sin(self.gamma),
        )

    def with_controls(
        self, thrust: float, load: float, bank: float
    ) -> UcavState:
        return replace(self, thrust=thrust, load=load, bank=bank)


_STATE_FIELDS = ("x", "y", "z", "v", "psi", "gamma", "thrust", "load", "bank")


def _wrap_angle(angle: float) -> float:
    return math.atan2(math.sin(angle), math.cos(angle))


def integrate_dynamics(
    state: UcavState,
    params: UcavParams,
    dt: float | None = None,
) -> UcavState:
    """
    Один явный шаг Эйлера точечной модели с тремя степенями свободы.

    ::

        ẋ = V cos γ cos ψ        V̇ = (T − D)/m − g sin γ
        ẏ = V cos γ sin ψ        ψ̇ = g n sin φ / (V cos γ)
        ż = V sin γ              γ̇ = (g / V)(n cos φ − cos γ)

    Скорость ограничивается ``[v_min, v_max]``, угол γ диапазоном
    ``±gamma_max``, курс приводится к ``(−π, π]``.

    Raises:
        SimulationError: Если какая-либо переменная стала нечисловой.
    """

    step = params.dt if dt is None else dt
    g = params.g
    v, psi, gamma = state.v, state.psi, state.gamma
    cos_gamma = math.cos(gamma)

    x_dot = v * cos_gamma * math.cos(psi) / KM
    y_dot = v * cos_gamma * math.sin(psi) / KM
    z_dot = v * math.sin(gamma) / KM
    v_dot = (state.thrust * KN - params.drag(v)) / params.mass - g * math.sin(
        gamma
    )
    psi_dot = g * state.load * math.sin(state.bank) / (v * cos_gamma)
    gamma_dot = (g / v) * (state.load * math.cos(state.bank) - cos_gamma)

    new_v = min(max(v + v_dot * step, params.v_min), params.v_max)
    new_gamma = min(
        max(gamma + gamma_dot * step, -params.gamma_max), params.gamma_max
    )

    result = replace(
        state,
        x=state.x + x_dot * step,
        y=state.y + y_dot * step,
        z=state.z + z_dot * step,
        v=new_v,
        psi=_wrap_angle(psi + psi_dot * step),
        gamma=new_gamma,
    )

    for name, value in zip(_STATE_FIELDS, astuple(result)):
        if not math.isfinite(value):
            raise SimulationError(variable=name, value=value)
    return result
