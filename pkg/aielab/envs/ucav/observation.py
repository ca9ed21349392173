"""Построение наблюдения UCAV.

Раскладка вектора::

    5 × позиция (ECV x, y, z)          5 · 33
    2 × (γ, ψ, φ) угловым кодированием  2 · 3 · 20
    V и n, нормированные в [0, 1]       2
    ракетный блок                       2 + 2 · 20

Ракетный блок: ``[нормированная дистанция, признак наличия]``,
затем горизонтальный и вертикальный пеленг на ближайшую ракету.
Без активной ракеты блок равен ``[1, 0, 0, ..., 0]``.
"""

from __future__ import annotations

import math
from collections import deque
from typing import TYPE_CHECKING

import numpy as np

from ...encoding.angle import ANGLE_BINS, angle_spec, encode_angle
from ...encoding.ecv import EcvAxis, EcvSpec, ecv_encode_point

if TYPE_CHECKING:
    from collections.abc import Iterable

    from numpy.typing import NDArray

    from .dynamics import UcavState
    from .missile import Missile
    from .scenario import Scenario

POSITION_HISTORY = 5
ANGLE_HISTORY = 2


def position_spec(scenario: Scenario) -> EcvSpec:
    """Сокращённая ECV по осям поля боя (13 + 13 + 7 узлов)."""
    b = scenario.bounds
    nx, ny, nz = scenario.feature_bins
    return EcvSpec(
        axes=(
            EcvAxis(name="x", minimum=b.x_min, maximum=b.x_max, bins=nx),
            EcvAxis(name="y", minimum=b.y_min, maximum=b.y_max, bins=ny),
            EcvAxis(name="z", minimum=b.z_min, maximum=b.z_max, bins=nz),
        )
    )


def coordinate_feature(state: UcavState, scenario: Scenario) -> NDArray:
    """Признак φ(s): координаты, приведённые к полю боя, длина 33."""
    point = scenario.bounds.clamp(state.x, state.y, state.z)
    return ecv_encode_point(point, position_spec(scenario)).values


def observation_size(scenario: Scenario) -> int:
    pos = position_spec(scenario).size
    angle = 2 * ANGLE_BINS
    return (
        POSITION_HISTORY * pos
        + ANGLE_HISTORY * 3 * angle
        + 2
        + (2 + 2 * angle)
    )


class ObservationBuilder:
    """
    Хранит короткую историю состояний и собирает вектор наблюдения.

    В начале эпизода история дополняется стартовым состоянием.
    """

    def __init__(self, scenario: Scenario) -> None:
        self.scenario = scenario
        self._position_spec = position_spec(scenario)
        self._angle_spec = angle_spec()
        self._positions: deque[NDArray] = deque(maxlen=POSITION_HISTORY)
        self._angles: deque[NDArray] = deque(maxlen=ANGLE_HISTORY)
        self._last: UcavState | None = None
        self.size = observation_size(scenario)

    def reset(self, state: UcavState) -> None:
        self._positions.clear()
        self._angles.clear()
        for _ in range(POSITION_HISTORY):
            self._positions.append(self._encode_position(state))
        for _ in range(ANGLE_HISTORY):
            self._angles.append(self._encode_angles(state))
        self._last = state

    def push(self, state: UcavState) -> None:
        self._positions.append(self._encode_position(state))
        self._angles.append(self._encode_angles(state))
        self._last = state

    def _encode_position(self, state: UcavState) -> NDArray:
        point = self.scenario.bounds.clamp(state.x, state.y, state.z)
        return ecv_encode_point(point, self._position_spec).values

    def _encode_angles(self, state: UcavState) -> NDArray:
        return np.concatenate(
            [
                encode_angle(angle, self._angle_spec).values
                for angle in (state.gamma, state.psi, state.bank)
            ]
        )

    def _scalars(self, state: UcavState) -> NDArray:
        p = self.scenario.ucav
        v = (state.v - p.v_min) / (p.v_max - p.v_min)
        n = (state.load - p.load_min) / (p.load_max - p.load_min)
        return np.array([v, n])

    def _missile_block(
        self, state: UcavState, missiles: Iterable[Missile]
    ) -> NDArray:
        angle_len = 2 * ANGLE_BINS
        active = [m for m in missiles if m.active]
        if not active:
            block = np.zeros(2 + 2 * angle_len)
            block[0] = 1.0
            return block

        own = np.array(state.position)
        nearest = min(active, key=lambda m: m.distance_to(own))
        delta = nearest.position - own
        distance = float(np.linalg.norm(delta))
        horizontal = math.atan2(delta[1], delta[0])
        vertical = math.atan2(delta[2], math.hypot(delta[0], delta[1]))
        scale = self.scenario.bounds.diagonal
        return np.concatenate(
            [
                [min(distance / scale, 1.0), 1.0],
                encode_angle(horizontal, self._angle_spec).values,
                encode_angle(vertical, self._angle_spec).values,
            ]
        )

    def build(self, missiles: Iterable[Missile] = ()) -> NDArray:
        if self._last is None:
            msg = "ObservationBuilder.reset() не вызван"
            raise RuntimeError(msg)
        return np.concatenate(
            [
                *self._positions,
                *self._angles,
                self._scalars(self._last),
                self._missile_block(self._last, missiles),
            ]
        )


def build_observation(
    history: Iterable[UcavState],
    missiles: Iterable[Missile],
    scenario: Scenario,
) -> NDArray:
    """
    Наблюдение по истории состояний (от старых к новым).

    Недостающие шаги в начале дополняются самым старым состоянием.
    """

    states = list(history)
    builder = ObservationBuilder(scenario)
    builder.reset(states[0])
    for state in states[1:]:
        builder.push(state)
    return builder.build(missiles)
