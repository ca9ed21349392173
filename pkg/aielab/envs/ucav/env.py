from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict

from ...enums.terminal_cause import TerminalCause
from ...exceptions.usage import EpisodeFinished
from ...loggers import logger_env
from ..base import BaseEnvironment, StepResult
from .actions import N_ACTIONS, apply_action
from .dynamics import UcavState, integrate_dynamics
from .missile import Missile, missile_pn_step
from .observation import ObservationBuilder, coordinate_feature
from .scenario import FEATURE_SIZE, Scenario

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from numpy.typing import NDArray


class TrajectoryRecord(BaseModel):
    """Строка JSONL-экспорта траектории (одна на шаг решения)."""

    model_config = ConfigDict(extra="forbid")

    step: int
    action: int | None
    x: float
    y: float
    z: float
    v: float
    psi: float
    gamma: float
    thrust: float
    load: float
    bank: float
    missiles: list[tuple[float, float, float]]
    reward: float
    cause: TerminalCause = TerminalCause.NONE


class UcavEnvironment(BaseEnvironment):
    """
    Миссия UCAV: долететь до точки назначения через сеть ПВО.

    Одно решение агента удерживает органы управления на
    ``decision_substeps`` шагов интегрирования. Ракеты, пуски
    и проверка поражения обрабатываются на каждом шаге интегрирования.
    """

    def __init__(self, scenario: Scenario | None = None) -> None:
        self.scenario = scenario or Scenario()
        self._builder = ObservationBuilder(self.scenario)
        self._state = self.scenario.start_state()
        self._missiles: list[Missile] = []
        self._last_launch: list[float | None] = [None] * len(
            self.scenario.sites
        )
        self._time = 0.0
        self._steps = 0
        self._done = False
        self.launched = 0
        self.trajectory: list[TrajectoryRecord] = []
        self.action_log: list[int] = []

    @property
    def n_actions(self) -> int:
        return N_ACTIONS

    @property
    def observation_size(self) -> int:
        return self._builder.size

    @property
    def feature_size(self) -> int:
        return FEATURE_SIZE

    @property
    def state(self) -> UcavState:
        return self._state

    @property
    def missiles(self) -> list[Missile]:
        return list(self._missiles)

    @property
    def position(self) -> tuple[float, ...]:
        return self._state.position

    @property
    def done(self) -> bool:
        return self._done

    @property
    def steps(self) -> int:
        return self._steps

    def reset(self, rng: np.random.Generator | None = None) -> NDArray:
        self._state = self.scenario.start_state()
        self._missiles = []
        self._last_launch = [None] * len(self.scenario.sites)
        self._time = 0.0
        self._steps = 0
        self._done = False
        self.launched = 0
        self._builder.reset(self._state)
        self.trajectory = [self._record(None, 0.0, TerminalCause.NONE)]
        self.action_log = []
        return self._builder.build(self._missiles)

    def add_missile(self, missile: Missile) -> None:
        """Добавляет ракету вручную (сценарные проверки)."""
        self._missiles.append(missile)

    def _record(
        self, action: int | None, reward: float, cause: TerminalCause
    ) -> TrajectoryRecord:
        s = self._state
        return TrajectoryRecord(
            step=self._steps,
            action=action,
            x=s.x,
            y=s.y,
            z=s.z,
            v=s.v,
            psi=s.psi,
            gamma=s.gamma,
            thrust=s.thrust,
            load=s.load,
            bank=s.bank,
            missiles=[
                (float(p[0]), float(p[1]), float(p[2]))
                for p in (m.position for m in self._missiles if m.active)
            ],
            reward=reward,
            cause=cause,
        )

    def _launch_missiles(self) -> None:
        state = self._state
        if state.z < self.scenario.min_detect_altitude:
            return
        busy = {m.site for m in self._missiles if m.active}
        for index, site in enumerate(self.scenario.sites):
            if index in busy:
                continue
            last = self._last_launch[index]
            if last is not None and self._time - last < site.cooldown:
                continue
            if site.horizontal_distance(state.x, state.y) > (
                site.engagement_radius
            ):
                continue
            self._missiles.append(
                Missile.launch(
                    (site.x, site.y, site.z),
                    state.position,
                    self.scenario.missile,
                    site=index,
                )
            )
            self._last_launch[index] = self._time
            self.launched += 1
            logger_env.debug(
                "Пуск ракеты с позиции %d на t=%.1f с", index, self._time
            )

    def _advance_missiles(self, dt: float) -> bool:
        """Продвигает ракеты; возвращает True при поражении UCAV."""
        target = np.array(self._state.position)
        target_velocity = np.array(self._state.velocity_vector())
        advanced = []
        shot = False
        for missile in self._missiles:
            moved = missile_pn_step(
                missile, target, target_velocity, self.scenario.missile, dt
            )
            if moved.hit or (
                moved.distance_to(target) < self.scenario.kill_radius
            ):
                shot = True
            if moved.active:
                advanced.append(moved)
        self._missiles = advanced
        return shot

    def _distance_to_target(self) -> float:
        t = self.scenario.target
        return math.dist(self._state.position, (t.x, t.y, t.z))

    def step(self, action: int) -> StepResult:
        if self._done:
            raise EpisodeFinished("Эпизод завершён, вызовите reset()")

        scenario = self.scenario
        params = scenario.ucav
        self._state = apply_action(self._state, action, params)
        cause = TerminalCause.NONE
        speed_limited = False

        for _ in range(scenario.decision_substeps):
            self._state = integrate_dynamics(self._state, params)
            self._time += params.dt
            if self._state.v >= params.v_max:
                speed_limited = True
            if not scenario.bounds.contains(*self._state.position):
                cause = TerminalCause.OUT_OF_BOUNDS
                break
            if self._distance_to_target() <= scenario.target.arrival_radius:
                cause = TerminalCause.ARRIVED
                break
            if self._advance_missiles(params.dt):
                cause = TerminalCause.SHOT_DOWN
                break
            self._launch_missiles()

        self._steps += 1
        rewards = scenario.rewards
        reward = {
            TerminalCause.ARRIVED: rewards.arrival,
            TerminalCause.SHOT_DOWN: rewards.shot_down,
            TerminalCause.OUT_OF_BOUNDS: rewards.out_of_bounds,
        }.get(cause, 0.0)
        if speed_limited:
            reward += rewards.speed_penalty

        if cause is TerminalCause.NONE and self._steps >= scenario.time_limit:
            cause = TerminalCause.TIMEOUT
        self._done = cause is not TerminalCause.NONE

        self._builder.push(self._state)
        self.action_log.append(int(action))
        self.trajectory.append(self._record(int(action), reward, cause))

        if self._done:
            logger_env.debug(
                "Эпизод UCAV завершён: %s за %d шагов, пусков %d",
                cause,
                self._steps,
                self.launched,
            )

        return StepResult(
            observation=self._builder.build(self._missiles),
            reward=reward,
            done=self._done,
            cause=cause,
            position=self.position,
            info={
                "speed_limited": speed_limited,
                "missiles": len(self._missiles),
                "launched": self.launched,
            },
        )

    def coordinate_feature(self) -> NDArray:
        return coordinate_feature(self._state, self.scenario)


def replay_actions(
    scenario: Scenario, actions: Iterable[int]
) -> list[TrajectoryRecord]:
    """
    Воспроизводит эпизод по журналу действий.

    Симуляция детерминирована, поэтому траектория совпадает
    с исходной побитово.
    """

    env = UcavEnvironment(scenario)
    env.reset()
    for action in actions:
        if env.done:
            break
        env.step(action)
    return env.trajectory


def trajectory_to_jsonl(records: Sequence[TrajectoryRecord]) -> str:
    return "".join(record.model_dump_json() + "\n" for record in records)
