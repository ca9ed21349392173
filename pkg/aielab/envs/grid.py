from __future__ import annotations

from typing import TYPE_CHECKING

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..encoding.ecv import EcvAxis, EcvSpec, ecv_encode_point
from ..enums.grid import GridAction, GridMode
from ..enums.terminal_cause import TerminalCause
from ..exceptions.usage import EpisodeFinished, InvalidAction
from ..loggers import logger_env
from .base import BaseEnvironment, StepResult

if TYPE_CHECKING:
    import numpy as np
    from numpy.typing import NDArray

Cell = tuple[int, int]


class GridConfig(BaseModel):
    """
    Параметры двумерной сетки.

    Attributes:
        width (int): Ширина в клетках.
        height (int): Высота в клетках.
        start (tuple[int, int] | None): Стартовая клетка,
            по умолчанию центр.
        goal (tuple[int, int] | None): Цель, по умолчанию дальний угол
            ``(width - 3, height - 3)``. В режиме NO_REWARD игнорируется.
        mode (GridMode): Режим наград.
        max_steps (int): Лимит шагов эпизода.
        goal_reward (float): Награда за достижение цели.
        boundary_reward (float): Награда за выход за границу.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    width: int = Field(default=40, ge=2)
    height: int = Field(default=40, ge=2)
    start: tuple[int, int] | None = None
    goal: tuple[int, int] | None = None
    mode: GridMode = GridMode.SPARSE
    max_steps: int = Field(default=200, gt=0)
    goal_reward: float = 30.0
    boundary_reward: float = -30.0

    @model_validator(mode="after")
    def _check_cells(self) -> GridConfig:
        for label, cell in (("start", self.start), ("goal", self.goal)):
            if cell is not None and not self.contains(cell):
                msg = f"{label}={cell} вне сетки {self.width}x{self.height}"
                raise ValueError(msg)
        if self.start_cell == self.goal_cell:
            msg = "Старт совпадает с целью"
            raise ValueError(msg)
        return self

    def contains(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    @property
    def start_cell(self) -> Cell:
        if self.start is not None:
            return self.start
        return self.width // 2, self.height // 2

    @property
    def goal_cell(self) -> Cell | None:
        if self.mode is GridMode.NO_REWARD:
            return None
        if self.goal is not None:
            return self.goal
        return max(self.width - 3, 0), max(self.height - 3, 0)

    def ecv_spec(self) -> EcvSpec:
        return EcvSpec(
            axes=(
                EcvAxis(
                    name="x",
                    minimum=0,
                    maximum=self.width - 1,
                    bins=self.width,
                ),
                EcvAxis(
                    name="y",
                    minimum=0,
                    maximum=self.height - 1,
                    bins=self.height,
                ),
            )
        )


class GridWorld(BaseEnvironment):
    """
    Сетка для экспериментов с трудным исследованием.

    Переходы детерминированы: (позиция, действие) однозначно задают
    следующую позицию. При попытке выйти за границу агент остаётся
    в крайней клетке, получает ``boundary_reward`` и эпизод
    завершается.
    """

    def __init__(self, config: GridConfig | None = None) -> None:
        self.config = config or GridConfig()
        self._spec = self.config.ecv_spec()
        self._cell: Cell = self.config.start_cell
        self._steps = 0
        self._done = False

    @property
    def n_actions(self) -> int:
        return len(GridAction)

    @property
    def observation_size(self) -> int:
        return self._spec.size

    @property
    def feature_size(self) -> int:
        return self._spec.size

    @property
    def position(self) -> tuple[float, ...]:
        return float(self._cell[0]), float(self._cell[1])

    @property
    def cell(self) -> Cell:
        return self._cell

    @property
    def steps(self) -> int:
        return self._steps

    @property
    def done(self) -> bool:
        return self._done

    def encode_cell(self, cell: Cell) -> NDArray[np.float64]:
        return ecv_encode_point(cell, self._spec).values

    def reset(self, rng: np.random.Generator | None = None) -> NDArray:
        self._cell = self.config.start_cell
        self._steps = 0
        self._done = False
        return self.encode_cell(self._cell)

    def step(self, action: int) -> StepResult:
        if self._done:
            raise EpisodeFinished("Эпизод завершён, вызовите reset()")
        try:
            move = GridAction(int(action))
        except ValueError as e:
            msg = f"Недопустимое действие сетки: {action}"
            raise InvalidAction(msg) from e

        dx, dy = move.delta
        target = (self._cell[0] + dx, self._cell[1] + dy)
        self._steps += 1

        reward = 0.0
        cause = TerminalCause.NONE
        if not self.config.contains(target):
            reward = self.config.boundary_reward
            cause = TerminalCause.OUT_OF_BOUNDS
        else:
            self._cell = target
            if target == self.config.goal_cell:
                reward = self.config.goal_reward
                cause = TerminalCause.ARRIVED

        limit = self.config.max_steps
        if cause is TerminalCause.NONE and self._steps >= limit:
            cause = TerminalCause.TIMEOUT

        self._done = cause is not TerminalCause.NONE
        if self._done:
            logger_env.debug(
                "Эпизод сетки завершён: %s за %d шагов", cause, self._steps
            )

        return StepResult(
            observation=self.encode_cell(self._cell),
            reward=reward,
            done=self._done,
            cause=cause,
            position=self.position,
        )

    def coordinate_feature(self) -> NDArray:
        return self.encode_cell(self._cell)

    def feature_of(self, cell: Cell) -> NDArray[np.float64]:
        """Признак произвольной клетки (для карты потерь предиктора)."""
        return self.encode_cell(cell)
