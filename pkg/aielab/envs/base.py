from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

from ..enums.terminal_cause import TerminalCause

if TYPE_CHECKING:
    import numpy as np
    from numpy.typing import NDArray


@dataclass(slots=True)
class StepResult:
    """
    Результат одного шага среды.

    Attributes:
        observation (ndarray): Наблюдение после шага.
        reward (float): Внешняя награда e_t.
        done (bool): Эпизод завершён.
        cause (TerminalCause): Причина завершения или NONE.
        position (tuple[float, ...]): Координаты агента после шага.
        info (dict): Дополнительные сведения среды.
    """

    observation: NDArray[np.float64]
    reward: float
    done: bool
    cause: TerminalCause = TerminalCause.NONE
    position: tuple[float, ...] = ()
    info: dict[str, Any] = field(default_factory=dict)


class BaseEnvironment(ABC):
    """
    Абстрактная среда с дискретными действиями.

    Экземпляр однопоточный и не разделяет состояние с другими.
    """

    @property
    @abstractmethod
    def n_actions(self) -> int:
        """Число дискретных действий."""

    @property
    @abstractmethod
    def observation_size(self) -> int:
        """Длина вектора наблюдения."""

    @property
    @abstractmethod
    def feature_size(self) -> int:
        """Длина координатного признака для RND."""

    @property
    @abstractmethod
    def position(self) -> tuple[float, ...]:
        """Текущие координаты агента."""

    @property
    @abstractmethod
    def done(self) -> bool:
        """Завершён ли текущий эпизод."""

    @abstractmethod
    def reset(self, rng: np.random.Generator | None = None) -> NDArray:
        """Начинает новый эпизод и возвращает первое наблюдение."""

    @abstractmethod
    def step(self, action: int) -> StepResult:
        """Выполняет действие."""

    @abstractmethod
    def coordinate_feature(self) -> NDArray:
        """Признак φ(s) текущей позиции."""
