from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..enums.training import PenaltyThreshold
from ..exceptions.config import ConfigError


@dataclass(slots=True, frozen=True)
class PenaltyResult:
    value: float
    penalized: bool


class PenaltyTracker:
    """
    Внутренний штраф за часто посещаемые состояния.

    Хранит последние ``window`` внутренних наград. Когда история
    заполнена хотя бы наполовину, награда ниже порога заменяется на
    ``λ·log(max(i_t, floor))``. Порог это квантиль ``alpha`` истории
    (режим QUANTILE) или ``static_threshold`` (режим STATIC).

    Attributes:
        window (int): Длина истории N.
        alpha (float): Квантиль порога.
        weight (float): Вес штрафа λ.
        floor (float): Нижняя граница под логарифмом.
        mode (PenaltyThreshold): Режим порога.
        static_threshold (float): Порог для режима STATIC.
    """

    def __init__(
        self,
        window: int = 10_000,
        alpha: float = 0.1,
        weight: float = 0.1,
        floor: float = 1e-8,
        mode: PenaltyThreshold = PenaltyThreshold.QUANTILE,
        static_threshold: float = 0.0,
    ) -> None:
        if window <= 0 or not 0.0 < alpha < 1.0 or weight <= 0.0:
            raise ConfigError(
                "PenaltyTracker: нужны window > 0, 0 < alpha < 1, weight > 0"
            )
        if floor <= 0.0:
            raise ConfigError("PenaltyTracker: floor должен быть > 0")
        self.window = window
        self.alpha = alpha
        self.weight = weight
        self.floor = floor
        self.mode = PenaltyThreshold(mode)
        self.static_threshold = static_threshold
        self.history = np.zeros(window)
        self.count = 0
        self.position = 0

    def __len__(self) -> int:
        return min(self.count, self.window)

    @property
    def warm(self) -> bool:
        return len(self) >= self.window / 2

    def threshold(self) -> float | None:
        """Текущий порог или None, если штраф не может сработать."""
        if self.mode is PenaltyThreshold.OFF or not self.warm:
            return None
        if self.mode is PenaltyThreshold.STATIC:
            return self.static_threshold
        return float(np.quantile(self.history[: len(self)], self.alpha))

    def push(self, value: float) -> None:
        self.history[self.position] = value
        self.position = (self.position + 1) % self.window
        self.count += 1

    def apply(self, value: float) -> PenaltyResult:
        """
        Возвращает сформированную награду; исходное ``value``
        добавляется в историю в любом случае.
        """

        threshold = self.threshold()
        self.push(value)
        if threshold is not None and value < threshold:
            return PenaltyResult(
                value=self.weight * math.log(max(value, self.floor)),
                penalized=True,
            )
        return PenaltyResult(value=value, penalized=False)


def apply_penalty(value: float, tracker: PenaltyTracker) -> float:
    return tracker.apply(value).value
