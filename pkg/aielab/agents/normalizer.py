from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(slots=True)
class RunningMeanStd:
    """Скользящие среднее и дисперсия (алгоритм Уэлфорда)."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    epsilon: float = 1e-8

    def update(self, value: float) -> None:
        self.count += 1
        delta = value - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (value - self.mean)

    @property
    def var(self) -> float:
        return self.m2 / self.count if self.count > 1 else 1.0

    @property
    def std(self) -> float:
        return math.sqrt(self.var + self.epsilon)

    def normalize(self, value: float) -> float:
        """Делит на текущее стандартное отклонение (без центрирования)."""
        return value / self.std
