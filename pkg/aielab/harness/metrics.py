from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ..agents.rnd import rnd_intrinsic_batch
from ..enums.terminal_cause import TerminalCause
from ..exceptions.usage import UsageError

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import ArrayLike, NDArray

    from ..agents.agent import StepEvent
    from ..agents.rnd import RndPair
    from ..envs.grid import Cell, GridWorld


@dataclass(slots=True, frozen=True)
class ExplorationScore:
    """
    Оценка исследования сетки по покрытию четвертей.

    Attributes:
        coverages: Доля посещённых клеток каждой четверти.
        literal: ``mean(EQ) * σ(EQ) * 100``.
        uniformity: ``mean(EQ) * (1 - σ(EQ)) * 100``.
        mean_coverage: ``mean(EQ)``.
    """

    coverages: tuple[float, float, float, float]
    literal: float
    uniformity: float
    mean_coverage: float


def score_from_coverages(coverages: Sequence[float]) -> ExplorationScore:
    eq = np.asarray(coverages, dtype=np.float64)
    if eq.shape != (4,):
        raise UsageError(
            f"Ожидалось 4 значения покрытия, получено {eq.size}"
        )
    mean = float(eq.mean())
    sigma = float(eq.std())
    return ExplorationScore(
        coverages=tuple(float(c) for c in eq),  # type: ignore[arg-type]
        literal=mean * sigma * 100.0,
        uniformity=mean * (1.0 - sigma) * 100.0,
        mean_coverage=mean,
    )


def quadrant_coverages(
    visit_counts: ArrayLike, start: Cell
) -> tuple[float, float, float, float]:
    """
    Покрытие четвертей, разделённых по стартовой клетке.

    Четверти (против часовой стрелки): ``x ≥ sx, y ≥ sy``;
    ``x < sx, y ≥ sy``; ``x < sx, y < sy``; ``x ≥ sx, y < sy``.
    Пустая четверть (старт на краю) имеет покрытие 0.
    """

    counts = np.asarray(visit_counts)
    if counts.ndim != 2 or counts.size == 0:
        raise UsageError("Счётчики посещений должны быть непустой матрицей")
    sx, sy = start
    visited = counts > 0
    blocks = (
        visited[sy:, sx:],
        visited[sy:, :sx],
        visited[:sy, :sx],
        visited[:sy, sx:],
    )
    return tuple(  # type: ignore[return-value]
        float(block.mean()) if block.size else 0.0 for block in blocks
    )


def exploration_score(
    visit_counts: ArrayLike, start: Cell
) -> ExplorationScore:
    """
    Оценка исследования по матрице посещений ``counts[y, x]``.

    Raises:
        UsageError: Пустая матрица посещений.
    """

    return score_from_coverages(quadrant_coverages(visit_counts, start))


def predictor_loss_map(
    pair: RndPair, env: GridWorld
) -> NDArray[np.float64]:
    """Ошибка предиктора RND в каждой клетке, матрица ``[y, x]``."""
    width, height = env.config.width, env.config.height
    features = np.stack(
        [env.feature_of((x, y)) for y in range(height) for x in range(width)]
    )
    return rnd_intrinsic_batch(pair, features).reshape(height, width)


def shotdown_curve(causes: Sequence[TerminalCause]) -> NDArray[np.float64]:
    """Накопленная доля эпизодов, завершившихся поражением ракетой."""
    if not causes:
        return np.zeros(0)
    shot = np.array(
        [cause == TerminalCause.SHOT_DOWN for cause in causes],
        dtype=np.float64,
    )
    return np.cumsum(shot) / np.arange(1, len(shot) + 1)


class VisitCounter:
    """
    Наблюдатель шагов: считает посещения клеток сетки.

    Сумма ``counts`` равна сумме длин эпизодов. При заданном
    ``window`` посещения первых ``window`` эпизодов дополнительно
    копятся в ``window_counts``.
    """

    __slots__ = ("counts", "window", "window_counts")

    def __init__(
        self, width: int, height: int, window: int | None = None
    ) -> None:
        self.counts = np.zeros((height, width), dtype=np.int64)
        self.window = window
        self.window_counts = (
            None if window is None else np.zeros_like(self.counts)
        )

    def __call__(self, event: StepEvent) -> None:
        x, y = (int(round(c)) for c in event.position[:2])
        self.counts[y, x] += 1
        if (
            self.window is not None
            and self.window_counts is not None
            and event.episode <= self.window
        ):
            self.window_counts[y, x] += 1

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(slots=True, frozen=True)
class LearningCurve:
    """
    Средняя по seed кривая возврата и кривая худшего seed.

    Худший seed выбирается по среднему возврату за все эпизоды.
    Для одного seed полосы нет: ``worst`` равен ``None``.
    """

    mean: NDArray[np.float64]
    worst: NDArray[np.float64] | None
    worst_index: int | None

    @property
    def episodes(self) -> NDArray[np.int64]:
        return np.arange(1, self.mean.size + 1)


def learning_curve(returns: Sequence[ArrayLike]) -> LearningCurve:
    """
    Кривая обучения по возвратам нескольких seed.

    Ряды разной длины (прерванные прогоны) обрезаются до кратчайшего.

    Raises:
        UsageError: Нет ни одного ряда или ряды пусты.
    """

    series = [np.asarray(r, dtype=np.float64) for r in returns]
    length = min((s.size for s in series), default=0)
    if length == 0:
        raise UsageError("Нет данных для кривой обучения")
    stacked = np.stack([s[:length] for s in series])
    if len(series) == 1:
        return LearningCurve(mean=stacked[0], worst=None, worst_index=None)
    worst_index = int(np.argmin(stacked.mean(axis=1)))
    return LearningCurve(
        mean=stacked.mean(axis=0),
        worst=stacked[worst_index],
        worst_index=worst_index,
    )
