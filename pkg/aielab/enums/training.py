from enum import auto, unique

from .._compat import StrEnum


@unique
class PredictorMode(StrEnum):
    """
    Источник данных для обучения предиктора RND.

    `ONLINE` использует признаки текущего эпизода,
    `REPLAY` равномерно сэмплирует буфер признаков.
    """

    ONLINE = auto()
    REPLAY = auto()


@unique
class PenaltyThreshold(StrEnum):
    """
    Порог срабатывания внутреннего штрафа.

    `QUANTILE` сравнивает с квантилем alpha последних N наград,
    `STATIC` с фиксированным порогом, `OFF` отключает штраф.
    """

    QUANTILE = auto()
    STATIC = auto()
    OFF = auto()


@unique
class PlotKind(StrEnum):
    """Виды графиков, которые строит harness."""

    LEARNING_CURVE = auto()
    HEATMAP = auto()
    LOSS_MAP = auto()
    SHOTDOWN = auto()
    TRAJECTORY_PROJECTION = auto()
