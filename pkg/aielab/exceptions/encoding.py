from __future__ import annotations

from dataclasses import dataclass


@dataclass(slots=True)
class CoordinateOutOfRange(Exception):
    axis: str
    value: float
    minimum: float
    maximum: float

    def __str__(self) -> str:
        return (
            f"Значение {self.value!r} вне диапазона оси {self.axis!r} "
            f"[{self.minimum}, {self.maximum}]"
        )

    __repr__ = __str__


class EncodingFormatError(Exception):
    """Вектор не удовлетворяет инвариантам ECV."""


class CheckpointFormatError(Exception):
    """Файл сети или чекпоинта повреждён либо имеет чужую версию."""
