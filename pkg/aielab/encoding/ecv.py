from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..exceptions.encoding import CoordinateOutOfRange, EncodingFormatError

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import ArrayLike, NDArray

    Array = NDArray[np.float64]

MASS_TOLERANCE = 1e-9


class EcvAxis(BaseModel):
    """
    Ось ECV.

    Узлы оси расположены равномерно: узел ``k`` соответствует
    координате ``minimum + k * bin_width``, первый узел совпадает
    с ``minimum``, последний с ``maximum``.

    Attributes:
        name (str): Имя оси для сообщений об ошибках.
        minimum (float): Нижняя граница.
        maximum (float): Верхняя граница.
        bins (int): Число узлов (строк сегмента).
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = "axis"
    minimum: float
    maximum: float
    bins: int = Field(ge=2)

    @model_validator(mode="after")
    def _check_range(self) -> EcvAxis:
        if not self.maximum > self.minimum:
            msg = f"Ось {self.name!r}: maximum должен быть больше minimum"
            raise ValueError(msg)
        return self

    @classmethod
    def from_resolution(
        cls,
        minimum: float,
        maximum: float,
        unit: float = 1.0,
        reduction_factor: float = 1.0,
        name: str = "axis",
    ) -> EcvAxis:
        """
        Ось с шагом ``unit * reduction_factor``.

        Например, ``[0, 200]`` с ``reduction_factor=10`` даёт
        21 узел с шагом 10.
        """

        step = unit * reduction_factor
        bins = math.ceil((maximum - minimum) / step - 1e-12) + 1
        return cls(name=name, minimum=minimum, maximum=maximum, bins=bins)

    @property
    def bin_width(self) -> float:
        return (self.maximum - self.minimum) / (self.bins - 1)


class EcvSpec(BaseModel):
    """Набор осей; кодированный вектор это конкатенация их сегментов."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    axes: tuple[EcvAxis, ...] = Field(min_length=1)

    @classmethod
    def uniform(
        cls,
        n_axes: int,
        minimum: float,
        maximum: float,
        bins: int,
        names: Sequence[str] | None = None,
    ) -> EcvSpec:
        labels = names or [f"axis{k}" for k in range(n_axes)]
        return cls(
            axes=tuple(
                EcvAxis(
                    name=labels[k],
                    minimum=minimum,
                    maximum=maximum,
                    bins=bins,
                )
                for k in range(n_axes)
            )
        )

    @property
    def size(self) -> int:
        return sum(axis.bins for axis in self.axes)

    def offsets(self) -> list[int]:
        out = [0]
        for axis in self.axes:
            out.append(out[-1] + axis.bins)
        return out


@dataclass(slots=True, frozen=True, eq=False)
class EncodedVector:
    values: Array
    spec: EcvSpec

    def segments(self) -> list[Array]:
        bounds = self.spec.offsets()
        return [
            self.values[bounds[k] : bounds[k + 1]]
            for k in range(len(self.spec.axes))
        ]


def _locate(value: float, axis: EcvAxis) -> tuple[int, float]:
    if not axis.minimum <= value <= axis.maximum:
        raise CoordinateOutOfRange(
            axis=axis.name,
            value=value,
            minimum=axis.minimum,
            maximum=axis.maximum,
        )
    u = (value - axis.minimum) / axis.bin_width
    i = math.floor(u)
    if i >= axis.bins - 1:
        return axis.bins - 1, 0.0
    return i, u - i


def ecv_encode_scalar(value: float, axis: EcvAxis) -> Array:
    """
    Кодирует значение в сегмент оси.

    ``u = (value − minimum) / bin_width``, ``i = floor(u)``,
    ``f = u − i``: в узел ``i`` пишется ``1 − f``, в ``i + 1`` пишется
    ``f``. На верхней границе ``f = 0`` и вес целиком в последнем узле.

    Raises:
        CoordinateOutOfRange: Значение вне ``[minimum, maximum]``.
    """

    segment = np.zeros(axis.bins)
    i, f = _locate(float(value), axis)
    segment[i] = 1.0 - f
    if f > 0.0:
        segment[i + 1] = f
    return segment


def ecv_encode_point(coords: Sequence[float], spec: EcvSpec) -> EncodedVector:
    if len(coords) != len(spec.axes):
        raise EncodingFormatError(
            f"Число координат {len(coords)} не совпадает с числом осей "
            f"{len(spec.axes)}"
        )
    values = np.concatenate(
        [ecv_encode_scalar(c, axis) for c, axis in zip(coords, spec.axes)]
    )
    return EncodedVector(values=values, spec=spec)


def _check_segment(segment: Array, axis: EcvAxis) -> None:
    if not np.all(np.isfinite(segment)) or np.any(segment < 0.0):
        raise EncodingFormatError(
            f"Ось {axis.name!r}: отрицательные или нечисловые веса"
        )
    if abs(float(segment.sum()) - 1.0) > MASS_TOLERANCE:
        raise EncodingFormatError(
            f"Ось {axis.name!r}: сумма весов {segment.sum()!r} != 1"
        )
    nonzero = np.flatnonzero(segment)
    gap = nonzero.size == 2 and nonzero[1] - nonzero[0] != 1
    if nonzero.size > 2 or gap:
        raise EncodingFormatError(
            f"Ось {axis.name!r}: ненулевые веса не являются соседними"
        )


def ecv_decode(vector: EncodedVector) -> tuple[float, ...]:
    """
    Восстанавливает координаты:
    ``minimum + bin_width * Σ k · segment[k]`` по каждой оси.

    Raises:
        EncodingFormatError: Вектор не удовлетворяет инвариантам ECV.
    """

    if vector.values.shape != (vector.spec.size,):
        raise EncodingFormatError(
            f"Длина вектора {vector.values.shape}, ожидалась "
            f"{vector.spec.size}"
        )
    coords = []
    for segment, axis in zip(vector.segments(), vector.spec.axes):
        _check_segment(segment, axis)
        position = float(np.dot(np.arange(axis.bins), segment))
        coords.append(axis.minimum + axis.bin_width * position)
    return tuple(coords)


def ecv_decode_values(values: ArrayLike, spec: EcvSpec) -> tuple[float, ...]:
    return ecv_decode(
        EncodedVector(values=np.asarray(values, dtype=np.float64), spec=spec)
    )
