"""Скалярные функции потерь от выхода сети.

Каждый дескриптор умеет вычислить значение и градиент по выходу.
Для батча значение суммируется по строкам, градиент имеет форму выхода.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Protocol

import numpy as np

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    Array = NDArray[np.float64]


class ScalarLoss(Protocol):
    def value(self, output: Array) -> float: ...

    def grad(self, output: Array) -> Array: ...


@dataclass(slots=True, frozen=True)
class SquaredLoss:
    """``‖output − target‖²``."""

    target: Array

    @classmethod
    def of(cls, target: ArrayLike) -> SquaredLoss:
        return cls(np.asarray(target, dtype=np.float64))

    def value(self, output: Array) -> float:
        diff = output - self.target
        return float(np.sum(diff * diff))

    def grad(self, output: Array) -> Array:
        return 2.0 * (output - self.target)


@dataclass(slots=True, frozen=True)
class LinearLoss:
    """``Σ coeffs · output``; градиент по выходу равен ``coeffs``."""

    coeffs: Array

    @classmethod
    def of(cls, coeffs: ArrayLike) -> LinearLoss:
        return cls(np.asarray(coeffs, dtype=np.float64))

    def value(self, output: Array) -> float:
        return float(np.sum(self.coeffs * output))

    def grad(self, output: Array) -> Array:
        return np.broadcast_to(self.coeffs, output.shape).copy()


@dataclass(slots=True, frozen=True)
class NegativeLogLikelihood:
    """``−log output[index]`` для вероятностного выхода (softmax)."""

    index: int

    def value(self, output: Array) -> float:
        return float(-np.sum(np.log(output[..., self.index])))

    def grad(self, output: Array) -> Array:
        grad = np.zeros_like(output)
        grad[..., self.index] = -1.0 / output[..., self.index]
        return grad
