from __future__ import annotations

from dataclasses import dataclass


@dataclass(slots=True)
class NumericalError(Exception):
    """Нечисловое значение (NaN/inf) или некорректное распределение."""

    where: str
    detail: str
    layer: int | None = None

    def __str__(self) -> str:
        parts = [f"where={self.where}"]
        if self.layer is not None:
            parts.append(f"layer={self.layer}")
        parts.append(f"detail={self.detail}")
        return "NumericalError(" + ", ".join(parts) + ")"

    __repr__ = __str__


@dataclass(slots=True)
class SimulationError(Exception):
    """Состояние симулятора стало нечисловым."""

    variable: str
    value: float

    def __str__(self) -> str:
        return (
            f"Нечисловое состояние симулятора: {self.variable}={self.value!r}"
        )

    __repr__ = __str__
