from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from ...exceptions.usage import InvalidAction
from .dynamics import UcavParams, UcavState

N_ACTIONS = 28
CRUISE_ACTION = 27

#: Приращения (тяга, перегрузка, крен) в шагах для действий 0..26.
_DELTAS: tuple[tuple[int, int, int], ...] = tuple(
    itertools.product((-1, 0, 1), repeat=3)
)
NOOP_ACTION = _DELTAS.index((0, 0, 0))


@dataclass(slots=True, frozen=True)
class ControlCommand:
    """
    Расшифрованное действие.

    ``cruise=True`` означает сброс органов управления к крейсерским
    значениям, иначе ``thrust``, ``load`` и ``bank`` задают направление
    изменения (−1, 0, +1) на один шаг.
    """

    thrust: int = 0
    load: int = 0
    bank: int = 0
    cruise: bool = False


def decode_action(index: int) -> ControlCommand:
    """
    Raises:
        InvalidAction: Индекс вне ``0..27``.
    """

    if isinstance(index, bool) or not 0 <= int(index) < N_ACTIONS:
        raise InvalidAction(f"Действие {index!r} вне диапазона 0..27")
    if index == CRUISE_ACTION:
        return ControlCommand(cruise=True)
    dt, dn, dphi = _DELTAS[int(index)]
    return ControlCommand(thrust=dt, load=dn, bank=dphi)


def _clamp(value: float, low: float, high: float) -> float:
    return min(max(value, low), high)


def apply_action(
    state: UcavState, index: int, params: UcavParams
) -> UcavState:
    """Применяет действие к органам управления с ограничением по границам."""
    command = decode_action(index)
    if command.cruise:
        return state.with_controls(
            params.cruise_thrust,
            params.cruise_load,
            math.radians(params.cruise_bank_deg),
        )

    return state.with_controls(
        _clamp(
            state.thrust + command.thrust * params.thrust_step,
            params.thrust_min,
            params.thrust_max,
        ),
        _clamp(
            state.load + command.load * params.load_step,
            params.load_min,
            params.load_max,
        ),
        _clamp(
            state.bank + command.bank * params.bank_step,
            -params.bank_max,
            params.bank_max,
        ),
    )
