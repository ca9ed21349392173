from enum import IntEnum, auto, unique

from .._compat import StrEnum


@unique
class GridAction(IntEnum):
    """Ход агента в сетке на одну клетку."""

    UP = 0
    DOWN = 1
    LEFT = 2
    RIGHT = 3

    @property
    def delta(self) -> tuple[int, int]:
        return _DELTAS[self]


_DELTAS = {
    GridAction.UP: (0, 1),
    GridAction.DOWN: (0, -1),
    GridAction.LEFT: (-1, 0),
    GridAction.RIGHT: (1, 0),
}


@unique
class GridMode(StrEnum):
    """
    Режим наград сетки.

    `SPARSE` выдаёт награду за цель и за выход за границу.
    `NO_REWARD` не содержит цели, эпизод завершается только
    выходом за границу или лимитом шагов.
    """

    SPARSE = auto()
    NO_REWARD = auto()
