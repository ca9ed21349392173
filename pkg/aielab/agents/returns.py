from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray


def compute_returns(
    rewards: ArrayLike,
    gamma: float,
    bootstrap: float = 0.0,
) -> NDArray[np.float64]:
    """
    Дисконтированные возвраты ``R_t = r_t + γ·R_{t+1}``.

    Args:
        rewards: Награды ``r_t = e_t + i_t`` отрезка траектории.
        gamma: Коэффициент дисконтирования.
        bootstrap: Оценка ``V(s_T)`` после последнего шага,
            0 для завершённого эпизода.
    """

    r = np.asarray(rewards, dtype=np.float64)
    out = np.empty_like(r)
    running = float(bootstrap)
    for t in range(r.size - 1, -1, -1):
        running = r[t] + gamma * running
        out[t] = running
    return out
