from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ..exceptions.numeric import NumericalError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

PROBABILITY_TOLERANCE = 1e-6


def sample_categorical(probs: ArrayLike, rng: np.random.Generator) -> int:
    """
    Выбирает индекс ``i`` с вероятностью ``probs[i]``.

    Потребляет ровно одно равномерное число из ``rng``.

    Raises:
        NumericalError: Если ``probs`` не является распределением.
    """

    p = np.asarray(probs, dtype=np.float64)
    if (
        p.ndim != 1
        or p.size == 0
        or not np.all(np.isfinite(p))
        or np.any(p < 0.0)
        or abs(float(p.sum()) - 1.0) > PROBABILITY_TOLERANCE
    ):
        raise NumericalError(
            where="sample_categorical",
            detail=f"некорректное распределение {p.tolist()}",
        )

    cumulative = np.cumsum(p)
    u = rng.random() * cumulative[-1]
    index = int(np.searchsorted(cumulative, u, side="right"))

    # индекс не должен попасть на хвост из нулевых вероятностей
    last_nonzero = int(np.flatnonzero(p)[-1])
    return min(index, last_nonzero)
