from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ..loggers import logger_nn

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

    from .dense import DenseNet
    from .losses import ScalarLoss


def gradcheck(
    net: DenseNet,
    x: ArrayLike,
    loss: ScalarLoss,
    h: float = 1e-5,
    max_params: int | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """
    Сравнивает аналитический градиент с центральными разностями.

    Относительная ошибка параметра:
    ``|a − n| / max(|a|, |n|, 1e-8)``.

    Args:
        net: Проверяемая сеть (не изменяется).
        x: Вход (вектор или батч).
        loss: Дескриптор скалярной функции потерь.
        h: Шаг конечных разностей.
        max_params: Проверить только случайное подмножество
            параметров такого размера.
        rng: Генератор для выбора подмножества.

    Returns:
        float: Максимальная относительная ошибка.
    """

    x_arr = np.asarray(x, dtype=np.float64)
    output = net.forward(x_arr)
    analytic = net.backward(x_arr, loss.grad(output)).arrays()

    perturbed = net.copy()
    params = perturbed.parameters()

    positions = [
        (k, idx) for k, p in enumerate(params) for idx in np.ndindex(p.shape)
    ]
    if max_params is not None and max_params < len(positions):
        generator = rng if rng is not None else np.random.default_rng(0)
        chosen = generator.choice(len(positions), max_params, replace=False)
        positions = [positions[i] for i in sorted(chosen)]

    worst = 0.0
    for k, idx in positions:
        original = params[k][idx]
        params[k][idx] = original + h
        plus = loss.value(perturbed.forward(x_arr))
        params[k][idx] = original - h
        minus = loss.value(perturbed.forward(x_arr))
        params[k][idx] = original

        numeric = (plus - minus) / (2.0 * h)
        a = float(analytic[k][idx])
        rel = abs(a - numeric) / max(abs(a), abs(numeric), 1e-8)
        worst = max(worst, rel)

    logger_nn.debug(
        "gradcheck: %d параметров, максимальная ошибка %.3e",
        len(positions),
        worst,
    )
    return worst
