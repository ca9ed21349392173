from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ..loggers import logger_agent
from ..nn.optim import AdamState, adam_step, clip_by_global_norm
from .policy import PolicyValueNet, SelfImitationLoss

if TYPE_CHECKING:
    from .buffers import SilBuffer


@dataclass(slots=True, frozen=True)
class SilStats:
    """
    Итог серии проходов самоимитации.

    Attributes:
        loss (float): Средняя потеря по выполненным проходам.
        value_loss (float): Среднее ``½(R − V)₊²``.
        updated_fraction (float): Доля сэмплов с ``R > V``.
        passes (int): Число проходов.
        skipped (int): Проходы без шага оптимизатора.
    """

    loss: float
    value_loss: float
    updated_fraction: float
    passes: int
    skipped: int


def sil_update(
    model: PolicyValueNet,
    optimizer: AdamState,
    buffer: SilBuffer,
    rng: np.random.Generator,
    *,
    batch_size: int = 64,
    passes: int = 1,
    value_weight: float = 0.01,
    max_grad_norm: float | None = 0.5,
) -> tuple[PolicyValueNet, AdamState, SilStats]:
    """
    ``passes`` шагов самоимитации на мини-батчах из буфера.

    Мини-батч сэмплируется пропорционально приоритету. Если ни одна
    запись батча не имеет ``R > V(s)``, шаг оптимизатора
    пропускается и параметры не меняются. Приоритеты сэмплированных
    записей обновляются по значениям ``V`` этого прохода.

    Returns:
        tuple: Обновлённая сеть, состояние оптимизатора и статистика.
    """

    if len(buffer) == 0 or buffer.states is None:
        return model, optimizer, SilStats(0.0, 0.0, 0.0, 0, passes)

    losses: list[float] = []
    value_losses: list[float] = []
    positive = 0
    sampled = 0
    skipped = 0

    for _ in range(passes):
        indices = buffer.sample(batch_size, rng)
        obs = buffer.states[indices]
        actions = buffer.actions[indices]
        returns = buffer.returns[indices]

        output = model.net.forward(obs)
        values = output[:, model.n_actions]
        advantages = returns - values
        clipped = np.maximum(advantages, 0.0)
        buffer.update_priorities(indices, advantages)

        sampled += indices.size
        count = int(np.count_nonzero(clipped > 0.0))
        positive += count
        if count == 0:
            skipped += 1
            logger_agent.debug(
                "SIL: в батче нет записей с R > V, шаг пропущен"
            )
            continue

        loss = SelfImitationLoss(
            n_actions=model.n_actions,
            actions=actions,
            returns=returns,
            clipped_advantages=clipped,
            value_weight=value_weight,
        )
        losses.append(loss.value(output))
        value_losses.append(loss.terms(output)["value"])

        grads = model.net.backward(obs, loss.grad(output))
        grads, _ = clip_by_global_norm(grads, max_grad_norm)
        net, optimizer = adam_step(model.net, grads, optimizer)
        model = PolicyValueNet(net=net, n_actions=model.n_actions)

    stats = SilStats(
        loss=float(np.mean(losses)) if losses else 0.0,
        value_loss=float(np.mean(value_losses)) if value_losses else 0.0,
        updated_fraction=positive / sampled if sampled else 0.0,
        passes=passes,
        skipped=skipped,
    )
    return model, optimizer, stats
