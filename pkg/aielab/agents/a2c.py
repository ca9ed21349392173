from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ..nn.optim import AdamState, adam_step, clip_by_global_norm
from .policy import ActorCriticLoss, PolicyValueNet

if TYPE_CHECKING:
    from numpy.typing import ArrayLike


@dataclass(slots=True, frozen=True)
class A2cStats:
    loss: float
    policy_loss: float
    value_loss: float
    entropy: float
    grad_norm: float


def a2c_update(
    model: PolicyValueNet,
    optimizer: AdamState,
    observations: ArrayLike,
    actions: ArrayLike,
    returns: ArrayLike,
    *,
    value_coef: float = 0.5,
    entropy_coef: float = 0.01,
    max_grad_norm: float | None = 0.5,
) -> tuple[PolicyValueNet, AdamState, A2cStats]:
    """
    Один шаг градиента актор-критика по отрезку траектории.

    Args:
        model: Сеть политики и ценности.
        optimizer: Состояние Adam этой сети.
        observations: Наблюдения ``B × obs``.
        actions: Выбранные действия.
        returns: Возвраты ``R_t`` (с бутстрэпом для n-шаговых отрезков).
        value_coef: Вес слагаемого ценности ``c_v``.
        entropy_coef: Вес энтропийного бонуса ``c_e``.
        max_grad_norm: Порог обрезки общей нормы градиента.

    Returns:
        tuple: Обновлённая сеть, состояние оптимизатора и статистика.

    Raises:
        NumericalError: Если потеря или градиенты нечисловые.
    """

    obs = np.atleast_2d(np.asarray(observations, dtype=np.float64))
    acts = np.asarray(actions, dtype=np.int64)
    rets = np.asarray(returns, dtype=np.float64)

    output = model.net.forward(obs)
    values = output[:, model.n_actions]
    loss = ActorCriticLoss(
        n_actions=model.n_actions,
        actions=acts,
        returns=rets,
        advantages=rets - values,
        value_coef=value_coef,
        entropy_coef=entropy_coef,
    )
    total = loss.value(output)
    terms = loss.terms(output)

    grads = model.net.backward(obs, loss.grad(output))
    grads, norm = clip_by_global_norm(grads, max_grad_norm)
    net, optimizer = adam_step(model.net, grads, optimizer)

    stats = A2cStats(
        loss=total,
        policy_loss=terms["policy"],
        value_loss=terms["value"],
        entropy=terms["entropy"],
        grad_norm=norm,
    )
    return PolicyValueNet(net=net, n_actions=model.n_actions), optimizer, stats
