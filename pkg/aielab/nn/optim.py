from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

import numpy as np

from ..exceptions.config import DimensionMismatch
from ..exceptions.numeric import NumericalError
from .dense import DenseNet, Gradients

if TYPE_CHECKING:
    from numpy.typing import NDArray

    Array = NDArray[np.float64]


@dataclass(slots=True)
class AdamState:
    """
    Состояние оптимизатора Adam для одной сети.

    Моменты хранятся в порядке ``W0, b0, W1, b1, ...``
    (как ``DenseNet.parameters()``).

    Attributes:
        first_moment (list[ndarray]): Первые моменты.
        second_moment (list[ndarray]): Вторые моменты.
        step_count (int): Число применённых шагов.
        lr (float): Шаг обучения.
        beta1 (float): Коэффициент затухания первого момента.
        beta2 (float): Коэффициент затухания второго момента.
        epsilon (float): Стабилизатор знаменателя.
    """

    first_moment: list[Array] = field(default_factory=list)
    second_moment: list[Array] = field(default_factory=list)
    step_count: int = 0
    lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    @classmethod
    def for_net(
        cls,
        net: DenseNet,
        lr: float = 1e-4,
        beta1: float = 0.9,
        beta2: float = 0.999,
        epsilon: float = 1e-8,
    ) -> AdamState:
        params = net.parameters()
        return cls(
            first_moment=[np.zeros_like(p) for p in params],
            second_moment=[np.zeros_like(p) for p in params],
            lr=lr,
            beta1=beta1,
            beta2=beta2,
            epsilon=epsilon,
        )


def adam_step(
    net: DenseNet,
    grads: Gradients,
    state: AdamState,
) -> tuple[DenseNet, AdamState]:
    """
    Один шаг Adam с поправкой смещения моментов.

    Исходные сеть и состояние не изменяются.

    Args:
        net: Сеть.
        grads: Градиенты, согласованные по формам с сетью.
        state: Текущее состояние оптимизатора.

    Returns:
        tuple[DenseNet, AdamState]: Новая сеть и новое состояние.

    Raises:
        DimensionMismatch: Если формы градиентов или моментов
            не совпадают с параметрами.
        NumericalError: Если моменты стали нечисловыми.
    """

    params = net.parameters()
    grad_arrays = grads.arrays()
    if len(grad_arrays) != len(params) or any(
        g.shape != p.shape for g, p in zip(grad_arrays, params)
    ):
        raise DimensionMismatch("Формы градиентов не совпадают с сетью")

    first = state.first_moment or [np.zeros_like(p) for p in params]
    second = state.second_moment or [np.zeros_like(p) for p in params]
    if any(m.shape != p.shape for m, p in zip(first, params)):
        raise DimensionMismatch("Формы моментов Adam не совпадают с сетью")

    t = state.step_count + 1
    b1, b2 = state.beta1, state.beta2
    correction1 = 1.0 - b1**t
    correction2 = 1.0 - b2**t

    new_params: list[Array] = []
    new_first: list[Array] = []
    new_second: list[Array] = []
    for p, g, m, v in zip(params, grad_arrays, first, second):
        m_next = b1 * m + (1.0 - b1) * g
        v_next = b2 * v + (1.0 - b2) * (g * g)
        m_hat = m_next / correction1
        v_hat = v_next / correction2
        new_params.append(
            p - state.lr * m_hat / (np.sqrt(v_hat) + state.epsilon)
        )
        new_first.append(m_next)
        new_second.append(v_next)

    if not all(np.all(np.isfinite(v)) for v in new_second):
        raise NumericalError(where="adam", detail="нечисловой момент")

    new_state = replace(
        state,
        first_moment=new_first,
        second_moment=new_second,
        step_count=t,
    )
    return net.with_parameters(new_params), new_state


def clip_by_global_norm(
    grads: Gradients,
    max_norm: float | None,
) -> tuple[Gradients, float]:
    """
    Масштабирует градиенты так, чтобы их общая норма не превышала
    ``max_norm``. При ``max_norm=None`` градиенты возвращаются как есть.

    Returns:
        tuple[Gradients, float]: Градиенты и норма до обрезки.
    """

    norm = grads.global_norm()
    if max_norm is None or norm <= max_norm:
        return grads, norm
    return grads.scaled(max_norm / norm), norm
