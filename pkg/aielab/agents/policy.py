from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ..enums.activation import Activation
from ..exceptions.numeric import NumericalError
from ..nn.dense import DenseNet

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import ArrayLike, NDArray

    Array = NDArray[np.float64]


def softmax(logits: Array) -> Array:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


@dataclass(slots=True)
class PolicyValueNet:
    """
    Актор и критик на общем стволе.

    Выходной слой линейный размера ``n_actions + 1``: первые
    ``n_actions`` выходов это логиты политики, последний это V(s).
    """

    net: DenseNet
    n_actions: int

    @classmethod
    def initialize(
        cls,
        observation_size: int,
        n_actions: int,
        rng: np.random.Generator,
        hidden_sizes: Sequence[int] = (128, 128),
        hidden_activation: Activation = Activation.TANH,
    ) -> PolicyValueNet:
        net = DenseNet.initialize(
            [observation_size, *hidden_sizes, n_actions + 1],
            rng,
            hidden_activation=hidden_activation,
            output_activation=Activation.LINEAR,
            output_scale=0.1,
        )
        return cls(net=net, n_actions=n_actions)

    def heads(self, observations: ArrayLike) -> tuple[Array, Array]:
        """Вероятности действий ``B × A`` и оценки ``V`` длины ``B``."""
        out = self.net.forward(np.atleast_2d(observations))
        return softmax(out[:, : self.n_actions]), out[:, self.n_actions]

    def act_distribution(self, observation: ArrayLike) -> Array:
        probs, _ = self.heads(observation)
        return probs[0]

    def value(self, observation: ArrayLike) -> float:
        _, values = self.heads(observation)
        return float(values[0])


def _split(output: Array, n_actions: int) -> tuple[Array, Array, Array]:
    out = np.atleast_2d(output)
    probs = softmax(out[:, :n_actions])
    return out, probs, out[:, n_actions]


@dataclass(slots=True, frozen=True, eq=False)
class ActorCriticLoss:
    """
    Функция потерь A2C от выхода PolicyValueNet, усреднённая по батчу::

        L = mean(−log π(a|s)·Â + c_v·(R − V)² − c_e·H(π))

    Преимущество ``Â`` зафиксировано (не дифференцируется).
    Реализует протокол ScalarLoss и годится для gradcheck.
    """

    n_actions: int
    actions: NDArray[np.int64]
    returns: Array
    advantages: Array
    value_coef: float = 0.5
    entropy_coef: float = 0.01

    def terms(self, output: Array) -> dict[str, float]:
        out, probs, values = _split(output, self.n_actions)
        rows = np.arange(out.shape[0])
        log_probs = np.log(probs)
        policy = -log_probs[rows, self.actions] * self.advantages
        value = (self.returns - values) ** 2
        entropy = -np.sum(probs * log_probs, axis=1)
        return {
            "policy": float(policy.mean()),
            "value": float(value.mean()),
            "entropy": float(entropy.mean()),
        }

    def value(self, output: Array) -> float:
        t = self.terms(output)
        loss = (
            t["policy"]
            + self.value_coef * t["value"]
            - self.entropy_coef * t["entropy"]
        )
        if not np.isfinite(loss):
            raise NumericalError(where="a2c", detail=f"потеря {loss!r}")
        return loss

    def grad(self, output: Array) -> Array:
        out, probs, values = _split(output, self.n_actions)
        batch = out.shape[0]
        rows = np.arange(batch)
        log_probs = np.log(probs)
        entropy = -np.sum(probs * log_probs, axis=1, keepdims=True)

        onehot = np.zeros_like(probs)
        onehot[rows, self.actions] = 1.0

        grad = np.zeros_like(out)
        grad[:, : self.n_actions] = (
            self.advantages[:, None] * (probs - onehot)
            + self.entropy_coef * probs * (log_probs + entropy)
        ) / batch
        grad[:, self.n_actions] = (
            -2.0 * self.value_coef * (self.returns - values) / batch
        )
        return grad.reshape(np.shape(output))


@dataclass(slots=True, frozen=True, eq=False)
class SelfImitationLoss:
    """
    Функция потерь самоимитации, усреднённая по батчу::

        L = mean(−log π(a|s)·(R − V)₊ + β·½·(R − V)₊²)

    В политическом слагаемом ``(R − V)₊`` зафиксировано.
    Записи с ``R ≤ V`` не дают вклада ни в значение, ни в градиент.
    """

    n_actions: int
    actions: NDArray[np.int64]
    returns: Array
    clipped_advantages: Array
    value_weight: float = 0.01

    def terms(self, output: Array) -> dict[str, float]:
        out, probs, values = _split(output, self.n_actions)
        rows = np.arange(out.shape[0])
        clipped_now = np.maximum(self.returns - values, 0.0)
        policy = -np.log(probs[rows, self.actions]) * self.clipped_advantages
        return {
            "policy": float(policy.mean()),
            "value": float(np.mean(0.5 * clipped_now**2)),
        }

    def value(self, output: Array) -> float:
        t = self.terms(output)
        loss = t["policy"] + self.value_weight * t["value"]
        if not np.isfinite(loss):
            raise NumericalError(where="sil", detail=f"потеря {loss!r}")
        return loss

    def grad(self, output: Array) -> Array:
        out, probs, values = _split(output, self.n_actions)
        batch = out.shape[0]
        rows = np.arange(batch)
        onehot = np.zeros_like(probs)
        onehot[rows, self.actions] = 1.0

        grad = np.zeros_like(out)
        grad[:, : self.n_actions] = (
            self.clipped_advantages[:, None] * (probs - onehot) / batch
        )
        grad[:, self.n_actions] = (
            -self.value_weight
            * np.maximum(self.returns - values, 0.0)
            / batch
        )
        return grad.reshape(np.shape(output))
