from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ..enums.activation import (
    HIDDEN_ACTIVATIONS,
    OUTPUT_ACTIVATIONS,
    Activation,
)
from ..exceptions.config import ConfigError, DimensionMismatch
from ..exceptions.numeric import NumericalError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    Array = NDArray[np.float64]


@dataclass(slots=True)
class Gradients:
    """
    Градиенты по всем параметрам DenseNet.

    Attributes:
        weights (list[ndarray]): Градиенты матриц весов, форма out × in.
        biases (list[ndarray]): Градиенты векторов смещений.
    """

    weights: list[Array]
    biases: list[Array]

    @classmethod
    def zeros_like(cls, net: DenseNet) -> Gradients:
        return cls(
            weights=[np.zeros_like(w) for w in net.weights],
            biases=[np.zeros_like(b) for b in net.biases],
        )

    def arrays(self) -> list[Array]:
        """Массивы в порядке ``W0, b0, W1, b1, ...``."""
        out: list[Array] = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def __add__(self, other: Gradients) -> Gradients:
        return Gradients(
            weights=[a + b for a, b in zip(self.weights, other.weights)],
            biases=[a + b for a, b in zip(self.biases, other.biases)],
        )

    def scaled(self, factor: float) -> Gradients:
        return Gradients(
            weights=[w * factor for w in self.weights],
            biases=[b * factor for b in self.biases],
        )

    def global_norm(self) -> float:
        return float(
            np.sqrt(sum(float(np.sum(a * a)) for a in self.arrays()))
        )

    def is_zero(self) -> bool:
        return all(not np.any(a) for a in self.arrays())


@dataclass(slots=True)
class ForwardCache:
    """Входы каждого слоя и выход сети для обратного прохода."""

    inputs: list[Array]
    output: Array


class DenseNet:
    """
    Полносвязная сеть прямого распространения.

    Все вычисления выполняются в float64. Скрытые слои используют
    ``hidden_activation``, последний слой ``output_activation``.

    Attributes:
        layer_sizes (tuple[int, ...]): Размеры слоёв, включая вход.
        weights (list[ndarray]): Матрицы весов, слой k имеет форму
            ``layer_sizes[k + 1] × layer_sizes[k]``.
        biases (list[ndarray]): Векторы смещений.
        hidden_activation (Activation): RELU или TANH.
        output_activation (Activation): LINEAR или SOFTMAX.
    """

    __slots__ = (
        "biases",
        "hidden_activation",
        "layer_sizes",
        "output_activation",
        "weights",
    )

    def __init__(
        self,
        layer_sizes: Sequence[int],
        weights: Sequence[ArrayLike],
        biases: Sequence[ArrayLike],
        *,
        hidden_activation: Activation = Activation.TANH,
        output_activation: Activation = Activation.LINEAR,
    ) -> None:
        sizes = tuple(int(s) for s in layer_sizes)
        if len(sizes) < 2 or any(s <= 0 for s in sizes):
            raise ConfigError(
                f"Некорректные размеры слоёв: {list(layer_sizes)}"
            )
        if hidden_activation not in HIDDEN_ACTIVATIONS:
            raise ConfigError(
                f"Недопустимая активация скрытых слоёв: {hidden_activation}"
            )
        if output_activation not in OUTPUT_ACTIVATIONS:
            raise ConfigError(
                f"Недопустимая выходная активация: {output_activation}"
            )
        if len(weights) != len(sizes) - 1 or len(biases) != len(sizes) - 1:
            raise DimensionMismatch(
                "Число матриц весов не совпадает с числом слоёв"
            )

        self.layer_sizes = sizes
        self.hidden_activation = Activation(hidden_activation)
        self.output_activation = Activation(output_activation)
        self.weights: list[Array] = []
        self.biases: list[Array] = []

        for k, (w, b) in enumerate(zip(weights, biases)):
            w_arr = np.asarray(w, dtype=np.float64)
            b_arr = np.asarray(b, dtype=np.float64)
            if w_arr.shape != (sizes[k + 1], sizes[k]):
                raise DimensionMismatch(
                    f"Слой {k}: форма весов {w_arr.shape}, "
                    f"ожидалась {(sizes[k + 1], sizes[k])}"
                )
            if b_arr.shape != (sizes[k + 1],):
                raise DimensionMismatch(
                    f"Слой {k}: форма смещений {b_arr.shape}, "
                    f"ожидалась {(sizes[k + 1],)}"
                )
            if not (np.all(np.isfinite(w_arr)) and np.all(np.isfinite(b_arr))):
                raise NumericalError(
                    where="init", detail="нечисловой параметр", layer=k
                )
            self.weights.append(w_arr)
            self.biases.append(b_arr)

    @classmethod
    def initialize(
        cls,
        layer_sizes: Sequence[int],
        rng: np.random.Generator,
        *,
        hidden_activation: Activation = Activation.TANH,
        output_activation: Activation = Activation.LINEAR,
        output_scale: float = 1.0,
    ) -> DenseNet:
        """
        Создаёт сеть с равномерной инициализацией в масштабе He.

        Веса слоя с ``fan_in`` входами берутся из
        ``U(-sqrt(6 / fan_in), sqrt(6 / fan_in))``, смещения нулевые.

        Args:
            layer_sizes: Размеры слоёв, включая вход.
            rng: Генератор случайных чисел.
            hidden_activation: Активация скрытых слоёв.
            output_activation: Активация выходного слоя.
            output_scale: Множитель границы для последнего слоя.

        Returns:
            DenseNet: Новая сеть.
        """

        sizes = [int(s) for s in layer_sizes]
        weights = []
        biases = []
        last = len(sizes) - 2
        for k in range(len(sizes) - 1):
            fan_in, fan_out = sizes[k], sizes[k + 1]
            limit = np.sqrt(6.0 / fan_in)
            if k == last:
                limit *= output_scale
            weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
            biases.append(np.zeros(fan_out))

        return cls(
            sizes,
            weights,
            biases,
            hidden_activation=hidden_activation,
            output_activation=output_activation,
        )

    @property
    def n_inputs(self) -> int:
        return self.layer_sizes[0]

    @property
    def n_outputs(self) -> int:
        return self.layer_sizes[-1]

    def parameters(self) -> list[Array]:
        """Массивы параметров в порядке ``W0, b0, W1, b1, ...``."""
        out: list[Array] = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def copy(self) -> DenseNet:
        return DenseNet(
            self.layer_sizes,
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            hidden_activation=self.hidden_activation,
            output_activation=self.output_activation,
        )

    def with_parameters(self, arrays: Sequence[Array]) -> DenseNet:
        """Та же архитектура с другими параметрами ``W0, b0, ...``."""
        return DenseNet(
            self.layer_sizes,
            list(arrays[0::2]),
            list(arrays[1::2]),
            hidden_activation=self.hidden_activation,
            output_activation=self.output_activation,
        )

    def _as_batch(self, x: ArrayLike) -> tuple[Array, bool]:
        arr = np.asarray(x, dtype=np.float64)
        single = arr.ndim == 1
        batch = arr[np.newaxis, :] if single else arr
        if batch.ndim != 2 or batch.shape[1] != self.n_inputs:
            raise DimensionMismatch(
                f"Вход формы {arr.shape}, сеть ожидает {self.n_inputs} "
                "признаков"
            )
        return batch, single

    def _hidden(self, z: Array) -> Array:
        if self.hidden_activation is Activation.RELU:
            return np.maximum(z, 0.0)
        return np.tanh(z)

    def _output(self, z: Array) -> Array:
        if self.output_activation is Activation.SOFTMAX:
            shifted = z - z.max(axis=1, keepdims=True)
            exp = np.exp(shifted)
            return exp / exp.sum(axis=1, keepdims=True)
        return z

    def forward_with_cache(self, x: ArrayLike) -> ForwardCache:
        batch, _ = self._as_batch(x)
        inputs: list[Array] = []
        a = batch
        last = len(self.weights) - 1
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            inputs.append(a)
            z = a @ w.T + b
            a = self._output(z) if k == last else self._hidden(z)

        if not np.all(np.isfinite(a)):
            raise NumericalError(
                where="forward", detail="нечисловой выход", layer=last
            )
        return ForwardCache(inputs=inputs, output=a)

    def forward(self, x: ArrayLike) -> Array:
        """
        Прямой проход.

        Args:
            x: Вектор длины ``n_inputs`` или батч ``B × n_inputs``.

        Returns:
            ndarray: Выход той же размерности (вектор или батч).

        Raises:
            DimensionMismatch: Если размер входа не совпадает с сетью.
        """

        _, single = self._as_batch(x)
        out = self.forward_with_cache(x).output
        return out[0] if single else out

    def backward(self, x: ArrayLike, output_grad: ArrayLike) -> Gradients:
        """
        Обратное распространение: градиент скалярной функции потерь
        по всем параметрам, если известен её градиент по выходу сети.

        Для батча градиенты суммируются по строкам.

        Args:
            x: Вход (вектор или батч).
            output_grad: dL/d(выход), той же формы, что выход.

        Returns:
            Gradients: Градиенты по весам и смещениям.

        Raises:
            NumericalError: Если градиент слоя нечисловой.
        """

        cache = self.forward_with_cache(x)
        grad = np.asarray(output_grad, dtype=np.float64)
        if grad.ndim == 1:
            grad = grad[np.newaxis, :]
        if grad.shape != cache.output.shape:
            raise DimensionMismatch(
                f"Градиент выхода формы {grad.shape}, "
                f"ожидалась {cache.output.shape}"
            )

        if self.output_activation is Activation.SOFTMAX:
            p = cache.output
            dz = p * (grad - np.sum(grad * p, axis=1, keepdims=True))
        else:
            dz = grad

        n_layers = len(self.weights)
        grads_w: list[Array] = [np.empty(0)] * n_layers
        grads_b: list[Array] = [np.empty(0)] * n_layers

        for k in range(n_layers - 1, -1, -1):
            a_in = cache.inputs[k]
            dw = dz.T @ a_in
            db = dz.sum(axis=0)
            if not (np.all(np.isfinite(dw)) and np.all(np.isfinite(db))):
                raise NumericalError(
                    where="backward", detail="нечисловой градиент", layer=k
                )
            grads_w[k] = dw
            grads_b[k] = db
            if k == 0:
                break
            da = dz @ self.weights[k]
            if self.hidden_activation is Activation.RELU:
                dz = da * (a_in > 0.0)
            else:
                dz = da * (1.0 - a_in * a_in)

        return Gradients(weights=grads_w, biases=grads_b)


def forward(net: DenseNet, x: ArrayLike) -> Array:
    return net.forward(x)


def backward(net: DenseNet, x: ArrayLike, output_grad: ArrayLike) -> Gradients:
    return net.backward(x, output_grad)
