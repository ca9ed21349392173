from __future__ import annotations

from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

import numpy as np

from ..enums.activation import Activation
from ..enums.training import PredictorMode
from ..exceptions.config import ConfigError, DimensionMismatch
from ..loggers import logger_agent
from ..nn.dense import DenseNet
from ..nn.losses import SquaredLoss
from ..nn.optim import AdamState, adam_step

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from numpy.typing import ArrayLike, NDArray

    from .buffers import FeatureBuffer, FeatureRecord

    Array = NDArray[np.float64]


@dataclass(slots=True, frozen=True)
class RndPair:
    """
    Замороженная целевая сеть и обучаемый предиктор одинаковой
    архитектуры.

    Attributes:
        target (DenseNet): Целевая сеть f, не меняется после создания.
        predictor (DenseNet): Предиктор f̂.
        optimizer (AdamState): Состояние Adam предиктора.
    """

    target: DenseNet
    predictor: DenseNet
    optimizer: AdamState

    def __post_init__(self) -> None:
        if (
            self.target.layer_sizes != self.predictor.layer_sizes
            or self.target.hidden_activation
            != self.predictor.hidden_activation
        ):
            raise ConfigError(
                "Архитектуры целевой сети и предиктора RND различаются"
            )

    @classmethod
    def initialize(
        cls,
        feature_size: int,
        rng: np.random.Generator,
        hidden_sizes: Sequence[int] = (64, 64),
        output_size: int = 16,
        lr: float = 1e-4,
        hidden_activation: Activation = Activation.TANH,
    ) -> RndPair:
        sizes = [feature_size, *hidden_sizes, output_size]
        target = DenseNet.initialize(
            sizes, rng, hidden_activation=hidden_activation
        )
        predictor = DenseNet.initialize(
            sizes, rng, hidden_activation=hidden_activation
        )
        return cls(
            target=target,
            predictor=predictor,
            optimizer=AdamState.for_net(predictor, lr=lr),
        )

    @property
    def feature_size(self) -> int:
        return self.target.n_inputs

    def target_output(self, feature: ArrayLike) -> Array:
        return self.target.forward(feature)


def rnd_intrinsic(pair: RndPair, feature: ArrayLike) -> float:
    """``‖f̂(φ) − f(φ)‖²``, всегда неотрицательна."""
    x = np.asarray(feature, dtype=np.float64)
    if x.shape != (pair.feature_size,):
        raise DimensionMismatch(
            f"Признак формы {x.shape}, RND ожидает {pair.feature_size}"
        )
    diff = pair.predictor.forward(x) - pair.target.forward(x)
    return float(np.dot(diff, diff))


def rnd_intrinsic_batch(pair: RndPair, features: ArrayLike) -> Array:
    """Ошибка предсказания для каждой строки батча признаков."""
    x = np.atleast_2d(np.asarray(features, dtype=np.float64))
    diff = pair.predictor.forward(x) - pair.target.forward(x)
    return np.sum(diff * diff, axis=1)


@dataclass(slots=True, frozen=True)
class PredictorUpdate:
    pair: RndPair
    loss: float | None
    steps: int


def _episode_arrays(
    records: Sequence[FeatureRecord],
) -> tuple[Array, Array]:
    if not records:
        return np.zeros((0, 0)), np.zeros((0, 0))
    return (
        np.stack([r.feature for r in records]),
        np.stack([r.target for r in records]),
    )


def _fit_predictor(
    pair: RndPair,
    count: int,
    gather: Callable[[NDArray[np.int64]], tuple[Array, Array]],
    rng: np.random.Generator,
    batch_size: int,
    steps: int,
) -> PredictorUpdate:
    if count == 0:
        return PredictorUpdate(pair=pair, loss=None, steps=0)

    predictor, optimizer = pair.predictor, pair.optimizer
    losses = []
    for _ in range(steps):
        x, t = gather(rng.integers(0, count, size=batch_size))
        output = predictor.forward(x)
        loss = SquaredLoss(t)
        losses.append(loss.value(output) / batch_size)
        grads = predictor.backward(x, loss.grad(output) / batch_size)
        predictor, optimizer = adam_step(predictor, grads, optimizer)

    return PredictorUpdate(
        pair=replace(pair, predictor=predictor, optimizer=optimizer),
        loss=float(np.mean(losses)),
        steps=steps,
    )


def train_predictor(
    pair: RndPair,
    features: Array,
    targets: Array,
    rng: np.random.Generator,
    *,
    batch_size: int = 64,
    steps: int = 1,
) -> PredictorUpdate:
    """
    Шаги Adam предиктора на равномерно сэмплированных батчах из
    ``(features, targets)``. Потеря батча: ``mean ‖f̂ − t‖²``.

    Возвращаемая потеря это среднее по шагам значение до обновления.
    """

    return _fit_predictor(
        pair,
        features.shape[0],
        lambda idx: (features[idx], targets[idx]),
        rng,
        batch_size,
        steps,
    )


def predictor_update(
    pair: RndPair,
    mode: PredictorMode,
    rng: np.random.Generator,
    *,
    episode: Sequence[FeatureRecord] = (),
    buffer: FeatureBuffer | None = None,
    batch_size: int = 64,
    steps: int = 1,
) -> PredictorUpdate:
    """
    Обучение предиктора.

    ONLINE сэмплирует признаки текущего эпизода, REPLAY сэмплирует
    буфер признаков. Оба режима расходуют ``rng`` одинаково,
    поэтому буфер, содержащий ровно текущий эпизод, даёт ту же
    последовательность потерь, что и ONLINE.

    Цели берутся из сохранённых выходов замороженной сети.
    """

    if mode is PredictorMode.REPLAY:
        if buffer is None or len(buffer) == 0:
            logger_agent.warning(
                "Буфер признаков пуст, обучение предиктора пропущено"
            )
            return PredictorUpdate(pair=pair, loss=None, steps=0)
        return _fit_predictor(
            pair, len(buffer), buffer.batch, rng, batch_size, steps
        )

    features, targets = _episode_arrays(episode)
    return train_predictor(
        pair, features, targets, rng, batch_size=batch_size, steps=steps
    )
