from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..enums.terminal_cause import TerminalCause
from ..enums.training import PredictorMode
from ..exceptions.config import DimensionMismatch, VariantMismatch
from ..loggers import logger_agent
from ..nn.optim import AdamState
from ..nn.sampling import sample_categorical
from .a2c import a2c_update
from .buffers import FeatureBuffer, FeatureRecord, SilBuffer, Transition
from .config import AgentConfig
from .normalizer import RunningMeanStd
from .penalty import PenaltyTracker
from .policy import PolicyValueNet
from .returns import compute_returns
from .rnd import RndPair, predictor_update
from .sil import sil_update

if TYPE_CHECKING:
    from pathlib import Path

    from numpy.typing import NDArray

    from ..envs.base import BaseEnvironment

RNG_STREAMS = ("init", "env", "actions", "sil", "features")


@dataclass(slots=True, frozen=True)
class StepEvent:
    """Событие шага, передаваемое наблюдателю ``train_episode``."""

    episode: int
    step: int
    action: int
    position: tuple[float, ...]
    extrinsic: float
    intrinsic: float
    penalized: bool
    done: bool
    cause: TerminalCause


StepObserver = Callable[[StepEvent], Any]


class EpisodeRecord(BaseModel):
    """Метрики одного эпизода (строка metrics.csv)."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    episode: int
    length: int
    extrinsic_return: float
    intrinsic_sum: float
    penalty_count: int
    sil_updated_fraction: float
    predictor_loss: float | None
    a2c_loss: float
    cause: TerminalCause
    final_position: tuple[float, ...]


class AgentRngs:
    """
    Независимые генераторы, порождённые из одного seed через
    ``SeedSequence.spawn``: инициализация, среда, действия, SIL,
    обучение предиктора.
    """

    __slots__ = RNG_STREAMS

    init: np.random.Generator
    env: np.random.Generator
    actions: np.random.Generator
    sil: np.random.Generator
    features: np.random.Generator

    def __init__(self, seed: int) -> None:
        children = np.random.SeedSequence(seed).spawn(len(RNG_STREAMS))
        for name, child in zip(RNG_STREAMS, children):
            setattr(self, name, np.random.default_rng(child))

    def state(self) -> dict[str, dict]:
        return {
            name: getattr(self, name).bit_generator.state
            for name in RNG_STREAMS
        }

    def restore(self, states: dict[str, dict]) -> None:
        for name in RNG_STREAMS:
            getattr(self, name).bit_generator.state = states[name]


class Agent:
    """
    Агент семейства AIE.

    Состав компонентов определяется вариантом:

    * ASIL: A2C + SIL, без RND;
    * AIE1: + RND с онлайн-обучением предиктора;
    * AIE2: + внутренний штраф;
    * AIE3: + буфер признаков для обучения предиктора.

    Args:
        config: Гиперпараметры.
        observation_size: Длина наблюдения среды.
        n_actions: Число действий среды.
        feature_size: Длина координатного признака среды.
        seed: Seed запуска.
    """

    def __init__(
        self,
        config: AgentConfig,
        observation_size: int,
        n_actions: int,
        feature_size: int,
        seed: int = 0,
    ) -> None:
        self.config = config
        self.seed = seed
        self.observation_size = observation_size
        self.n_actions = n_actions
        self.feature_size = feature_size
        self.rngs = AgentRngs(seed)
        self.episodes_trained = 0

        variant = config.variant
        self.model = PolicyValueNet.initialize(
            observation_size,
            n_actions,
            self.rngs.init,
            hidden_sizes=config.hidden_sizes,
            hidden_activation=config.hidden_activation,
        )
        self.optimizer = AdamState.for_net(self.model.net, lr=config.lr)
        self.sil_buffer = SilBuffer(config.sil_capacity, config.priority_eps)

        self.rnd: RndPair | None = None
        if variant.uses_rnd:
            self.rnd = RndPair.initialize(
                feature_size,
                self.rngs.init,
                hidden_sizes=config.rnd_hidden_sizes,
                output_size=config.rnd_output_size,
                lr=config.predictor_lr,
                hidden_activation=config.hidden_activation,
            )

        self.penalty: PenaltyTracker | None = None
        if variant.uses_penalty:
            self.penalty = PenaltyTracker(
                window=config.penalty_window,
                alpha=config.penalty_alpha,
                weight=config.penalty_weight,
                floor=config.penalty_floor,
                mode=config.penalty_mode,
                static_threshold=config.penalty_static_threshold,
            )

        self.feature_buffer: FeatureBuffer | None = None
        if variant.uses_feature_replay:
            self.feature_buffer = FeatureBuffer(config.feature_capacity)

        self.normalizer: RunningMeanStd | None = (
            RunningMeanStd() if config.normalize_intrinsic else None
        )

    @classmethod
    def for_env(
        cls, config: AgentConfig, env: BaseEnvironment, seed: int = 0
    ) -> Agent:
        return cls(
            config,
            env.observation_size,
            env.n_actions,
            env.feature_size,
            seed=seed,
        )

    @classmethod
    def resume(cls, directory: str | Path) -> Agent:
        """Загружает агента из чекпоинта ``save``."""
        from .checkpoint import load_checkpoint  # noqa: PLC0415

        return load_checkpoint(directory)

    def save(self, directory: str | Path) -> Path:
        from .checkpoint import save_checkpoint  # noqa: PLC0415

        return save_checkpoint(self, directory)

    @property
    def predictor_mode(self) -> PredictorMode:
        if self.config.variant.uses_feature_replay:
            return PredictorMode.REPLAY
        return PredictorMode.ONLINE

    def check_components(self, env: BaseEnvironment | None = None) -> None:
        """
        Raises:
            VariantMismatch: Состав компонентов не соответствует варианту.
            DimensionMismatch: Размеры сетей не совпадают со средой.
        """

        variant = self.config.variant
        expected = {
            "rnd": variant.uses_rnd,
            "penalty": variant.uses_penalty,
            "feature_buffer": variant.uses_feature_replay,
        }
        actual = {
            "rnd": self.rnd is not None,
            "penalty": self.penalty is not None,
            "feature_buffer": self.feature_buffer is not None,
        }
        for name, needed in expected.items():
            if needed != actual[name]:
                raise VariantMismatch(
                    f"Вариант {variant}: компонент {name} "
                    f"{'отсутствует' if needed else 'лишний'}"
                )

        if env is None:
            return
        if env.observation_size != self.observation_size:
            raise DimensionMismatch(
                f"Наблюдение среды длины {env.observation_size}, "
                f"сеть ожидает {self.observation_size}"
            )
        if env.n_actions != self.n_actions:
            raise DimensionMismatch(
                f"Среда имеет {env.n_actions} действий, "
                f"политика {self.n_actions}"
            )
        if self.rnd is not None and env.feature_size != self.rnd.feature_size:
            raise DimensionMismatch(
                f"Признак среды длины {env.feature_size}, "
                f"RND ожидает {self.rnd.feature_size}"
            )

    def _intrinsic(
        self, rnd: RndPair, feature: NDArray
    ) -> tuple[float, bool, FeatureRecord]:
        target = rnd.target_output(feature)
        diff = rnd.predictor.forward(feature) - target
        value = float(np.dot(diff, diff))

        if self.normalizer is not None:
            self.normalizer.update(value)
            value = self.normalizer.normalize(value)

        penalized = False
        if self.penalty is not None:
            shaped = self.penalty.apply(value)
            value, penalized = shaped.value, shaped.penalized

        record = FeatureRecord(feature=feature, target=target)
        return self.config.intrinsic_coef * value, penalized, record

    def _a2c(
        self,
        observations: list[NDArray],
        actions: list[int],
        returns: NDArray,
    ) -> float:
        self.model, self.optimizer, stats = a2c_update(
            self.model,
            self.optimizer,
            np.stack(observations),
            actions,
            returns,
            value_coef=self.config.value_coef,
            entropy_coef=self.config.entropy_coef,
            max_grad_norm=self.config.max_grad_norm,
        )
        return stats.loss

    def _flush_to_sil(
        self,
        observations: list[NDArray],
        actions: list[int],
        returns: NDArray,
    ) -> None:
        _, values = self.model.heads(np.stack(observations))
        for obs, action, ret, value in zip(
            observations, actions, returns, values
        ):
            self.sil_buffer.add(
                Transition(state=obs, action=int(action), ret=float(ret)),
                advantage=float(ret - value),
            )

    def train_episode(
        self,
        env: BaseEnvironment,
        episode_index: int | None = None,
        observer: StepObserver | None = None,
    ) -> EpisodeRecord:
        """
        Один эпизод обучения.

        На каждом шаге: действие, признак φ(s'), внутренняя награда
        (до обновления предиктора), штраф, ``r_t = e_t + i_t``.
        По завершении: возвраты, перенос эпизода в буфер SIL,
        шаг A2C, затем M раундов SIL и обучения предиктора
        (из буфера признаков для AIE3, из эпизода иначе).

        При ``rollout_length`` шаг A2C выполняется также каждые
        ``rollout_length`` шагов с бутстрэпом ``V(s)``.

        Raises:
            VariantMismatch: Состав компонентов не соответствует варианту.
            DimensionMismatch: Размеры сетей не совпадают со средой.
        """

        self.check_components(env)
        config = self.config
        index = episode_index
        if index is None:
            index = self.episodes_trained + 1

        obs = env.reset(self.rngs.env)
        observations: list[NDArray] = []
        actions: list[int] = []
        rewards: list[float] = []
        episode_features: list[FeatureRecord] = []
        extrinsic_total = 0.0
        intrinsic_total = 0.0
        penalty_count = 0
        a2c_losses: list[float] = []
        segment_start = 0

        while True:
            probs = self.model.act_distribution(obs)
            action = sample_categorical(probs, self.rngs.actions)
            result = env.step(action)

            intrinsic = 0.0
            penalized = False
            if self.rnd is not None:
                intrinsic, penalized, record = self._intrinsic(
                    self.rnd, env.coordinate_feature()
                )
                episode_features.append(record)
                if self.feature_buffer is not None:
                    self.feature_buffer.add(record)

            observations.append(obs)
            actions.append(action)
            rewards.append(result.reward + intrinsic)
            extrinsic_total += result.reward
            intrinsic_total += intrinsic
            penalty_count += int(penalized)

            if observer is not None:
                observer(
                    StepEvent(
                        episode=index,
                        step=len(actions),
                        action=action,
                        position=result.position,
                        extrinsic=result.reward,
                        intrinsic=intrinsic,
                        penalized=penalized,
                        done=result.done,
                        cause=result.cause,
                    )
                )

            obs = result.observation
            if result.done:
                break

            if (
                config.rollout_length is not None
                and len(actions) - segment_start >= config.rollout_length
            ):
                segment_returns = compute_returns(
                    rewards[segment_start:],
                    config.gamma,
                    bootstrap=self.model.value(obs),
                )
                a2c_losses.append(
                    self._a2c(
                        observations[segment_start:],
                        actions[segment_start:],
                        segment_returns,
                    )
                )
                segment_start = len(actions)

        returns = compute_returns(rewards, config.gamma)
        self._flush_to_sil(observations, actions, returns)

        if segment_start < len(actions):
            a2c_losses.append(
                self._a2c(
                    observations[segment_start:],
                    actions[segment_start:],
                    returns[segment_start:],
                )
            )

        sil_fractions: list[float] = []
        predictor_losses: list[float] = []
        for _ in range(config.sil_passes):
            self.model, self.optimizer, sil_stats = sil_update(
                self.model,
                self.optimizer,
                self.sil_buffer,
                self.rngs.sil,
                batch_size=config.sil_batch_size,
                passes=1,
                value_weight=config.sil_value_weight,
                max_grad_norm=config.max_grad_norm,
            )
            sil_fractions.append(sil_stats.updated_fraction)

            if self.rnd is not None:
                update = predictor_update(
                    self.rnd,
                    self.predictor_mode,
                    self.rngs.features,
                    episode=episode_features,
                    buffer=self.feature_buffer,
                    batch_size=config.predictor_batch_size,
                    steps=config.predictor_steps,
                )
                self.rnd = update.pair
                if update.loss is not None:
                    predictor_losses.append(update.loss)

        self.episodes_trained += 1
        record = EpisodeRecord(
            episode=index,
            length=len(actions),
            extrinsic_return=extrinsic_total,
            intrinsic_sum=intrinsic_total,
            penalty_count=penalty_count,
            sil_updated_fraction=(
                float(np.mean(sil_fractions)) if sil_fractions else 0.0
            ),
            predictor_loss=(
                float(np.mean(predictor_losses)) if predictor_losses else None
            ),
            a2c_loss=float(np.mean(a2c_losses)),
            cause=result.cause,
            final_position=result.position,
        )
        logger_agent.debug(
            "Эпизод %d: длина %d, e=%.3f, i=%.3f, %s",
            index,
            record.length,
            record.extrinsic_return,
            record.intrinsic_sum,
            record.cause,
        )
        return record

    def run_policy(
        self,
        env: BaseEnvironment,
        rng: np.random.Generator,
        *,
        greedy: bool = False,
        observer: StepObserver | None = None,
    ) -> tuple[float, TerminalCause, int]:
        """
        Эпизод без обучения.

        Returns:
            tuple: Внешний возврат, причина завершения, длина.
        """

        self.check_components(env)
        obs = env.reset(rng)
        total = 0.0
        steps = 0
        while True:
            probs = self.model.act_distribution(obs)
            action = (
                int(np.argmax(probs))
                if greedy
                else sample_categorical(probs, rng)
            )
            result = env.step(action)
            steps += 1
            total += result.reward
            if observer is not None:
                observer(
                    StepEvent(
                        episode=0,
                        step=steps,
                        action=action,
                        position=result.position,
                        extrinsic=result.reward,
                        intrinsic=0.0,
                        penalized=False,
                        done=result.done,
                        cause=result.cause,
                    )
                )
            obs = result.observation
            if result.done:
                return total, result.cause, steps
