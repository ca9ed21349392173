"""Чекпоинт агента для точного продолжения обучения.

Каталог чекпоинта::

    manifest.json     конфигурация, размеры, счётчики, состояния ГСЧ
    policy.bin        актор-критик (формат aielab.nn.serialization)
    rnd_target.bin    целевая сеть RND (если есть)
    rnd_predictor.bin предиктор RND (если есть)
    state.npz         моменты Adam, буферы, история штрафа
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from ..exceptions.encoding import CheckpointFormatError
from ..loggers import logger_agent
from ..nn.optim import AdamState
from ..nn.serialization import load_net, save_net
from .agent import Agent
from .config import AgentConfig
from .normalizer import RunningMeanStd
from .policy import PolicyValueNet
from .rnd import RndPair

CHECKPOINT_VERSION = 1


class AdamMeta(BaseModel):
    step_count: int
    lr: float
    beta1: float
    beta2: float
    epsilon: float


class CheckpointManifest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: int = CHECKPOINT_VERSION
    config: AgentConfig
    seed: int
    observation_size: int
    n_actions: int
    feature_size: int
    episodes_trained: int
    rng_states: dict[str, dict[str, Any]]
    actor_optimizer: AdamMeta
    predictor_optimizer: AdamMeta | None = None
    sil_pointers: tuple[int, int]
    feature_pointers: tuple[int, int] | None = None
    penalty_counters: tuple[int, int] | None = None
    normalizer: tuple[int, float, float] | None = None


def _adam_meta(state: AdamState) -> AdamMeta:
    return AdamMeta(
        step_count=state.step_count,
        lr=state.lr,
        beta1=state.beta1,
        beta2=state.beta2,
        epsilon=state.epsilon,
    )


def _adam_arrays(prefix: str, state: AdamState) -> dict[str, np.ndarray]:
    arrays = {}
    for k, (m, v) in enumerate(zip(state.first_moment, state.second_moment)):
        arrays[f"{prefix}.m{k}"] = m
        arrays[f"{prefix}.v{k}"] = v
    return arrays


def _restore_adam(
    prefix: str, meta: AdamMeta, arrays: Any, count: int
) -> AdamState:
    return AdamState(
        first_moment=[arrays[f"{prefix}.m{k}"] for k in range(count)],
        second_moment=[arrays[f"{prefix}.v{k}"] for k in range(count)],
        step_count=meta.step_count,
        lr=meta.lr,
        beta1=meta.beta1,
        beta2=meta.beta2,
        epsilon=meta.epsilon,
    )


def save_checkpoint(agent: Agent, directory: str | Path) -> Path:
    """Сохраняет полное состояние агента в каталог."""
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)

    arrays: dict[str, np.ndarray] = {}
    arrays.update(_adam_arrays("actor", agent.optimizer))
    save_net(agent.model.net, path / "policy.bin")

    sil = agent.sil_buffer
    if sil.states is not None:
        arrays["sil.states"] = sil.states
    arrays["sil.actions"] = sil.actions
    arrays["sil.returns"] = sil.returns
    arrays["sil.priorities"] = sil.tree.priorities()

    manifest = CheckpointManifest(
        config=agent.config,
        seed=agent.seed,
        observation_size=agent.observation_size,
        n_actions=agent.n_actions,
        feature_size=agent.feature_size,
        episodes_trained=agent.episodes_trained,
        rng_states=agent.rngs.state(),
        actor_optimizer=_adam_meta(agent.optimizer),
        sil_pointers=sil.pointers,
    )

    if agent.rnd is not None:
        save_net(agent.rnd.target, path / "rnd_target.bin")
        save_net(agent.rnd.predictor, path / "rnd_predictor.bin")
        arrays.update(_adam_arrays("predictor", agent.rnd.optimizer))
        manifest.predictor_optimizer = _adam_meta(agent.rnd.optimizer)

    fb = agent.feature_buffer
    if fb is not None:
        manifest.feature_pointers = fb.pointers
        if fb.features is not None and fb.targets is not None:
            arrays["features.features"] = fb.features
            arrays["features.targets"] = fb.targets

    if agent.penalty is not None:
        arrays["penalty.history"] = agent.penalty.history
        manifest.penalty_counters = (
            agent.penalty.count,
            agent.penalty.position,
        )

    if agent.normalizer is not None:
        n = agent.normalizer
        manifest.normalizer = (n.count, n.mean, n.m2)

    buffer = io.BytesIO()
    np.savez(buffer, **arrays)
    (path / "state.npz").write_bytes(buffer.getvalue())
    (path / "manifest.json").write_text(
        manifest.model_dump_json(indent=2), encoding="utf-8"
    )
    logger_agent.info(
        "Чекпоинт сохранён: %s (эпизодов %d)", path, agent.episodes_trained
    )
    return path


def load_checkpoint(directory: str | Path) -> Agent:
    """
    Восстанавливает агента; продолжение обучения даёт те же
    результаты, что и непрерывный запуск.

    Raises:
        CheckpointFormatError: Каталог неполон или повреждён.
    """

    path = Path(directory)
    try:
        manifest = CheckpointManifest.model_validate_json(
            (path / "manifest.json").read_text(encoding="utf-8")
        )
        arrays = dict(np.load(path / "state.npz"))
    except (OSError, ValueError, ValidationError) as e:
        raise CheckpointFormatError(
            f"Не удалось прочитать чекпоинт {path}: {e}"
        ) from e
    if manifest.version != CHECKPOINT_VERSION:
        raise CheckpointFormatError(
            f"Неподдерживаемая версия чекпоинта: {manifest.version}"
        )

    agent = Agent(
        manifest.config,
        manifest.observation_size,
        manifest.n_actions,
        manifest.feature_size,
        seed=manifest.seed,
    )
    agent.episodes_trained = manifest.episodes_trained
    agent.rngs.restore(manifest.rng_states)

    net = load_net(path / "policy.bin")
    agent.model = PolicyValueNet(net=net, n_actions=manifest.n_actions)
    agent.optimizer = _restore_adam(
        "actor", manifest.actor_optimizer, arrays, len(net.parameters())
    )

    sil = agent.sil_buffer
    if "sil.states" in arrays:
        sil.states = arrays["sil.states"]
    sil.actions = arrays["sil.actions"]
    sil.returns = arrays["sil.returns"]
    sil.tree.rebuild(arrays["sil.priorities"])
    sil.restore_pointers(*manifest.sil_pointers)

    if agent.rnd is not None:
        if manifest.predictor_optimizer is None:
            raise CheckpointFormatError("В чекпоинте нет состояния RND")
        predictor = load_net(path / "rnd_predictor.bin")
        agent.rnd = RndPair(
            target=load_net(path / "rnd_target.bin"),
            predictor=predictor,
            optimizer=_restore_adam(
                "predictor",
                manifest.predictor_optimizer,
                arrays,
                len(predictor.parameters()),
            ),
        )

    fb = agent.feature_buffer
    if fb is not None and manifest.feature_pointers is not None:
        if "features.features" in arrays:
            fb.features = arrays["features.features"]
            fb.targets = arrays["features.targets"]
        fb.restore_pointers(*manifest.feature_pointers)

    if agent.penalty is not None and manifest.penalty_counters is not None:
        agent.penalty.history = arrays["penalty.history"]
        agent.penalty.count, agent.penalty.position = manifest.penalty_counters

    if agent.normalizer is not None and manifest.normalizer is not None:
        count, mean, m2 = manifest.normalizer
        agent.normalizer = RunningMeanStd(count=count, mean=mean, m2=m2)

    return agent
