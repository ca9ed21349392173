"""Конфигурация и фикстуры для pytest."""

import os
from pathlib import Path

import numpy as np
import pytest

# Загружаем переменные окружения из .env файла
try:
    from dotenv import load_dotenv

    project_root = Path(__file__).parent.parent
    env_file = project_root / ".env"
    tests_env = Path(__file__).parent / ".env"

    # приоритет: корень проекта, затем tests/
    if env_file.exists():
        load_dotenv(env_file, override=True)
    elif tests_env.exists():
        load_dotenv(tests_env, override=True)
    else:
        load_dotenv(override=True)
except ImportError:
    # python-dotenv не установлен, пропускаем загрузку
    pass

from aielab.agents.config import AgentConfig
from aielab.enums.activation import Activation
from aielab.enums.variant import AgentVariant
from aielab.envs.grid import GridConfig, GridWorld
from aielab.envs.ucav.scenario import Scenario
from aielab.harness.config import (
    EnvironmentConfig,
    ExperimentConfig,
    MetricsConfig,
)
from aielab.nn.dense import DenseNet

RUN_SLOW_ENV = "AIELAB_RUN_SLOW"


@pytest.fixture
def rng():
    """Генератор с фиксированным seed."""
    return np.random.default_rng(0)


@pytest.fixture
def tanh_net(rng):
    """Небольшая сеть tanh 3 → 5 → 2."""
    return DenseNet.initialize([3, 5, 2], rng)


@pytest.fixture
def softmax_net(rng):
    """Сеть с softmax-выходом 3 → 4 → 3."""
    return DenseNet.initialize(
        [3, 4, 3], rng, output_activation=Activation.SOFTMAX
    )


@pytest.fixture
def small_grid_config():
    """Сетка 8 × 8: старт (4, 4), цель (5, 5)."""
    return GridConfig(width=8, height=8, max_steps=30)


@pytest.fixture
def small_grid(small_grid_config):
    """Среда на сетке 8 × 8."""
    return GridWorld(small_grid_config)


@pytest.fixture
def agent_config_factory():
    """Фабрика компактной конфигурации агента для быстрых тестов."""

    def _factory(variant=AgentVariant.AIE3, **overrides):
        data = {
            "variant": variant,
            "hidden_sizes": (16,),
            "lr": 1e-3,
            "sil_passes": 2,
            "sil_batch_size": 8,
            "sil_capacity": 1000,
            "rnd_hidden_sizes": (16,),
            "rnd_output_size": 4,
            "predictor_lr": 1e-3,
            "predictor_batch_size": 8,
            "feature_capacity": 1000,
            "penalty_window": 20,
        }
        data.update(overrides)
        return AgentConfig(**data)

    return _factory


@pytest.fixture
def experiment_config_factory(tmp_path, agent_config_factory):
    """Фабрика эксперимента на сетке 8 × 8 с каталогом во временной папке."""

    def _factory(name="tiny", episodes=3, seeds=(0,), **agent_overrides):
        return ExperimentConfig(
            name=name,
            episodes=episodes,
            seeds=seeds,
            output_dir=tmp_path / "runs",
            environment=EnvironmentConfig(
                grid=GridConfig(width=8, height=8, max_steps=20)
            ),
            agent=agent_config_factory(**agent_overrides),
            metrics=MetricsConfig(map_every=2, log_every=1),
        )

    return _factory


@pytest.fixture
def open_scenario():
    """Сценарий без ЗРК со стартом в центре поля."""
    return Scenario(name="open", start={"x": 10.0, "y": 10.0, "z": 2.0})


def pytest_collection_modifyitems(config, items):
    """Автоматически пропускает тесты с маркером slow,
    если не задана переменная AIELAB_RUN_SLOW.
    """
    if not os.environ.get(RUN_SLOW_ENV):
        reason = f"{RUN_SLOW_ENV} не задана, пропускаем длительные прогоны"
        skip_slow = pytest.mark.skip(reason=reason)
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)
