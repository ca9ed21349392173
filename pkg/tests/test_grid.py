"""Тесты среды на двумерной сетке."""

import numpy as np
import pytest
from pydantic import ValidationError

from aielab.encoding import ecv_decode_values
from aielab.enums import GridAction, GridMode, TerminalCause
from aielab.envs import GridConfig, GridWorld
from aielab.exceptions import EpisodeFinished, InvalidAction


class TestGridConfig:
    """Тесты параметров сетки."""

    def test_defaults(self):
        """40 × 40, старт в центре, цель в дальнем углу."""
        config = GridConfig()
        assert config.start_cell == (20, 20)
        assert config.goal_cell == (37, 37)
        assert config.max_steps == 200

    def test_no_reward_has_no_goal(self):
        """В режиме NO_REWARD цели нет."""
        config = GridConfig(mode=GridMode.NO_REWARD)
        assert config.goal_cell is None

    def test_start_outside_rejected(self):
        """Старт вне сетки запрещён."""
        with pytest.raises(ValidationError):
            GridConfig(width=8, height=8, start=(8, 0))

    def test_start_equals_goal_rejected(self):
        """Старт не может совпадать с целью."""
        with pytest.raises(ValidationError):
            GridConfig(width=8, height=8, start=(5, 5), goal=(5, 5))

    def test_extra_field_rejected(self):
        """Неизвестные поля запрещены."""
        with pytest.raises(ValidationError):
            GridConfig(depth=3)


class TestGridWorld:
    """Тесты переходов и наград."""

    def test_sizes(self, small_grid):
        """Наблюдение и признак имеют длину W + H."""
        assert small_grid.n_actions == 4
        assert small_grid.observation_size == 16
        assert small_grid.feature_size == 16

    def test_reset_observation_encodes_start(self, small_grid):
        """Наблюдение после reset декодируется в стартовую клетку."""
        obs = small_grid.reset()
        spec = small_grid.config.ecv_spec()
        assert ecv_decode_values(obs, spec) == pytest.approx((4.0, 4.0))
        assert small_grid.position == (4.0, 4.0)

    def test_moves(self, small_grid):
        """Каждое действие сдвигает агента на одну клетку."""
        expected = {
            GridAction.UP: (4, 5),
            GridAction.DOWN: (4, 3),
            GridAction.LEFT: (3, 4),
            GridAction.RIGHT: (5, 4),
        }
        for action, cell in expected.items():
            small_grid.reset()
            result = small_grid.step(action)
            assert small_grid.cell == cell
            assert result.reward == 0.0
            assert not result.done

    def test_deterministic(self, small_grid_config):
        """Одинаковые действия дают одинаковые траектории."""
        actions = [0, 3, 3, 1, 2, 0, 0]
        trajectories = []
        for _ in range(2):
            env = GridWorld(small_grid_config)
            env.reset()
            trajectories.append([env.step(a).position for a in actions])
        assert trajectories[0] == trajectories[1]

    def test_goal(self, small_grid):
        """Достижение цели даёт +30 и завершает эпизод."""
        small_grid.reset()
        small_grid.step(GridAction.RIGHT)
        result = small_grid.step(GridAction.UP)
        assert result.reward == 30.0
        assert result.done
        assert result.cause is TerminalCause.ARRIVED

    def test_boundary(self):
        """Выход за границу даёт −30, агент остаётся в крайней клетке."""
        env = GridWorld(GridConfig(width=8, height=8, start=(0, 3)))
        env.reset()
        result = env.step(GridAction.LEFT)
        assert result.reward == -30.0
        assert result.done
        assert result.cause is TerminalCause.OUT_OF_BOUNDS
        assert env.cell == (0, 3)

    def test_timeout(self):
        """Эпизод завершается по лимиту шагов."""
        env = GridWorld(
            GridConfig(width=8, height=8, max_steps=4, mode=GridMode.NO_REWARD)
        )
        env.reset()
        moves = (GridAction.UP, GridAction.DOWN) * 2
        results = [env.step(a) for a in moves]
        assert [r.done for r in results] == [False, False, False, True]
        assert results[-1].cause is TerminalCause.TIMEOUT
        assert results[-1].reward == 0.0

    def test_no_reward_mode_never_rewards_inside(self):
        """В режиме NO_REWARD внутри сетки награда всегда 0."""
        env = GridWorld(
            GridConfig(
                width=8, height=8, max_steps=50, mode=GridMode.NO_REWARD
            )
        )
        env.reset()
        rng = np.random.default_rng(3)
        while not env.done:
            result = env.step(int(rng.integers(4)))
            if result.cause is not TerminalCause.OUT_OF_BOUNDS:
                assert result.reward == 0.0

    def test_step_after_done(self, small_grid):
        """Шаг после завершения вызывает EpisodeFinished."""
        small_grid.reset()
        small_grid.step(GridAction.RIGHT)
        small_grid.step(GridAction.UP)
        with pytest.raises(EpisodeFinished):
            small_grid.step(GridAction.UP)

    @pytest.mark.parametrize("action", [-1, 4, 99])
    def test_invalid_action(self, small_grid, action):
        """Действие вне диапазона вызывает InvalidAction."""
        small_grid.reset()
        with pytest.raises(InvalidAction):
            small_grid.step(action)

    def test_reset_restarts(self, small_grid):
        """reset возвращает агента на старт и обнуляет счётчик шагов."""
        small_grid.reset()
        small_grid.step(GridAction.LEFT)
        small_grid.step(GridAction.LEFT)
        small_grid.reset()
        assert small_grid.cell == (4, 4)
        assert small_grid.steps == 0
        assert not small_grid.done

    def test_feature_matches_observation(self, small_grid):
        """Признак RND совпадает с кодом текущей клетки."""
        obs = small_grid.reset()
        assert np.array_equal(small_grid.coordinate_feature(), obs)
        assert np.array_equal(small_grid.feature_of((4, 4)), obs)
