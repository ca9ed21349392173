"""Тесты миссии UCAV: динамика, действия, ракеты, наблюдение, среда."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from aielab.encoding import ANGLE_BINS
from aielab.enums import TerminalCause
from aielab.envs.ucav import (
    CRUISE_ACTION,
    N_ACTIONS,
    NOOP_ACTION,
    Missile,
    MissileParams,
    SamSite,
    Scenario,
    StartPoint,
    UcavEnvironment,
    UcavParams,
    UcavState,
    apply_action,
    build_observation,
    coordinate_feature,
    decode_action,
    integrate_dynamics,
    load_scenario,
    missile_pn_step,
    observation_size,
    parse_scenario,
    pn_acceleration,
    replay_actions,
    trajectory_to_jsonl,
)
from aielab.exceptions import (
    ConfigError,
    EpisodeFinished,
    InvalidAction,
    SimulationError,
)


class TestDynamics:
    """Тесты точечной модели движения."""

    def test_level_cruise_is_steady(self):
        """Крейсерская тяга удерживает скорость и высоту."""
        params = UcavParams()
        state = UcavState(x=5.0, y=5.0, z=1.0, v=250.0)
        after = integrate_dynamics(state, params)
        assert after.v == pytest.approx(250.0, abs=1e-9)
        assert after.z == pytest.approx(1.0, abs=1e-12)
        assert after.gamma == pytest.approx(0.0, abs=1e-12)

    def test_straight_step(self):
        """V = 200 м/с, ψ = 0, dt = 0.1: x увеличивается на 0.02 км."""
        state = UcavState(x=1.0, y=1.0, z=1.0, v=200.0)
        after = integrate_dynamics(state, UcavParams(), dt=0.1)
        assert after.x == pytest.approx(1.02)
        assert after.y == pytest.approx(1.0)

    def test_speed_clamped(self):
        """Скорость не выходит за [v_min, v_max]."""
        params = UcavParams()
        fast = UcavState(x=0, y=0, z=3, v=340.0, thrust=120.0)
        assert integrate_dynamics(fast, params).v == params.v_max
        slow = UcavState(x=0, y=0, z=3, v=100.0, thrust=0.0)
        assert integrate_dynamics(slow, params).v == params.v_min

    def test_bank_turns(self):
        """Положительный крен увеличивает курс."""
        state = UcavState(x=0, y=0, z=3, v=250.0, bank=math.radians(30))
        assert integrate_dynamics(state, UcavParams()).psi > 0.0

    def test_non_finite_state(self):
        """Нечисловая скорость вызывает SimulationError."""
        state = UcavState(x=0.0, y=0.0, z=1.0, v=math.nan)
        with pytest.raises(SimulationError) as exc:
            integrate_dynamics(state, UcavParams())
        assert exc.value.variable == "x"

    def test_matches_fine_step(self):
        """100 шагов по 0.1 с отличаются от шага 0.001 с менее чем на 1 %."""
        params = UcavParams()
        for seed in range(20):
            rng = np.random.default_rng(seed)
            coarse = fine = UcavState(x=5.0, y=5.0, z=3.0, v=250.0)
            for _ in range(10):
                action = int(rng.integers(N_ACTIONS))
                coarse = apply_action(coarse, action, params)
                fine = apply_action(fine, action, params)
                for _ in range(10):
                    coarse = integrate_dynamics(coarse, params, dt=0.1)
                for _ in range(1000):
                    fine = integrate_dynamics(fine, params, dt=0.001)
            displacement = math.dist((5.0, 5.0, 3.0), fine.position)
            error = math.dist(coarse.position, fine.position)
            assert error < 0.01 * displacement, f"seed {seed}"

    def test_angles_stay_finite(self):
        """10 000 шагов со случайными действиями: ψ и γ конечны."""
        params = UcavParams()
        for seed in range(3):
            rng = np.random.default_rng(seed)
            state = UcavState(x=10.0, y=10.0, z=3.0, v=250.0)
            for action in rng.integers(N_ACTIONS, size=10_000):
                state = apply_action(state, int(action), params)
                state = integrate_dynamics(state, params)
                assert math.isfinite(state.psi)
                assert abs(state.gamma) <= params.gamma_max
                assert params.v_min <= state.v <= params.v_max

    def test_cruise_speed_bounds(self):
        """Требуется v_min < v_cruise <= v_max."""
        with pytest.raises(ValidationError):
            UcavParams(v_cruise=400.0)


class TestActions:
    """Тесты дискретных действий."""

    def test_counts(self):
        """28 действий: 27 приращений и крейсерский режим."""
        assert N_ACTIONS == 28
        assert CRUISE_ACTION == 27
        assert decode_action(NOOP_ACTION) == decode_action(13)
        noop = decode_action(NOOP_ACTION)
        assert (noop.thrust, noop.load, noop.bank) == (0, 0, 0)

    def test_decode(self):
        """Действие 22 увеличивает тягу, 27 включает крейсер."""
        command = decode_action(22)
        assert (command.thrust, command.load, command.bank) == (1, 0, 0)
        assert decode_action(27).cruise

    @pytest.mark.parametrize("index", [-1, 28, True])
    def test_invalid(self, index):
        """Индекс вне диапазона вызывает InvalidAction."""
        with pytest.raises(InvalidAction):
            decode_action(index)

    def test_apply_clamps(self):
        """Органы управления ограничены диапазонами."""
        params = UcavParams()
        state = UcavState(x=0, y=0, z=1, v=250, thrust=120.0, load=7.0)
        after = apply_action(state, 26, params)
        assert after.thrust == 120.0
        assert after.load == 7.0
        assert after.bank == pytest.approx(params.bank_step)

    def test_cruise_resets_controls(self):
        """Крейсерское действие возвращает тягу 50, перегрузку 1, крен 0."""
        state = UcavState(
            x=0, y=0, z=1, v=250, thrust=90.0, load=3.0, bank=0.5
        )
        after = apply_action(state, CRUISE_ACTION, UcavParams())
        assert (after.thrust, after.load, after.bank) == (50.0, 1.0, 0.0)


class TestMissile:
    """Тесты пропорционального наведения."""

    def test_crossing_geometry(self):
        """Поперечная цель: ускорение (0, 102, 0) м/с²."""
        accel = pn_acceleration(
            np.array([5000.0, 0.0, 0.0]),
            np.array([-680.0, 250.0, 0.0]),
            np.array([680.0, 0.0, 0.0]),
            3.0,
        )
        assert accel == pytest.approx([0.0, 102.0, 0.0])

    def test_acceleration_perpendicular(self, rng):
        """Ускорение перпендикулярно скорости ракеты."""
        for _ in range(20):
            v_m = rng.normal(size=3) * 500.0
            accel = pn_acceleration(
                rng.normal(size=3) * 1000.0, rng.normal(size=3) * 300.0, v_m, 3
            )
            assert np.dot(accel, v_m) == pytest.approx(0.0, abs=1e-6)

    def test_zero_range_is_hit(self):
        """Нулевая дальность считается попаданием."""
        missile = Missile(
            position=np.array([1.0, 1.0, 1.0]),
            velocity=np.array([680.0, 0.0, 0.0]),
        )
        moved = missile_pn_step(
            missile, [1.0, 1.0, 1.0], [0.0, 0.0, 0.0], MissileParams(), 0.1
        )
        assert moved.hit
        assert not moved.active

    def test_speed_preserved(self):
        """Модуль скорости ракеты не меняется."""
        params = MissileParams()
        missile = Missile.launch((0, 0, 0), (5, 5, 2), params)
        moved = missile_pn_step(missile, (5, 4, 2), (0, 250, 0), params, 0.1)
        assert moved.speed == pytest.approx(params.speed)

    def test_lifetime(self):
        """Ракета самоликвидируется по истечении времени полёта."""
        params = MissileParams(lifetime=0.15)
        missile = Missile.launch((0, 0, 0), (50, 0, 0), params)
        for _ in range(2):
            missile = missile_pn_step(
                missile, (50, 0, 0), (0, 0, 0), params, 0.1
            )
        assert not missile.active

    def test_intercepts(self):
        """Ракета сближается с целью на прямом курсе ближе 0.5 км."""
        params = MissileParams()
        dt = 0.05
        for seed in range(20):
            rng = np.random.default_rng(seed)
            target = np.array(
                [rng.uniform(5, 15), rng.uniform(5, 15), rng.uniform(1, 4)]
            )
            heading = rng.uniform(-math.pi, math.pi)
            velocity = 250.0 * np.array(
                [math.cos(heading), math.sin(heading), 0.0]
            )
            origin = target + np.array(
                [rng.uniform(-3, 3), rng.uniform(-3, 3), 0.0]
            )
            origin[2] = 0.0
            missile = Missile.launch(origin, target, params)
            closest = missile.distance_to(target)
            while missile.active:
                target = target + velocity * dt / 1000.0
                missile = missile_pn_step(
                    missile, target, velocity, params, dt
                )
                closest = min(closest, missile.distance_to(target))
                if closest < 0.5:
                    break
            assert closest < 0.5, f"seed {seed}"


class TestScenario:
    """Тесты описания сценария."""

    def test_builtin(self):
        """Встроенный ucav-small содержит четыре ЗРК."""
        scenario = load_scenario("ucav-small")
        assert scenario.name == "ucav-small"
        assert len(scenario.sites) == 4

    def test_unknown(self):
        """Неизвестный сценарий вызывает ConfigError."""
        with pytest.raises(ConfigError):
            load_scenario("no-such-scenario")

    def test_file(self, tmp_path):
        """Сценарий читается из TOML-файла, имя берётся из файла."""
        path = tmp_path / "mission.toml"
        path.write_text(
            "time_limit = 50\n[[sites]]\nx = 5.0\ny = 5.0\n", encoding="utf-8"
        )
        scenario = load_scenario(path)
        assert scenario.name == "mission"
        assert scenario.time_limit == 50
        assert scenario.sites[0].engagement_radius == 5.0

    @pytest.mark.parametrize(
        "data",
        [
            {"time_limit": 0},
            {"start": {"x": 30.0}},
            {"feature_bins": [10, 10, 10]},
            {"unknown": 1},
        ],
        ids=["time-limit", "start-outside", "feature-bins", "extra"],
    )
    def test_invalid(self, data):
        """Некорректный сценарий вызывает ConfigError."""
        with pytest.raises(ConfigError):
            parse_scenario(data)


class TestObservation:
    """Тесты наблюдения и координатного признака."""

    def test_sizes(self):
        """Наблюдение 329, признак 33."""
        scenario = Scenario()
        assert observation_size(scenario) == 329
        env = UcavEnvironment(scenario)
        assert env.observation_size == 329
        assert env.feature_size == 33
        assert env.reset().shape == (329,)

    def test_missile_block_without_missile(self):
        """Без ракеты блок равен [1, 0, ..., 0]."""
        obs = UcavEnvironment().reset()
        block = obs[-42:]
        assert block[0] == 1.0
        assert not np.any(block[1:])

    def test_missile_block_with_missile(self, open_scenario):
        """С ракетой выставлен признак наличия."""
        env = UcavEnvironment(open_scenario)
        env.reset()
        env.add_missile(
            Missile.launch((15, 10, 0), (10, 10, 2), MissileParams())
        )
        obs = env.step(NOOP_ACTION).observation
        assert obs[-41] == 1.0
        assert obs[-42] < 1.0

    def test_coordinate_feature(self):
        """Признак содержит по единице веса на каждую ось."""
        scenario = Scenario()
        feature = coordinate_feature(scenario.start_state(), scenario)
        assert feature.shape == (33,)
        assert feature.sum() == pytest.approx(3.0)

    def test_coordinate_feature_ignores_velocity(self):
        """Признак зависит только от координат."""
        scenario = Scenario()
        slow = UcavState(x=7.3, y=4.1, z=2.2, v=150.0, psi=0.3)
        fast = UcavState(x=7.3, y=4.1, z=2.2, v=320.0, psi=-2.0, gamma=0.4)
        assert np.array_equal(
            coordinate_feature(slow, scenario),
            coordinate_feature(fast, scenario),
        )

    def test_coordinate_feature_one_bin_apart(self, rng):
        """Точки на расстоянии одного узла различаются по L1 не более 2."""
        scenario = Scenario()
        width = 20.0 / 12
        for _ in range(50):
            x = float(rng.uniform(0.0, 20.0 - width))
            y, z = float(rng.uniform(0.0, 20.0)), float(rng.uniform(0.0, 6.0))
            a = coordinate_feature(UcavState(x=x, y=y, z=z, v=250.0), scenario)
            b = coordinate_feature(
                UcavState(x=x + width, y=y, z=z, v=250.0), scenario
            )
            assert np.abs(a - b).sum() <= 2.0 + 1e-9

    def test_build_observation_repeatable(self):
        """Два вызова на одной истории дают одинаковые векторы."""
        scenario = Scenario()
        history = [scenario.start_state()]
        first = build_observation(history, [], scenario)
        second = build_observation(history, [], scenario)
        assert np.array_equal(first, second)

    def test_build_observation_length(self):
        """Длина: 5·33 + 2·3·angle + 2 + ракетный блок."""
        scenario = Scenario()
        angle = 2 * ANGLE_BINS
        expected = 5 * 33 + 2 * 3 * angle + 2 + (2 + 2 * angle)
        obs = build_observation([scenario.start_state()], [], scenario)
        assert obs.shape == (expected,)
        assert expected == observation_size(scenario)

    def test_build_observation_matches_environment(self, open_scenario):
        """Наблюдение по истории совпадает с наблюдением среды."""
        env = UcavEnvironment(open_scenario)
        env.reset()
        history = [env.state]
        for _ in range(3):
            obs = env.step(NOOP_ACTION).observation
            history.append(env.state)
        rebuilt = build_observation(history, env.missiles, open_scenario)
        assert np.array_equal(rebuilt, obs)


class TestUcavEnvironment:
    """Тесты эпизода UCAV."""

    def test_speed_penalty(self):
        """Упор в v_max даёт штраф −0.01 без завершения эпизода."""
        scenario = Scenario(
            ucav=UcavParams(v_max=260.0, v_cruise=250.0),
            start=StartPoint(z=3.0, v=260.0, gamma_deg=-30.0),
        )
        env = UcavEnvironment(scenario)
        env.reset()
        result = env.step(NOOP_ACTION)
        assert result.reward == pytest.approx(-0.01)
        assert not result.done
        assert result.info["speed_limited"]

    def test_arrival(self):
        """Прибытие в радиус цели даёт +30."""
        env = UcavEnvironment(
            Scenario(start=StartPoint(x=17.5, y=17.5, z=1.0))
        )
        env.reset()
        result = env.step(NOOP_ACTION)
        assert result.cause is TerminalCause.ARRIVED
        assert result.reward == 30.0
        assert result.done

    def test_shot_down(self):
        """Ракета в радиусе поражения даёт −30."""
        env = UcavEnvironment(Scenario())
        env.reset()
        env.add_missile(
            Missile(
                position=np.array([2.0, 2.0, 2.49]),
                velocity=np.array([0.0, 0.0, -680.0]),
            )
        )
        result = env.step(NOOP_ACTION)
        assert result.cause is TerminalCause.SHOT_DOWN
        assert result.reward == -30.0

    def test_out_of_bounds(self):
        """Вылет за поле боя даёт −30."""
        env = UcavEnvironment(
            Scenario(start=StartPoint(x=0.05, y=10.0, psi_deg=180.0))
        )
        env.reset()
        result = env.step(NOOP_ACTION)
        assert result.cause is TerminalCause.OUT_OF_BOUNDS
        assert result.reward == -30.0

    def test_ground_collision(self):
        """Снижение ниже земли считается вылетом за поле боя."""
        env = UcavEnvironment(
            Scenario(start=StartPoint(x=10.0, y=10.0, z=0.05, gamma_deg=-30.0))
        )
        env.reset()
        result = env.step(NOOP_ACTION)
        assert result.cause is TerminalCause.OUT_OF_BOUNDS
        assert env.trajectory[-1].z < 0.0

    def test_timeout(self, open_scenario):
        """Эпизод завершается по лимиту шагов решения."""
        scenario = open_scenario.model_copy(update={"time_limit": 2})
        env = UcavEnvironment(scenario)
        env.reset()
        assert not env.step(NOOP_ACTION).done
        result = env.step(NOOP_ACTION)
        assert result.done
        assert result.cause is TerminalCause.TIMEOUT
        assert result.reward == 0.0

    def test_step_after_done(self):
        """Шаг после завершения вызывает EpisodeFinished."""
        env = UcavEnvironment(
            Scenario(start=StartPoint(x=17.5, y=17.5, z=1.0))
        )
        env.reset()
        env.step(NOOP_ACTION)
        with pytest.raises(EpisodeFinished):
            env.step(NOOP_ACTION)

    def test_invalid_action(self):
        """Недопустимое действие вызывает InvalidAction."""
        env = UcavEnvironment()
        env.reset()
        with pytest.raises(InvalidAction):
            env.step(N_ACTIONS)

    def test_site_launches(self):
        """ЗРК в радиусе поражения запускает ракету."""
        scenario = Scenario(sites=(SamSite(x=3.0, y=3.0),))
        env = UcavEnvironment(scenario)
        env.reset()
        result = env.step(NOOP_ACTION)
        assert env.launched == 1
        assert result.info["launched"] == 1

    def test_launch_count_bounded(self):
        """Пусков не больше, чем окон перезарядки на каждый ЗРК."""
        sites = (
            SamSite(x=2.0, y=2.0, cooldown=1.0),
            SamSite(x=3.0, y=3.0, cooldown=2.0),
        )
        scenario = Scenario(
            sites=sites,
            time_limit=10,
            missile=MissileParams(lifetime=0.5),
        )
        env = UcavEnvironment(scenario)
        env.reset()
        while not env.done:
            env.step(NOOP_ACTION)
        elapsed = env.steps * scenario.decision_substeps * scenario.ucav.dt
        bound = sum(math.floor(elapsed / s.cooldown) + 1 for s in sites)
        assert env.launched > len(sites)
        assert env.launched <= bound

    def test_low_altitude_not_detected(self):
        """Ниже высоты обнаружения пусков нет."""
        scenario = Scenario(
            start=StartPoint(z=0.2),
            sites=(SamSite(x=3.0, y=3.0),),
        )
        env = UcavEnvironment(scenario)
        env.reset()
        env.step(NOOP_ACTION)
        assert env.launched == 0

    def test_replay_is_exact(self):
        """Повтор журнала действий воспроизводит траекторию побитово."""
        scenario = load_scenario("ucav-small")
        env = UcavEnvironment(scenario)
        env.reset()
        rng = np.random.default_rng(11)
        while not env.done:
            env.step(int(rng.integers(N_ACTIONS)))
        replayed = replay_actions(scenario, env.action_log)
        assert trajectory_to_jsonl(replayed) == trajectory_to_jsonl(
            env.trajectory
        )
        assert len(env.trajectory) == len(env.action_log) + 1
