"""Тесты полносвязной сети, Adam, проверки градиентов и сэмплирования."""

import math

import numpy as np
import pytest

from aielab.enums.activation import Activation
from aielab.exceptions import (
    CheckpointFormatError,
    ConfigError,
    DimensionMismatch,
    NumericalError,
)
from aielab.nn import (
    AdamState,
    DenseNet,
    Gradients,
    LinearLoss,
    NegativeLogLikelihood,
    SquaredLoss,
    adam_step,
    clip_by_global_norm,
    gradcheck,
    net_from_bytes,
    net_to_bytes,
    sample_categorical,
)
from aielab.nn.serialization import load_net, save_net


def _linear(weights, biases):
    w = np.asarray(weights, dtype=np.float64)
    return DenseNet(
        [w.shape[1], w.shape[0]],
        [w],
        [np.asarray(biases, dtype=np.float64)],
    )


class TestForward:
    """Тесты прямого прохода."""

    def test_identity_layer(self):
        """Единичные веса и нулевое смещение возвращают вход."""
        net = _linear(np.eye(2), np.zeros(2))
        assert net.forward([1.0, 2.0]) == pytest.approx([1.0, 2.0])

    def test_softmax_zero_logits_uniform(self):
        """Нулевые логиты дают равномерное распределение."""
        net = DenseNet(
            [3, 4],
            [np.zeros((4, 3))],
            [np.zeros(4)],
            output_activation=Activation.SOFTMAX,
        )
        assert net.forward([0.3, -1.0, 2.0]) == pytest.approx([0.25] * 4)

    def test_tanh_matches_scalar_reference(self):
        """Двухслойная tanh-сеть совпадает с поэлементным расчётом."""
        net = DenseNet.initialize([2, 3, 1], np.random.default_rng(0))
        x = (0.5, -0.5)

        w0, w1 = net.weights
        b0, b1 = net.biases
        hidden = []
        for j in range(3):
            z = b0[j]
            for i in range(2):
                z += w0[j][i] * x[i]
            hidden.append(math.tanh(z))
        expected = b1[0]
        for j in range(3):
            expected += w1[0][j] * hidden[j]

        assert net.forward(x)[0] == pytest.approx(expected, abs=1e-12)

    def test_batch_matches_rows(self, tanh_net, rng):
        """Батч обрабатывается построчно."""
        batch = rng.normal(size=(4, 3))
        out = tanh_net.forward(batch)
        assert out.shape == (4, 2)
        for row, expected in zip(batch, out):
            assert tanh_net.forward(row) == pytest.approx(expected)

    def test_forward_is_pure(self, tanh_net):
        """Повторный вызов с тем же входом даёт тот же выход."""
        x = np.array([0.1, 0.2, 0.3])
        assert np.array_equal(tanh_net.forward(x), tanh_net.forward(x))

    def test_softmax_is_distribution(self, softmax_net, rng):
        """Выход softmax положителен и суммируется в единицу."""
        out = softmax_net.forward(rng.normal(size=(10, 3)) * 20.0)
        assert np.all(out > 0.0)
        assert out.sum(axis=1) == pytest.approx(np.ones(10), abs=1e-6)

    def test_dimension_mismatch(self, tanh_net):
        """Вход неверной длины вызывает DimensionMismatch."""
        with pytest.raises(DimensionMismatch):
            tanh_net.forward([1.0, 2.0])

    def test_dimension_mismatch_is_config_error(self, tanh_net):
        """DimensionMismatch является ошибкой конфигурации."""
        with pytest.raises(ConfigError):
            tanh_net.forward(np.zeros(7))

    def test_non_finite_output(self):
        """Нечисловой выход вызывает NumericalError."""
        net = _linear(np.eye(2), np.zeros(2))
        with pytest.raises(NumericalError, match="forward"):
            net.forward([np.inf, 0.0])

    def test_invalid_hidden_activation(self, rng):
        """SOFTMAX недопустим для скрытых слоёв."""
        with pytest.raises(ConfigError):
            DenseNet.initialize(
                [2, 3, 1], rng, hidden_activation=Activation.SOFTMAX
            )

    def test_bad_layer_sizes(self, rng):
        """Нужно хотя бы два положительных размера слоя."""
        with pytest.raises(ConfigError):
            DenseNet.initialize([3], rng)
        with pytest.raises(ConfigError):
            DenseNet.initialize([3, 0, 1], rng)


class TestBackward:
    """Тесты обратного распространения."""

    def test_linear_gradient(self):
        """Для потери = выход градиент весов равен входу, смещения 1."""
        net = _linear([[0.3, -0.2]], [0.1])
        grads = net.backward([1.0, 0.0], [1.0])
        assert grads.weights[0] == pytest.approx(np.array([[1.0, 0.0]]))
        assert grads.biases[0] == pytest.approx(np.array([1.0]))

    def test_zero_output_grad(self, tanh_net):
        """Нулевой градиент выхода даёт нулевые градиенты."""
        grads = tanh_net.backward([0.5, -0.5, 1.0], np.zeros(2))
        assert grads.is_zero()

    def test_batch_gradient_is_sum(self, tanh_net, rng):
        """Градиент батча равен сумме градиентов строк."""
        batch = rng.normal(size=(3, 3))
        out_grad = rng.normal(size=(3, 2))
        total = tanh_net.backward(batch, out_grad)
        summed = Gradients.zeros_like(tanh_net)
        for x, g in zip(batch, out_grad):
            summed = summed + tanh_net.backward(x, g)
        for a, b in zip(total.arrays(), summed.arrays()):
            assert a == pytest.approx(b)

    def test_non_finite_gradient_names_layer(self):
        """Нечисловой градиент вызывает NumericalError с номером слоя."""
        net = _linear(np.eye(2), np.zeros(2))
        with pytest.raises(NumericalError) as exc:
            net.backward([1.0, 1.0], [np.nan, 0.0])
        assert exc.value.layer == 0
        assert "layer=0" in str(exc.value)

    def test_output_grad_shape_checked(self, tanh_net):
        """Градиент выхода неверной формы вызывает DimensionMismatch."""
        with pytest.raises(DimensionMismatch):
            tanh_net.backward([0.0, 0.0, 0.0], [1.0, 2.0, 3.0])


class TestGradcheck:
    """Тесты сравнения с конечными разностями."""

    def test_linear_squared_loss(self):
        """Линейная сеть с квадратичной потерей: ошибка < 1e-6."""
        net = _linear([[0.4, -0.3, 0.2], [0.1, 0.5, -0.6]], [0.2, -0.1])
        loss = SquaredLoss.of([3.0, -2.0])
        assert gradcheck(net, [0.5, -1.0, 2.0], loss) < 1e-6

    def test_tanh_squared_loss(self, tanh_net):
        """tanh-сеть: ошибка < 1e-4."""
        loss = SquaredLoss.of([0.7, -1.3])
        assert gradcheck(tanh_net, [0.5, -1.0, 2.0], loss) < 1e-4

    def test_softmax_log_likelihood(self, softmax_net):
        """softmax с логарифмическим правдоподобием: ошибка < 1e-4."""
        loss = NegativeLogLikelihood(index=1)
        assert gradcheck(softmax_net, [0.5, -1.0, 2.0], loss) < 1e-4

    def test_batch_input(self, tanh_net, rng):
        """Проверка градиентов на батче."""
        x = rng.uniform(0.5, 1.5, size=(4, 3))
        loss = LinearLoss.of(rng.uniform(0.5, 1.5, size=(4, 2)))
        assert gradcheck(tanh_net, x, loss) < 1e-4

    @pytest.mark.parametrize(
        ("sizes", "output_scale"),
        [
            ((80, 128, 128, 5), 0.1),
            ((329, 128, 128, 29), 0.1),
            ((80, 64, 64, 16), 1.0),
            ((33, 64, 64, 16), 1.0),
        ],
        ids=["grid-policy", "ucav-policy", "grid-rnd", "ucav-rnd"],
    )
    def test_default_architectures(self, sizes, output_scale):
        """Архитектуры по умолчанию: 10 случайных наборов, ошибка < 1e-4."""
        for draw in range(10):
            rng = np.random.default_rng(draw)
            net = DenseNet.initialize(sizes, rng, output_scale=output_scale)
            x = rng.uniform(0.5, 1.5, size=sizes[0])
            loss = LinearLoss.of(rng.uniform(0.5, 1.5, size=sizes[-1]))
            error = gradcheck(net, x, loss, max_params=40, rng=rng)
            assert error < 1e-4, f"draw {draw}: {error}"

    def test_net_not_modified(self, tanh_net):
        """gradcheck не меняет параметры сети."""
        before = [p.copy() for p in tanh_net.parameters()]
        gradcheck(tanh_net, [0.1, 0.2, 0.3], SquaredLoss.of([0.0, 0.0]))
        for a, b in zip(before, tanh_net.parameters()):
            assert np.array_equal(a, b)


class TestAdam:
    """Тесты оптимизатора Adam."""

    def test_zero_gradient_keeps_parameters(self, tanh_net):
        """Нулевой градиент не меняет параметры, счётчик растёт."""
        state = AdamState.for_net(tanh_net, lr=0.1)
        new_net, new_state = adam_step(
            tanh_net, Gradients.zeros_like(tanh_net), state
        )
        for a, b in zip(tanh_net.parameters(), new_net.parameters()):
            assert np.array_equal(a, b)
        assert new_state.step_count == 1
        assert state.step_count == 0

    def test_first_step_closed_form(self):
        """w=0, g=1, lr=0.1: после первого шага w ≈ −0.1."""
        net = _linear([[0.0]], [0.0])
        grads = Gradients(
            weights=[np.array([[1.0]])], biases=[np.array([0.0])]
        )
        new_net, _ = adam_step(net, grads, AdamState.for_net(net, lr=0.1))
        assert new_net.weights[0][0, 0] == pytest.approx(-0.1, rel=1e-6)
        assert new_net.biases[0][0] == 0.0

    def test_identical_sequences_bit_identical(self, rng):
        """Одинаковые последовательности градиентов дают одинаковые сети."""
        net_a = DenseNet.initialize([3, 4, 2], np.random.default_rng(5))
        net_b = DenseNet.initialize([3, 4, 2], np.random.default_rng(5))
        state_a = AdamState.for_net(net_a, lr=1e-2)
        state_b = AdamState.for_net(net_b, lr=1e-2)
        for _ in range(5):
            x = rng.normal(size=3)
            g = rng.normal(size=2)
            net_a, state_a = adam_step(net_a, net_a.backward(x, g), state_a)
            net_b, state_b = adam_step(net_b, net_b.backward(x, g), state_b)
        for a, b in zip(net_a.parameters(), net_b.parameters()):
            assert np.array_equal(a, b)

    def test_training_decreases_loss(self, tanh_net):
        """Обучение на одной паре монотонно снижает потерю."""
        x = np.array([0.5, -1.0, 2.0])
        loss = SquaredLoss.of([0.7, -1.3])
        net, state = tanh_net, AdamState.for_net(tanh_net, lr=1e-3)
        values = []
        for _ in range(100):
            out = net.forward(x)
            values.append(loss.value(out))
            net, state = adam_step(net, net.backward(x, loss.grad(out)), state)
        rises = sum(b > a for a, b in zip(values, values[1:]))
        assert rises <= 5
        assert values[-1] < values[0]

    def test_shape_mismatch(self, tanh_net, rng):
        """Градиенты другой сети вызывают DimensionMismatch."""
        other = DenseNet.initialize([3, 6, 2], rng)
        with pytest.raises(DimensionMismatch):
            adam_step(
                tanh_net,
                Gradients.zeros_like(other),
                AdamState.for_net(tanh_net),
            )


class TestClipByGlobalNorm:
    """Тесты обрезки нормы градиента."""

    def _grads(self):
        return Gradients(weights=[np.array([[3.0]])], biases=[np.array([4.0])])

    def test_clips_to_max_norm(self):
        """Норма 5 обрезается до 1."""
        clipped, norm = clip_by_global_norm(self._grads(), 1.0)
        assert norm == pytest.approx(5.0)
        assert clipped.global_norm() == pytest.approx(1.0)

    def test_none_disables(self):
        """max_norm=None возвращает градиенты без изменений."""
        grads = self._grads()
        clipped, norm = clip_by_global_norm(grads, None)
        assert clipped is grads
        assert norm == pytest.approx(5.0)


class TestSampleCategorical:
    """Тесты выбора действия."""

    def test_degenerate_distribution(self, rng):
        """(1, 0, 0) всегда даёт 0."""
        draws = {sample_categorical([1.0, 0.0, 0.0], rng) for _ in range(100)}
        assert draws == {0}

    def test_frequency(self, rng):
        """(0.5, 0.5): частота индекса 0 в [0.49, 0.51] на 100 000 выборках."""
        draws = [sample_categorical([0.5, 0.5], rng) for _ in range(100_000)]
        frequency = draws.count(0) / len(draws)
        assert 0.49 <= frequency <= 0.51

    def test_same_seed_same_sequence(self):
        """Один seed даёт одну и ту же последовательность."""
        probs = [0.2, 0.3, 0.5]
        a = np.random.default_rng(7)
        b = np.random.default_rng(7)
        assert [sample_categorical(probs, a) for _ in range(50)] == [
            sample_categorical(probs, b) for _ in range(50)
        ]

    @pytest.mark.parametrize(
        "probs",
        [[0.5, 0.6], [-0.1, 1.1], [np.nan, 1.0], []],
        ids=["sum", "negative", "nan", "empty"],
    )
    def test_invalid_distribution(self, probs, rng):
        """Некорректное распределение вызывает NumericalError."""
        with pytest.raises(NumericalError):
            sample_categorical(probs, rng)


class TestSerialization:
    """Тесты двоичного формата сети."""

    def test_bytes_preserve_network(self, softmax_net):
        """Параметры и активации сохраняются побитово."""
        restored = net_from_bytes(net_to_bytes(softmax_net))
        assert restored.layer_sizes == softmax_net.layer_sizes
        assert restored.output_activation is Activation.SOFTMAX
        for a, b in zip(softmax_net.parameters(), restored.parameters()):
            assert np.array_equal(a, b)

    def test_file(self, tanh_net, tmp_path):
        """save_net и load_net работают через файл."""
        path = tmp_path / "net.bin"
        save_net(tanh_net, path)
        assert net_to_bytes(load_net(path)) == net_to_bytes(tanh_net)

    def test_bad_magic(self, tanh_net):
        """Чужая сигнатура вызывает CheckpointFormatError."""
        data = b"XXXXXX" + net_to_bytes(tanh_net)[6:]
        with pytest.raises(CheckpointFormatError):
            net_from_bytes(data)

    def test_truncated(self, tanh_net):
        """Обрезанные данные вызывают CheckpointFormatError."""
        with pytest.raises(CheckpointFormatError):
            net_from_bytes(net_to_bytes(tanh_net)[:-8])
