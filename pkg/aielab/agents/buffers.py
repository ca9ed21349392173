from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ..exceptions.config import ConfigError, DimensionMismatch
from ..loggers import logger_agent

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    Array = NDArray[np.float64]


class SumTree:
    """
    Дерево сумм для пропорционального сэмплирования.

    Число листьев дополняется до степени двойки; после каждого
    изменения листа родители пересчитываются как сумма потомков,
    поэтому ошибка округления не накапливается.
    """

    __slots__ = ("_capacity", "_leaves", "_tree")

    def __init__(self, capacity: int) -> None:
        if capacity <= 0:
            raise ConfigError("Ёмкость дерева сумм должна быть положительной")
        self._capacity = capacity
        self._leaves = 1 << (capacity - 1).bit_length()
        self._tree = np.zeros(2 * self._leaves)

    @property
    def capacity(self) -> int:
        return self._capacity

    @property
    def total(self) -> float:
        return float(self._tree[1])

    def __getitem__(self, index: int) -> float:
        return float(self._tree[self._leaves + index])

    def priorities(self, count: int | None = None) -> Array:
        end = self._capacity if count is None else count
        return self._tree[self._leaves : self._leaves + end].copy()

    def update(self, index: int, priority: float) -> None:
        if not 0 <= index < self._capacity:
            raise IndexError(index)
        if not priority >= 0.0:
            raise ValueError(f"Отрицательный приоритет: {priority!r}")
        node = self._leaves + index
        self._tree[node] = priority
        node //= 2
        while node >= 1:
            self._tree[node] = self._tree[2 * node] + self._tree[2 * node + 1]
            node //= 2

    def rebuild(self, priorities: ArrayLike) -> None:
        """Заполняет листья целиком и пересчитывает все суммы."""
        values = np.asarray(priorities, dtype=np.float64)
        if values.size > self._capacity or np.any(values < 0.0):
            raise ValueError("Некорректный массив приоритетов")
        self._tree[:] = 0.0
        self._tree[self._leaves : self._leaves + values.size] = values
        width = self._leaves // 2
        while width >= 1:
            level = self._tree[2 * width : 4 * width]
            self._tree[width : 2 * width] = level[0::2] + level[1::2]
            width //= 2

    def find(self, value: float, limit: int | None = None) -> int:
        """
        Индекс листа, в чей префиксный интервал попадает ``value``.

        Args:
            value: Число из ``[0, total)``.
            limit: Число заполненных листьев; результат не превышает
                ``limit - 1``.
        """

        node = 1
        while node < self._leaves:
            left = 2 * node
            if value < self._tree[left]:
                node = left
            else:
                value -= self._tree[left]
                node = left + 1
        index = node - self._leaves
        upper = (self._capacity if limit is None else limit) - 1
        return min(index, upper)

    def sample(
        self,
        batch_size: int,
        rng: np.random.Generator,
        limit: int | None = None,
    ) -> NDArray[np.int64]:
        values = rng.random(batch_size) * self.total
        return np.array(
            [self.find(float(v), limit) for v in values], dtype=np.int64
        )


@dataclass(slots=True, frozen=True, eq=False)
class Transition:
    """Запись ``(s_t, a_t, R_t)`` буфера самоимитации."""

    state: Array
    action: int
    ret: float


@dataclass(slots=True, frozen=True, eq=False)
class FeatureRecord:
    """Пара ``(φ(s'), f(φ(s')))``: признак и выход замороженной цели."""

    feature: Array
    target: Array


class _RingStorage:
    """Кольцевое хранилище, массивы выделяются при первой вставке."""

    def __init__(self, capacity: int) -> None:
        if capacity <= 0:
            raise ConfigError("Ёмкость буфера должна быть положительной")
        self.capacity = capacity
        self._next = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def _slot(self) -> int:
        slot = self._next
        if self._size == self.capacity:
            logger_agent.debug(
                "%s: вытеснена запись %d", type(self).__name__, slot
            )
        self._next = (self._next + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)
        return slot

    @property
    def pointers(self) -> tuple[int, int]:
        """Позиция следующей записи и текущий размер."""
        return self._next, self._size

    def restore_pointers(self, next_slot: int, size: int) -> None:
        if not (0 <= next_slot < self.capacity and 0 <= size <= self.capacity):
            raise ValueError("Некорректные указатели буфера")
        self._next = next_slot
        self._size = size

    def _chronological(self) -> NDArray[np.int64]:
        """Индексы слотов от старых записей к новым."""
        if self._size < self.capacity:
            return np.arange(self._size)
        return (np.arange(self.capacity) + self._next) % self.capacity


class SilBuffer(_RingStorage):
    """
    Буфер самоимитации с приоритетами ``(R − V(s))₊ + ε``.

    При переполнении вытесняется самая старая запись (FIFO).
    """

    def __init__(self, capacity: int, priority_eps: float = 1e-5) -> None:
        super().__init__(capacity)
        if priority_eps <= 0.0:
            raise ConfigError("priority_eps должен быть положительным")
        self.priority_eps = priority_eps
        self.tree = SumTree(capacity)
        self.states: Array | None = None
        self.actions = np.zeros(capacity, dtype=np.int64)
        self.returns = np.zeros(capacity)

    def priority(self, advantage: float) -> float:
        return max(float(advantage), 0.0) + self.priority_eps

    def add(self, transition: Transition, advantage: float) -> int:
        state = np.asarray(transition.state, dtype=np.float64)
        if self.states is None:
            self.states = np.zeros((self.capacity, state.size))
        elif state.size != self.states.shape[1]:
            raise DimensionMismatch(
                f"Состояние длины {state.size}, буфер хранит "
                f"{self.states.shape[1]}"
            )
        slot = self._slot()
        self.states[slot] = state
        self.actions[slot] = transition.action
        self.returns[slot] = transition.ret
        self.tree.update(slot, self.priority(advantage))
        return slot

    def sample(
        self, batch_size: int, rng: np.random.Generator
    ) -> NDArray[np.int64]:
        if len(self) == 0:
            raise IndexError("Буфер самоимитации пуст")
        return self.tree.sample(batch_size, rng, limit=len(self))

    def update_priorities(
        self, indices: ArrayLike, advantages: ArrayLike
    ) -> None:
        for index, advantage in zip(
            np.asarray(indices), np.asarray(advantages, dtype=np.float64)
        ):
            self.tree.update(int(index), self.priority(float(advantage)))

    def transitions(self) -> list[Transition]:
        if self.states is None:
            return []
        return [
            Transition(
                state=self.states[i].copy(),
                action=int(self.actions[i]),
                ret=float(self.returns[i]),
            )
            for i in self._chronological()
        ]


class FeatureBuffer(_RingStorage):
    """
    Буфер признаков для обучения предиктора RND.

    Хранит признак и выход замороженной целевой сети,
    сэмплирование равномерное.
    """

    def __init__(self, capacity: int) -> None:
        super().__init__(capacity)
        self.features: Array | None = None
        self.targets: Array | None = None

    def add(self, record: FeatureRecord) -> None:
        feature = np.asarray(record.feature, dtype=np.float64)
        target = np.asarray(record.target, dtype=np.float64)
        if self.features is None or self.targets is None:
            self.features = np.zeros((self.capacity, feature.size))
            self.targets = np.zeros((self.capacity, target.size))
        slot = self._slot()
        self.features[slot] = feature
        self.targets[slot] = target

    def batch(self, positions: ArrayLike) -> tuple[Array, Array]:
        """
        Признаки и цели по хронологическим позициям.

        Позиция 0 это самая старая запись, ``len(self) - 1`` самая
        новая. Копируются только запрошенные строки.
        """

        if self.features is None or self.targets is None:
            raise IndexError("Буфер признаков пуст")
        index = np.asarray(positions, dtype=np.int64)
        if np.any(index < 0) or np.any(index >= len(self)):
            raise IndexError("Позиция вне буфера признаков")
        if len(self) == self.capacity:
            index = (index + self._next) % self.capacity
        return self.features[index], self.targets[index]
