from enum import auto, unique

from .._compat import StrEnum


@unique
class Activation(StrEnum):
    """
    Функции активации слоёв DenseNet.

    `RELU` и `TANH` допустимы для скрытых слоёв,
    `LINEAR` и `SOFTMAX` для выходного.
    """

    RELU = auto()
    TANH = auto()
    LINEAR = auto()
    SOFTMAX = auto()


HIDDEN_ACTIVATIONS = frozenset({Activation.RELU, Activation.TANH})
OUTPUT_ACTIVATIONS = frozenset({Activation.LINEAR, Activation.SOFTMAX})
