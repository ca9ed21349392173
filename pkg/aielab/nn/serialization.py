"""Версионированный бинарный формат DenseNet.

Формат (все числа little-endian)::

    magic       6 байт   b"AIENET"
    version     uint16   FORMAT_VERSION
    n_sizes     uint32   число элементов layer_sizes
    sizes       uint32 × n_sizes
    hidden      uint8    код активации скрытых слоёв
    output      uint8    код выходной активации
    параметры   float64  W0, b0, W1, b1, ... построчно (row-major)

Для одной и той же сети результат побайтово стабилен.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..enums.activation import Activation
from ..exceptions.encoding import CheckpointFormatError
from .dense import DenseNet

MAGIC = b"AIENET"
FORMAT_VERSION = 1

_ACTIVATION_CODES = {
    Activation.RELU: 0,
    Activation.TANH: 1,
    Activation.LINEAR: 2,
    Activation.SOFTMAX: 3,
}
_CODE_ACTIVATIONS = {code: act for act, code in _ACTIVATION_CODES.items()}
_FLOAT = np.dtype("<f8")


def net_to_bytes(net: DenseNet) -> bytes:
    header = [
        MAGIC,
        struct.pack("<HI", FORMAT_VERSION, len(net.layer_sizes)),
        struct.pack(f"<{len(net.layer_sizes)}I", *net.layer_sizes),
        struct.pack(
            "<BB",
            _ACTIVATION_CODES[net.hidden_activation],
            _ACTIVATION_CODES[net.output_activation],
        ),
    ]
    body = [
        np.ascontiguousarray(p, dtype=_FLOAT).tobytes(order="C")
        for p in net.parameters()
    ]
    return b"".join(header + body)


def _read(data: bytes, offset: int, fmt: str) -> tuple[tuple, int]:
    size = struct.calcsize(fmt)
    if offset + size > len(data):
        raise CheckpointFormatError("Неожиданный конец данных сети")
    return struct.unpack_from(fmt, data, offset), offset + size


def net_from_bytes(data: bytes) -> DenseNet:
    """
    Восстанавливает сеть из байтов ``net_to_bytes``.

    Raises:
        CheckpointFormatError: Неверная сигнатура, версия или длина.
    """

    if not data.startswith(MAGIC):
        raise CheckpointFormatError("Неверная сигнатура файла сети")
    offset = len(MAGIC)
    (version, n_sizes), offset = _read(data, offset, "<HI")
    if version != FORMAT_VERSION:
        raise CheckpointFormatError(
            f"Неподдерживаемая версия формата сети: {version}"
        )
    sizes, offset = _read(data, offset, f"<{n_sizes}I")
    (hidden_code, output_code), offset = _read(data, offset, "<BB")
    try:
        hidden = _CODE_ACTIVATIONS[hidden_code]
        output = _CODE_ACTIVATIONS[output_code]
    except KeyError as e:
        raise CheckpointFormatError(f"Неизвестный код активации: {e}") from e

    shapes = []
    for k in range(n_sizes - 1):
        shapes.extend(((sizes[k + 1], sizes[k]), (sizes[k + 1],)))

    expected = offset + sum(int(np.prod(s)) for s in shapes) * _FLOAT.itemsize
    if expected != len(data):
        raise CheckpointFormatError(
            f"Длина данных сети {len(data)}, ожидалась {expected}"
        )

    arrays = []
    for shape in shapes:
        count = int(np.prod(shape))
        arr = np.frombuffer(data, dtype=_FLOAT, count=count, offset=offset)
        arrays.append(arr.reshape(shape).astype(np.float64))
        offset += count * _FLOAT.itemsize

    return DenseNet(
        sizes,
        arrays[0::2],
        arrays[1::2],
        hidden_activation=hidden,
        output_activation=output,
    )


def save_net(net: DenseNet, path: str | Path) -> None:
    Path(path).write_bytes(net_to_bytes(net))


def load_net(path: str | Path) -> DenseNet:
    return net_from_bytes(Path(path).read_bytes())
