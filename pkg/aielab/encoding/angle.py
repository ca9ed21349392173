from __future__ import annotations

import math

import numpy as np

from .ecv import EcvAxis, EcvSpec, EncodedVector, ecv_encode_point

ANGLE_BINS = 10


def angle_spec(bins: int = ANGLE_BINS, name: str = "angle") -> EcvSpec:
    """Две оси ``[-1, 1]`` для точки ``(cos θ, sin θ)``."""
    return EcvSpec(
        axes=(
            EcvAxis(name=f"{name}.cos", minimum=-1.0, maximum=1.0, bins=bins),
            EcvAxis(name=f"{name}.sin", minimum=-1.0, maximum=1.0, bins=bins),
        )
    )


def encode_angle(theta: float, spec: EcvSpec | None = None) -> EncodedVector:
    """
    Кодирует угол точкой единичной окружности.

    Угол приводится по модулю 2π, затем ``(cos θ, sin θ)``
    кодируется ECV на осях ``[-1, 1]``. Длина результата
    ``2 * bins``.
    """

    spec = spec or angle_spec()
    wrapped = math.fmod(theta, 2.0 * math.pi)
    # cos/sin могут выйти за [-1, 1] на последнем ulp
    point = (
        float(np.clip(math.cos(wrapped), -1.0, 1.0)),
        float(np.clip(math.sin(wrapped), -1.0, 1.0)),
    )
    return ecv_encode_point(point, spec)
