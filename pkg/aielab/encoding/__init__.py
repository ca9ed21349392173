from .angle import ANGLE_BINS, angle_spec, encode_angle
from .ecv import (
    EcvAxis,
    EcvSpec,
    EncodedVector,
    ecv_decode,
    ecv_decode_values,
    ecv_encode_point,
    ecv_encode_scalar,
)

__all__ = [
    "ANGLE_BINS",
    "EcvAxis",
    "EcvSpec",
    "EncodedVector",
    "angle_spec",
    "ecv_decode",
    "ecv_decode_values",
    "ecv_encode_point",
    "ecv_encode_scalar",
    "encode_angle",
]
