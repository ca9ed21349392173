from .dense import DenseNet, Gradients, backward, forward
from .gradcheck import gradcheck
from .losses import LinearLoss, NegativeLogLikelihood, ScalarLoss, SquaredLoss
from .optim import AdamState, adam_step, clip_by_global_norm
from .sampling import sample_categorical
from .serialization import load_net, net_from_bytes, net_to_bytes, save_net

__all__ = [
    "AdamState",
    "DenseNet",
    "Gradients",
    "LinearLoss",
    "NegativeLogLikelihood",
    "ScalarLoss",
    "SquaredLoss",
    "adam_step",
    "backward",
    "clip_by_global_norm",
    "forward",
    "gradcheck",
    "load_net",
    "net_from_bytes",
    "net_to_bytes",
    "sample_categorical",
    "save_net",
]
