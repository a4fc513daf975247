from .model import (MlpModel, forward, hidden_activations, cross_entropy, batch_loss,
                    grad_backprop, predict, accuracy, OUTPUT_CLAMP)
from .training import train_mlp

__all__ = [
    "MlpModel", "forward", "hidden_activations", "cross_entropy", "batch_loss",
    "grad_backprop", "predict", "accuracy", "OUTPUT_CLAMP", "train_mlp",
]
