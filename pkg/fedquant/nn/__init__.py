"""Classificador de escala de mesa: MLP com backprop manual"""

from .mlp import (
    DEFAULT_HIDDEN,
    MlpModel,
    create_mlp,
    evaluate,
    evaluate_with_loss,
    forward,
    loss_and_grads,
)

__all__ = [
    'DEFAULT_HIDDEN',
    'MlpModel',
    'create_mlp',
    'evaluate',
    'evaluate_with_loss',
    'forward',
    'loss_and_grads',
]
