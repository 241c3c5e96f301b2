# Tensor Engine
#
# numpy-backed reverse-mode differentiation, the layers used by the
# autoencoder and the attention classifier, and Adam.

from .tensor import Tensor, tensor
from .functional import (
    conv1d,
    conv2d,
    conv2d_transpose,
    cross_entropy,
    dense,
    dropout,
    elementwise_mul,
    global_avg_pool,
    log_softmax,
    relu,
    sigmoid,
    softmax,
    upsample_nearest,
)
from .layers import Module, Parameter, Conv1d, Conv2d, ConvTranspose2d, Dense, Dropout
from .optim import Adam, AdamState, adam_step
from .gradcheck import check_gradients, numeric_gradient, relative_error
from .rng import generator, spawn

__all__ = [
    'Tensor',
    'tensor',
    'conv1d',
    'conv2d',
    'conv2d_transpose',
    'cross_entropy',
    'dense',
    'dropout',
    'elementwise_mul',
    'global_avg_pool',
    'log_softmax',
    'relu',
    'sigmoid',
    'softmax',
    'upsample_nearest',
    'Module',
    'Parameter',
    'Conv1d',
    'Conv2d',
    'ConvTranspose2d',
    'Dense',
    'Dropout',
    'Adam',
    'AdamState',
    'adam_step',
    'check_gradients',
    'numeric_gradient',
    'relative_error',
    'generator',
    'spawn',
]
