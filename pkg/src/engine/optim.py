"""
Adam optimizer with bias-corrected moments.
"""

from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from ..constants.defaults import ADAM_BETA1, ADAM_BETA2, ADAM_EPS
from .tensor import Tensor


@dataclass
class AdamState:
    lr: float
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    eps: float = ADAM_EPS
    step: int = 0
    m: List[np.ndarray] = field(default_factory=list)
    v: List[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        if not self.lr > 0.0:
            raise ValueError(f"learning rate must be > 0, got {self.lr}")


def adam_step(state: AdamState, params: Sequence[np.ndarray], grads: Sequence[np.ndarray]) -> Sequence[np.ndarray]:
    """
    One Adam update, applied to params in place and returned.

    Moments are created on the first call, shaped like the parameters.
    """
    if len(params) != len(grads):
        raise ValueError(f"{len(params)} parameters but {len(grads)} gradients")
    for p, g in zip(params, grads):
        if p.shape != g.shape:
            raise ValueError(f"parameter shape {p.shape} does not match gradient shape {g.shape}")
    if not state.m:
        state.m = [np.zeros_like(p) for p in params]
        state.v = [np.zeros_like(p) for p in params]
    elif len(state.m) != len(params):
        raise ValueError(f"optimizer state tracks {len(state.m)} parameters, got {len(params)}")

    state.step += 1
    correction1 = 1.0 - state.beta1 ** state.step
    correction2 = 1.0 - state.beta2 ** state.step
    for p, g, m, v in zip(params, grads, state.m, state.v):
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2
        p -= (state.lr * m_hat / (np.sqrt(v_hat) + state.eps)).astype(p.dtype)
    return params


class Adam:
    """Adam over a fixed list of parameter tensors."""

    def __init__(self, params: Sequence[Tensor], lr: float, **kwargs):
        self.params = list(params)
        self.state = AdamState(lr=lr, **kwargs)

    def step(self) -> None:
        grads = [p.grad if p.grad is not None else np.zeros_like(p.data) for p in self.params]
        adam_step(self.state, [p.data for p in self.params], grads)
