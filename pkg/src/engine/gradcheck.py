"""
Central finite-difference gradient checking.
"""

from typing import Callable, Dict, Sequence

import numpy as np

from .tensor import Tensor


def numeric_gradient(loss_fn: Callable[[], Tensor], target: Tensor, eps: float = 1e-5) -> np.ndarray:
    """(f(x + eps) - f(x - eps)) / (2 eps) for every element of target."""
    if not target.data.flags.c_contiguous:
        target.data = np.ascontiguousarray(target.data)
    grad = np.zeros_like(target.data)
    flat = target.data.reshape(-1)
    out = grad.reshape(-1)
    for i in range(flat.size):
        original = flat[i]
        flat[i] = original + eps
        plus = loss_fn().item()
        flat[i] = original - eps
        minus = loss_fn().item()
        flat[i] = original
        out[i] = (plus - minus) / (2.0 * eps)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """||a - n|| / max(||a||, ||n||), 0 when both vanish."""
    scale = max(np.linalg.norm(analytic), np.linalg.norm(numeric))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(analytic - numeric) / scale)


def check_gradients(loss_fn: Callable[[], Tensor], targets: Sequence[Tensor], eps: float = 1e-5) -> Dict[int, float]:
    """
    Compare backward() against finite differences.

    loss_fn must rebuild the graph from the current target values on every
    call (and draw any randomness from a freshly seeded generator).

    Returns:
        relative error per target index
    """
    for t in targets:
        if t.data.dtype != np.float64:
            raise ValueError("gradient checks need float64 tensors")
    loss = loss_fn()
    loss.backward()
    analytic = [t.grad.copy() for t in targets]
    return {
        i: relative_error(analytic[i], numeric_gradient(loss_fn, t, eps))
        for i, t in enumerate(targets)
    }
