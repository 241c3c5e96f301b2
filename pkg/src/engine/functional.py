"""
Differentiable operations.

Convolutions use the cross-correlation convention (kernels are not
flipped) and are computed over sliding-window views of the padded input.

Layouts:
    conv2d            x (N, C, H, W), w (O, C, kh, kw)
    conv2d_transpose  x (N, C, H, W), w (C, O, kh, kw)
    conv1d            x (N, C, L) or (C, L), w (O, C, k)
    dense             x (..., in), w (out, in)
"""

from typing import Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import expit, logsumexp

from .tensor import Tensor


# ----------------------------------------------------------------------
# Window helpers
# ----------------------------------------------------------------------

def _pad2d(x: np.ndarray, padding: int) -> np.ndarray:
    if padding == 0:
        return x
    return np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding)))


def _windows2d(xp: np.ndarray, kh: int, kw: int, stride: int) -> np.ndarray:
    """(N, C, Hp, Wp) -> (N, C, Ho, Wo, kh, kw) strided view."""
    return sliding_window_view(xp, (kh, kw), axis=(2, 3))[:, :, ::stride, ::stride]


def _scatter2d(target: np.ndarray, cols: np.ndarray, stride: int) -> None:
    """
    Add (N, Ho, Wo, C, kh, kw) window contributions into target (N, C, Hp, Wp).
    """
    _, ho, wo, _, kh, kw = cols.shape
    for i in range(kh):
        for j in range(kw):
            target[:, :, i:i + stride * ho:stride, j:j + stride * wo:stride] += \
                cols[:, :, :, :, i, j].transpose(0, 3, 1, 2)


def _check_conv2d(x: Tensor, w: Tensor, padding: int, in_axis: int):
    if x.ndim != 4 or w.ndim != 4:
        raise ValueError(f"conv2d expects 4-D input and kernels, got {x.shape} and {w.shape}")
    if x.shape[1] != w.shape[in_axis]:
        raise ValueError(f"channel mismatch: input has {x.shape[1]}, kernels expect {w.shape[in_axis]}")
    if padding < 0:
        raise ValueError(f"padding must be >= 0, got {padding}")


def _add_channel_bias(out: Tensor, b: Optional[Tensor], channel_axis: int = 1) -> Tensor:
    if b is None:
        return out
    if b.shape != (out.shape[channel_axis],):
        raise ValueError(f"bias shape {b.shape} does not match {out.shape[channel_axis]} channels")
    shape = [1] * out.ndim
    shape[channel_axis] = -1
    return out + b.reshape(tuple(shape))


# ----------------------------------------------------------------------
# Convolutions
# ----------------------------------------------------------------------

def conv2d(x: Tensor, w: Tensor, b: Optional[Tensor] = None, stride: int = 1, padding: int = 0) -> Tensor:
    """2-D cross-correlation, output (N, O, Ho, Wo)."""
    _check_conv2d(x, w, padding, in_axis=1)
    kh, kw = w.shape[2], w.shape[3]
    xp = _pad2d(x.data, padding)
    if kh > xp.shape[2] or kw > xp.shape[3]:
        raise ValueError(f"kernel {kh}x{kw} larger than padded input {xp.shape[2]}x{xp.shape[3]}")
    win = _windows2d(xp, kh, kw, stride)
    values = np.tensordot(win, w.data, axes=([1, 4, 5], [1, 2, 3])).transpose(0, 3, 1, 2)
    out = Tensor(np.ascontiguousarray(values), (x, w), 'conv2d')

    def _backward():
        g = out.grad
        if w.requires_grad:
            w.grad += np.tensordot(g, win, axes=([0, 2, 3], [0, 2, 3]))
        if x.requires_grad:
            gxp = np.zeros(xp.shape, dtype=x.data.dtype)
            _scatter2d(gxp, np.tensordot(g, w.data, axes=([1], [0])), stride)
            h, wd = x.shape[2], x.shape[3]
            x.grad += gxp[:, :, padding:padding + h, padding:padding + wd]

    out._backward = _backward
    return _add_channel_bias(out, b)


def conv2d_transpose(
    x: Tensor,
    w: Tensor,
    b: Optional[Tensor] = None,
    stride: int = 2,
    padding: int = 0,
    output_padding: int = 0,
) -> Tensor:
    """
    Transposed 2-D convolution (the adjoint of conv2d).

    Output size per axis: (H - 1) * stride - 2 * padding + k + output_padding.
    """
    _check_conv2d(x, w, padding, in_axis=0)
    n, _, h, wd = x.shape
    kh, kw = w.shape[2], w.shape[3]
    full_h = (h - 1) * stride + kh + output_padding
    full_w = (wd - 1) * stride + kw + output_padding
    out_h, out_w = full_h - 2 * padding, full_w - 2 * padding
    if out_h < 1 or out_w < 1:
        raise ValueError(f"padding {padding} leaves no output for input {h}x{wd}")

    full = np.zeros((n, w.shape[1], full_h, full_w), dtype=np.result_type(x.data, w.data))
    _scatter2d(full, np.tensordot(x.data, w.data, axes=([1], [0])), stride)
    out = Tensor(full[:, :, padding:padding + out_h, padding:padding + out_w].copy(), (x, w), 'conv2d_transpose')

    def _backward():
        gfull = np.zeros(full.shape, dtype=full.dtype)
        gfull[:, :, padding:padding + out_h, padding:padding + out_w] = out.grad
        win = _windows2d(gfull, kh, kw, stride)[:, :, :h, :wd]
        if x.requires_grad:
            x.grad += np.tensordot(win, w.data, axes=([1, 4, 5], [1, 2, 3])).transpose(0, 3, 1, 2)
        if w.requires_grad:
            w.grad += np.tensordot(x.data, win, axes=([0, 2, 3], [0, 2, 3]))

    out._backward = _backward
    return _add_channel_bias(out, b)


def conv1d(x: Tensor, w: Tensor, b: Optional[Tensor] = None, stride: int = 1, padding: int = 0) -> Tensor:
    """
    1-D cross-correlation over time, u_c = sum_s v_c^s * x^s.

    x is (C', L') or (N, C', L'); w is (C, C', k). Bias is optional and
    left out by the attention blocks.
    """
    if x.ndim == 2:
        out = conv1d(x.reshape((1,) + x.shape), w, b, stride, padding)
        return out.reshape(out.shape[1:])
    if x.ndim != 3 or w.ndim != 3:
        raise ValueError(f"conv1d expects (N, C, L) input and (O, C, k) kernels, got {x.shape} and {w.shape}")
    if x.shape[1] != w.shape[1]:
        raise ValueError(f"channel mismatch: input has {x.shape[1]}, kernels expect {w.shape[1]}")
    k = w.shape[2]
    if k > x.shape[2] + 2 * padding:
        raise ValueError(f"kernel size {k} exceeds padded length {x.shape[2] + 2 * padding}")

    xp = np.pad(x.data, ((0, 0), (0, 0), (padding, padding))) if padding else x.data
    win = sliding_window_view(xp, k, axis=2)[:, :, ::stride, :]
    values = np.tensordot(win, w.data, axes=([1, 3], [1, 2])).transpose(0, 2, 1)
    out = Tensor(np.ascontiguousarray(values), (x, w), 'conv1d')

    def _backward():
        g = out.grad
        if w.requires_grad:
            w.grad += np.tensordot(g, win, axes=([0, 2], [0, 2]))
        if x.requires_grad:
            cols = np.tensordot(g, w.data, axes=([1], [0]))      # (N, L, C', k)
            length = cols.shape[1]
            gxp = np.zeros(xp.shape, dtype=x.data.dtype)
            for i in range(k):
                gxp[:, :, i:i + stride * length:stride] += cols[:, :, :, i].transpose(0, 2, 1)
            x.grad += gxp[:, :, padding:padding + x.shape[2]]

    out._backward = _backward
    return _add_channel_bias(out, b)


def upsample_nearest(x: Tensor, factor: int = 2) -> Tensor:
    """Repeat each pixel factor x factor times, (N, C, H, W) -> (N, C, fH, fW)."""
    if x.ndim != 4:
        raise ValueError(f"upsample expects (N, C, H, W), got {x.shape}")
    values = np.repeat(np.repeat(x.data, factor, axis=2), factor, axis=3)
    out = Tensor(values, (x,), 'upsample')

    def _backward():
        if x.requires_grad:
            n, c, h, wd = x.shape
            x.grad += out.grad.reshape(n, c, h, factor, wd, factor).sum(axis=(3, 5))

    out._backward = _backward
    return out


# ----------------------------------------------------------------------
# Dense and pointwise
# ----------------------------------------------------------------------

def dense(x: Tensor, w: Tensor, b: Optional[Tensor] = None) -> Tensor:
    """y = x W^T + b over the last axis of x."""
    if w.ndim != 2 or x.shape[-1] != w.shape[1]:
        raise ValueError(f"dense shape mismatch: input {x.shape}, weights {w.shape}")
    out = Tensor(x.data @ w.data.T, (x, w), 'dense')
    lead = tuple(range(x.ndim - 1))

    def _backward():
        g = out.grad
        if x.requires_grad:
            x.grad += g @ w.data
        if w.requires_grad:
            w.grad += np.tensordot(g, x.data, axes=(lead, lead)) if lead else np.outer(g, x.data)

    out._backward = _backward
    if b is None:
        return out
    if b.shape != (w.shape[0],):
        raise ValueError(f"bias shape {b.shape} does not match {w.shape[0]} outputs")
    return out + b


def relu(x: Tensor) -> Tensor:
    out = Tensor(np.maximum(x.data, 0), (x,), 'relu')

    def _backward():
        if x.requires_grad:
            x.grad += out.grad * (x.data > 0)

    out._backward = _backward
    return out


def sigmoid(x: Tensor) -> Tensor:
    s = expit(x.data)
    out = Tensor(s, (x,), 'sigmoid')

    def _backward():
        if x.requires_grad:
            x.grad += out.grad * s * (1.0 - s)

    out._backward = _backward
    return out


def softmax(x: Tensor, axis: int = -1) -> Tensor:
    """Shift-stabilized softmax; outputs are positive and sum to 1 along axis."""
    shifted = x.data - x.data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    s = e / e.sum(axis=axis, keepdims=True)
    out = Tensor(s, (x,), 'softmax')

    def _backward():
        if x.requires_grad:
            g = out.grad
            x.grad += s * (g - (g * s).sum(axis=axis, keepdims=True))

    out._backward = _backward
    return out


def log_softmax(x: Tensor, axis: int = -1) -> Tensor:
    values = x.data - logsumexp(x.data, axis=axis, keepdims=True)
    out = Tensor(values, (x,), 'log_softmax')

    def _backward():
        if x.requires_grad:
            g = out.grad
            x.grad += g - np.exp(values) * g.sum(axis=axis, keepdims=True)

    out._backward = _backward
    return out


def cross_entropy(logits: Tensor, labels) -> Tensor:
    """
    Mean softmax cross-entropy.

    logits is (K,) with an int label, or (N, K) with N int labels.
    """
    labels = np.atleast_1d(np.asarray(labels, dtype=np.int64))
    batched = logits.reshape((1,) + logits.shape) if logits.ndim == 1 else logits
    if batched.ndim != 2 or batched.shape[0] != labels.shape[0]:
        raise ValueError(f"logits {logits.shape} do not match {labels.shape[0]} labels")
    if labels.min() < 0 or labels.max() >= batched.shape[1]:
        raise ValueError(f"labels must lie in [0, {batched.shape[1]})")
    picked = log_softmax(batched, axis=1)[np.arange(labels.shape[0]), labels]
    return -picked.mean()


def dropout(x: Tensor, rate: float, rng: Optional[np.random.Generator], training: bool) -> Tensor:
    """
    Inverted dropout: zero each element with probability rate, scale the rest.

    Identity outside training or when rate is 0.
    """
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    if not training or rate == 0.0:
        return x
    if rng is None:
        raise ValueError("training-mode dropout needs a seeded generator")
    keep = (rng.random(x.shape) >= rate).astype(x.data.dtype) / (1.0 - rate)
    out = Tensor(x.data * keep, (x,), 'dropout')

    def _backward():
        if x.requires_grad:
            x.grad += out.grad * keep

    out._backward = _backward
    return out


def global_avg_pool(x: Tensor, axes: Tuple[int, ...] = (-1,)) -> Tensor:
    """Mean over the given axes (time for (C, L) sequences, space for images)."""
    axes = tuple(a % x.ndim for a in axes)
    return x.mean(axis=axes if len(axes) > 1 else axes[0])


def elementwise_mul(a: Tensor, b: Tensor) -> Tensor:
    """Hadamard product of two same-shaped tensors (no broadcasting)."""
    if a.shape != b.shape:
        raise ValueError(f"element-wise product needs equal shapes, got {a.shape} and {b.shape}")
    return a * b
