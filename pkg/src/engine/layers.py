"""
Layers holding parameters.

Modules register parameters and sub-modules as attributes; parameter
names follow attribute order (e.g. "enc.0.weight"), which is also the
order used by the optimizer and the checkpoint writer.
"""

import math
from collections import OrderedDict
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from . import functional as F
from .tensor import Tensor


def he_normal(rng: np.random.Generator, shape: Tuple[int, ...], fan_in: int, dtype) -> np.ndarray:
    """N(0, 2 / fan_in) initialization."""
    return (rng.standard_normal(shape) * math.sqrt(2.0 / fan_in)).astype(dtype)


class Parameter(Tensor):
    """Leaf tensor that always requires gradients."""

    def __init__(self, data: np.ndarray):
        super().__init__(data, requires_grad=True)


class Module:
    """Base class: parameter registry, train/eval switch, state dicts."""

    def __init__(self):
        self.training = True

    def __call__(self, *args, **kwargs):
        return self.forward(*args, **kwargs)

    def forward(self, *args, **kwargs):
        raise NotImplementedError

    def _members(self) -> Iterator[Tuple[str, object]]:
        for name, value in vars(self).items():
            if isinstance(value, (Parameter, Module)):
                yield name, value
            elif isinstance(value, (list, tuple)):
                for i, item in enumerate(value):
                    if isinstance(item, (Parameter, Module)):
                        yield f"{name}.{i}", item

    def named_parameters(self, prefix: str = '') -> List[Tuple[str, Parameter]]:
        result = []
        for name, member in self._members():
            full = f"{prefix}{name}"
            if isinstance(member, Parameter):
                result.append((full, member))
            else:
                result.extend(member.named_parameters(full + '.'))
        return result

    def parameters(self) -> List[Parameter]:
        return [p for _, p in self.named_parameters()]

    def modules(self) -> List['Module']:
        result = [self]
        for _, member in self._members():
            if isinstance(member, Module):
                result.extend(member.modules())
        return result

    def train(self, mode: bool = True) -> 'Module':
        for module in self.modules():
            module.training = mode
        return self

    def eval(self) -> 'Module':
        return self.train(False)

    def state_dict(self) -> Dict[str, np.ndarray]:
        return OrderedDict((name, p.data.copy()) for name, p in self.named_parameters())

    def load_state_dict(self, state: Dict[str, np.ndarray]) -> None:
        """
        Copy arrays into the parameters.

        Raises:
            ValueError: a parameter is missing or has the wrong shape
        """
        for name, param in self.named_parameters():
            if name not in state:
                raise ValueError(f"state has no entry for parameter {name!r}")
            value = np.asarray(state[name])
            if value.shape != param.shape:
                raise ValueError(f"parameter {name!r} expects shape {param.shape}, got {value.shape}")
            param.data = value.astype(param.dtype, copy=True)

    def astype(self, dtype) -> 'Module':
        for param in self.parameters():
            param.data = param.data.astype(dtype)
        return self


class Conv2d(Module):
    def __init__(self, in_channels: int, out_channels: int, kernel_size: int, rng: np.random.Generator,
                 stride: int = 1, padding: int = 0, bias: bool = True, dtype=np.float64):
        super().__init__()
        self.stride = stride
        self.padding = padding
        fan_in = in_channels * kernel_size * kernel_size
        self.weight = Parameter(he_normal(rng, (out_channels, in_channels, kernel_size, kernel_size), fan_in, dtype))
        self.bias = Parameter(np.zeros(out_channels, dtype=dtype)) if bias else None

    def forward(self, x: Tensor) -> Tensor:
        return F.conv2d(x, self.weight, self.bias, self.stride, self.padding)


class ConvTranspose2d(Module):
    def __init__(self, in_channels: int, out_channels: int, kernel_size: int, rng: np.random.Generator,
                 stride: int = 2, padding: int = 0, output_padding: int = 0, bias: bool = True,
                 dtype=np.float64):
        super().__init__()
        self.stride = stride
        self.padding = padding
        self.output_padding = output_padding
        fan_in = in_channels * kernel_size * kernel_size // (stride * stride)
        self.weight = Parameter(he_normal(rng, (in_channels, out_channels, kernel_size, kernel_size),
                                          max(1, fan_in), dtype))
        self.bias = Parameter(np.zeros(out_channels, dtype=dtype)) if bias else None

    def forward(self, x: Tensor) -> Tensor:
        return F.conv2d_transpose(x, self.weight, self.bias, self.stride, self.padding, self.output_padding)


class Conv1d(Module):
    def __init__(self, in_channels: int, out_channels: int, kernel_size: int, rng: np.random.Generator,
                 padding: int = 0, bias: bool = False, dtype=np.float64):
        super().__init__()
        self.padding = padding
        self.weight = Parameter(he_normal(rng, (out_channels, in_channels, kernel_size),
                                          in_channels * kernel_size, dtype))
        self.bias = Parameter(np.zeros(out_channels, dtype=dtype)) if bias else None

    def forward(self, x: Tensor) -> Tensor:
        return F.conv1d(x, self.weight, self.bias, padding=self.padding)


class Dense(Module):
    def __init__(self, in_features: int, out_features: int, rng: np.random.Generator,
                 bias: bool = True, dtype=np.float64):
        super().__init__()
        self.weight = Parameter(he_normal(rng, (out_features, in_features), in_features, dtype))
        self.bias = Parameter(np.zeros(out_features, dtype=dtype)) if bias else None

    def forward(self, x: Tensor) -> Tensor:
        return F.dense(x, self.weight, self.bias)


class Dropout(Module):
    """Dropout with its own generator; identity in eval mode."""

    def __init__(self, rate: float, rng: Optional[np.random.Generator] = None):
        super().__init__()
        self.rate = rate
        self.rng = rng

    def forward(self, x: Tensor) -> Tensor:
        return F.dropout(x, self.rate, self.rng, self.training)
