"""
Frozen feature network for the perceptual loss.

Three 3x3 conv blocks with ReLU (1->8 stride 1, 8->16 stride 2,
16->16 stride 2), randomly initialized from the run seed and never
trained. Its weights are plain read-only arrays, so no optimizer can
pick them up.
"""

from typing import List, Optional

import numpy as np

from ..constants.defaults import PERCEPTUAL_CHANNELS, PERCEPTUAL_SEED_OFFSET
from ..engine import functional as F
from ..engine.layers import he_normal
from ..engine.rng import STREAM_INIT, generator
from ..engine.tensor import Tensor

STRIDES = (1, 2, 2)


class PerceptualNet:
    """phi: frozen conv features; layer j is 1-based."""

    def __init__(self, seed: int, dtype=np.float64, channels=PERCEPTUAL_CHANNELS):
        rng = generator(seed + PERCEPTUAL_SEED_OFFSET, STREAM_INIT)
        self.weights: List[np.ndarray] = []
        self.biases: List[np.ndarray] = []
        for c_in, c_out in zip(channels[:-1], channels[1:]):
            w = he_normal(rng, (c_out, c_in, 3, 3), c_in * 9, dtype)
            b = np.zeros(c_out, dtype=dtype)
            w.setflags(write=False)
            b.setflags(write=False)
            self.weights.append(w)
            self.biases.append(b)

    @property
    def depth(self) -> int:
        return len(self.weights)

    def features(self, x: Tensor, layer: int) -> Tensor:
        """
        Activation after conv block `layer` for x of shape (N, 1, H, W).

        Raises:
            ValueError: layer is not in 1..depth
        """
        if not 1 <= layer <= self.depth:
            raise ValueError(f"perceptual layer must be in 1..{self.depth}, got {layer}")
        h = x
        for w, b, stride in zip(self.weights[:layer], self.biases[:layer], STRIDES):
            h = F.relu(F.conv2d(h, Tensor(w), Tensor(b), stride=stride, padding=1))
        return h

    def fingerprint(self) -> bytes:
        """Raw weight bytes, for frozen-parameter checks."""
        return b''.join(a.tobytes() for pair in zip(self.weights, self.biases) for a in pair)
