"""
Squeeze-and-excitation attention and the outcome classifier.

Features are (C, T) sequences: one encoder latent vector per frame,
channels first. A block computes U = conv1d(X) without bias, squeezes U
by averaging over time, and rescales each channel of U by a gate from a
C -> C/r -> C bottleneck (ReLU, then sigmoid).

M1 classifies from the video block alone. M2 adds a second block of the
same shape over the mask features and multiplies the two outputs
element-wise before pooling.
"""

from typing import Optional

import numpy as np

from ..constants import VALID_LABELS
from ..engine import functional as F
from ..engine.layers import Conv1d, Dense, Module
from ..engine.rng import STREAM_INIT, generator
from ..engine.tensor import Tensor
from ..models.config import ClassifierConfig
from ..models.prediction import Prediction

PROB_FLOOR = 1e-15


class SEBlock(Module):
    def __init__(self, channels: int, reduction: int, kernel_size: int, rng: np.random.Generator, dtype=np.float64):
        super().__init__()
        if reduction < 1 or channels % reduction:
            raise ValueError(f"SE reduction {reduction} must divide the channel count {channels}")
        self.channels = channels
        self.conv = Conv1d(channels, channels, kernel_size, rng, padding=kernel_size // 2, dtype=dtype)
        self.squeeze_fc = Dense(channels, channels // reduction, rng, dtype=dtype)
        self.excite_fc = Dense(channels // reduction, channels, rng, dtype=dtype)

    def gates(self, u: Tensor) -> Tensor:
        """Channel gates in (0, 1) from the time-averaged conv output."""
        s = F.global_avg_pool(u, axes=(-1,))
        return F.sigmoid(self.excite_fc(F.relu(self.squeeze_fc(s))))

    def forward(self, x: Tensor) -> Tensor:
        if x.ndim != 2 or x.shape[0] != self.channels:
            raise ValueError(f"SE block expects ({self.channels}, T) features, got {x.shape}")
        u = self.conv(x)
        return u * self.gates(u).reshape(self.channels, 1)


def se_block(x: Tensor, block: SEBlock) -> Tensor:
    return block(x)


def fuse(u: Tensor, m: Tensor) -> Tensor:
    """Fusion attention: U element-wise times the mask-path features."""
    return F.elementwise_mul(u, m)


class AttentionClassifier(Module):
    """
    SE attention over encoder features plus a 2-way dense head.

    Initialization draws the video block, then the head, then (M2 only)
    the mask block from separate streams, so M1 and M2 built from the
    same seed share their video block and head weights.
    """

    def __init__(self, cfg: ClassifierConfig, channels: int):
        super().__init__()
        self.cfg = cfg
        self.channels = channels
        dtype = np.dtype(cfg.dtype)
        self.video_block = SEBlock(channels, cfg.se_reduction, cfg.kernel_size,
                                   generator(cfg.seed, STREAM_INIT, 0), dtype)
        self.head = Dense(channels, len(VALID_LABELS), generator(cfg.seed, STREAM_INIT, 1), dtype=dtype)
        self.mask_block = None
        if cfg.use_gaze:
            self.mask_block = SEBlock(channels, cfg.se_reduction, cfg.kernel_size,
                                      generator(cfg.seed, STREAM_INIT, 2), dtype)

    @property
    def use_gaze(self) -> bool:
        return self.mask_block is not None

    def forward(self, features: Tensor, mask_features: Optional[Tensor] = None) -> Tensor:
        """Logits (2,) for one clip."""
        if self.use_gaze and mask_features is None:
            raise ValueError("the gaze model needs mask features")
        if not self.use_gaze and mask_features is not None:
            raise ValueError("the no-gaze model takes no mask features")
        u = se_block(features, self.video_block)
        if self.use_gaze:
            u = fuse(u, se_block(mask_features, self.mask_block))
        return self.head(F.global_avg_pool(u, axes=(-1,)))

    def predict_proba(self, features: np.ndarray, mask_features: Optional[np.ndarray] = None) -> np.ndarray:
        """Softmax probabilities in float64, floored away from 0 and renormalized."""
        dtype = np.dtype(self.cfg.dtype)
        m = Tensor(np.asarray(mask_features, dtype=dtype)) if mask_features is not None else None
        logits = self.forward(Tensor(np.asarray(features, dtype=dtype)), m)
        probs = F.softmax(Tensor(logits.data.astype(np.float64))).data
        probs = np.clip(probs, PROB_FLOOR, None)
        return probs / probs.sum()


def classify(
    model: AttentionClassifier,
    clip_id: str,
    features: np.ndarray,
    true_label: int,
    mask_features: Optional[np.ndarray] = None,
) -> Prediction:
    """Predict one clip's outcome."""
    return Prediction.from_probs(clip_id, model.predict_proba(features, mask_features), true_label)
