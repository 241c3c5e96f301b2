"""
Convolutional autoencoder.

Encoder: stride-2 3x3 conv blocks with ReLU (1->8->16->32 by default,
64x64 -> 8x8), then a dense layer to the latent vector. Dropout acts on
the latent vector during training only.

Decoder: dense back to the smallest feature map, then per stage either
nearest-neighbor upsampling followed by a 3x3 conv, or a stride-2 4x4
transposed conv. The last stage ends in a sigmoid so reconstructions lie
in [0, 1] like the normalized input frames.

Training minimizes the pixel loss plus the perceptual loss under a
frozen feature network, with unit weights.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from ..engine import functional as F
from ..engine.layers import Conv2d, ConvTranspose2d, Dense, Dropout, Module
from ..engine.optim import Adam
from ..engine.rng import STREAM_DROPOUT, STREAM_INIT, STREAM_SHUFFLE, generator
from ..engine.tensor import Tensor
from ..errors import CheckpointError, DatasetError, NumericalError
from ..models.clip import Clip
from ..models.config import AEConfig
from ..parsers.checkpoint_parser import Checkpoint
from .perceptual import PerceptualNet

logger = logging.getLogger(__name__)

KIND = "autoencoder"


class Encoder(Module):
    def __init__(self, cfg: AEConfig, height: int, width: int, rng: np.random.Generator, dtype):
        super().__init__()
        factor = cfg.downsample_factor
        if height % factor or width % factor:
            raise ValueError(f"frame size {height}x{width} must be divisible by {factor}")
        self.feature_shape = (cfg.channels[-1], height // factor, width // factor)
        self.convs = [
            Conv2d(c_in, c_out, 3, rng, stride=2, padding=1, dtype=dtype)
            for c_in, c_out in zip(cfg.channels[:-1], cfg.channels[1:])
        ]
        self.fc = Dense(int(np.prod(self.feature_shape)), cfg.latent_dim, rng, dtype=dtype)

    def forward(self, x: Tensor) -> Tensor:
        h = x
        for conv in self.convs:
            h = F.relu(conv(h))
        return self.fc(h.reshape(h.shape[0], -1))


class Decoder(Module):
    def __init__(self, cfg: AEConfig, feature_shape, rng: np.random.Generator, dtype):
        super().__init__()
        self.feature_shape = feature_shape
        self.upsample = cfg.upsample
        self.fc = Dense(cfg.latent_dim, int(np.prod(feature_shape)), rng, dtype=dtype)
        plan = tuple(reversed(cfg.channels))
        if cfg.upsample == "nearest":
            self.stages = [
                Conv2d(c_in, c_out, 3, rng, stride=1, padding=1, dtype=dtype)
                for c_in, c_out in zip(plan[:-1], plan[1:])
            ]
        else:
            self.stages = [
                ConvTranspose2d(c_in, c_out, 4, rng, stride=2, padding=1, dtype=dtype)
                for c_in, c_out in zip(plan[:-1], plan[1:])
            ]

    def forward(self, z: Tensor) -> Tensor:
        h = F.relu(self.fc(z)).reshape((z.shape[0],) + tuple(self.feature_shape))
        last = len(self.stages) - 1
        for i, stage in enumerate(self.stages):
            if self.upsample == "nearest":
                h = stage(F.upsample_nearest(h, 2))
            else:
                h = stage(h)
            h = F.sigmoid(h) if i == last else F.relu(h)
        return h


class Autoencoder(Module):
    """Encoder + latent dropout + decoder for (N, 1, H, W) frames in [0, 1]."""

    def __init__(self, cfg: AEConfig, height: int, width: int):
        super().__init__()
        self.cfg = cfg
        self.height = height
        self.width = width
        dtype = np.dtype(cfg.dtype)
        rng = generator(cfg.seed, STREAM_INIT)
        self.encoder = Encoder(cfg, height, width, rng, dtype)
        self.dropout = Dropout(cfg.dropout, generator(cfg.seed, STREAM_DROPOUT))
        self.decoder = Decoder(cfg, self.encoder.feature_shape, rng, dtype)

    def encode(self, x: Tensor) -> Tensor:
        return self.encoder(x)

    def forward(self, x: Tensor) -> Tensor:
        return self.decoder(self.dropout(self.encoder(x)))


# ----------------------------------------------------------------------
# Losses
# ----------------------------------------------------------------------

def mse_loss(x: Tensor, x_rec: Tensor) -> Tensor:
    """(1/n) sum_i ||x_i - x'_i||^2 with n the leading batch size."""
    if x.shape != x_rec.shape:
        raise ValueError(f"mse_loss shape mismatch: {x.shape} vs {x_rec.shape}")
    return (x - x_rec).square().sum() * (1.0 / x.shape[0])


def perceptual_loss(x: Tensor, x_rec: Tensor, phi: PerceptualNet, layer: int) -> Tensor:
    """||phi_j(x) - phi_j(x')||^2 / (C_j H_j W_j), averaged over the batch."""
    if x.shape != x_rec.shape:
        raise ValueError(f"perceptual_loss shape mismatch: {x.shape} vs {x_rec.shape}")
    fx = phi.features(x, layer)
    fr = phi.features(x_rec, layer)
    return (fx - fr).square().sum() * (1.0 / fx.size)


def ae_total_loss(x: Tensor, x_rec: Tensor, phi: PerceptualNet, layer: int) -> Tensor:
    return mse_loss(x, x_rec) + perceptual_loss(x, x_rec, phi, layer)


# ----------------------------------------------------------------------
# Training
# ----------------------------------------------------------------------

def frames_to_batch(frames: np.ndarray, dtype) -> np.ndarray:
    """(T, H, W) uint8 -> (T, 1, H, W) floats in [0, 1]."""
    frames = np.asarray(frames)
    if frames.ndim != 3:
        raise ValueError(f"expected a (T, H, W) frame stack, got {frames.shape}")
    return (frames.astype(np.float64) / 255.0).astype(dtype)[:, None, :, :]


def collect_samples(clips: Sequence[Clip], frame_stride: int, dtype) -> np.ndarray:
    """Every frame_stride-th frame of every clip, as one (S, 1, H, W) array."""
    if not clips:
        raise DatasetError("autoencoder training needs at least one clip")
    shape = clips[0].frames.shape[1:]
    for clip in clips:
        if clip.frames.shape[1:] != shape:
            raise DatasetError(
                f"clip {clip.clip_id!r} has frame size {clip.frames.shape[1:]}, expected {shape}"
            )
    return np.concatenate([frames_to_batch(c.frames[::frame_stride], dtype) for c in clips], axis=0)


@dataclass
class AETrainingResult:
    model: Autoencoder
    phi: PerceptualNet
    initial_loss: float
    final_loss: float
    epoch_losses: List[float] = field(default_factory=list)
    samples: int = 0

    def to_checkpoint(self) -> Checkpoint:
        return Checkpoint(
            entries=self.model.state_dict(),
            metadata={
                'kind': KIND,
                'config': self.model.cfg.to_dict(),
                'frame_size': [self.model.height, self.model.width],
                'initial_loss': self.initial_loss,
                'final_loss': self.final_loss,
                'loss_curve': list(self.epoch_losses),
                'samples': self.samples,
            },
        )


def evaluate_loss(model: Autoencoder, phi: PerceptualNet, samples: np.ndarray, cfg: AEConfig) -> float:
    """Sample-weighted L_AE over all samples with dropout off."""
    was_training = model.training
    model.eval()
    total = 0.0
    for start in range(0, samples.shape[0], cfg.batch):
        x = Tensor(samples[start:start + cfg.batch])
        total += ae_total_loss(x, model(x), phi, cfg.perceptual_layer).item() * x.shape[0]
    model.train(was_training)
    return total / samples.shape[0]


def _check_finite(value: float, **diagnostics) -> None:
    if not np.isfinite(value):
        raise NumericalError("autoencoder loss is not finite", diagnostics)


def train_autoencoder(clips: Sequence[Clip], cfg: AEConfig, progress: bool = True) -> AETrainingResult:
    """
    Train on individual frames of the clips.

    Raises:
        DatasetError: no clips, or clips of different frame sizes
        NumericalError: the loss became NaN or infinite
    """
    dtype = np.dtype(cfg.dtype)
    samples = collect_samples(clips, cfg.frame_stride, dtype)
    height, width = samples.shape[2], samples.shape[3]
    model = Autoencoder(cfg, height, width)
    phi = PerceptualNet(cfg.seed, dtype=dtype)
    optimizer = Adam(model.parameters(), lr=cfg.lr)
    logger.info("training autoencoder on %d frames (%dx%d), %d epochs", samples.shape[0], height, width, cfg.epochs)

    initial = evaluate_loss(model, phi, samples, cfg)
    _check_finite(initial, epoch=0, step=0)
    logger.info("initial loss %.6f", initial)

    epoch_losses: List[float] = []
    last_finite = initial
    model.train()
    for epoch in tqdm(range(1, cfg.epochs + 1), desc="train-ae", unit="epoch", disable=not progress):
        order = generator(cfg.seed, STREAM_SHUFFLE, epoch).permutation(samples.shape[0])
        total = 0.0
        for step, start in enumerate(range(0, samples.shape[0], cfg.batch)):
            x = Tensor(samples[order[start:start + cfg.batch]])
            loss = ae_total_loss(x, model(x), phi, cfg.perceptual_layer)
            value = loss.item()
            _check_finite(value, epoch=epoch, step=step, last_finite_loss=last_finite)
            last_finite = value
            loss.backward()
            optimizer.step()
            total += value * x.shape[0]
        epoch_losses.append(total / samples.shape[0])
        logger.info("epoch %d/%d loss %.6f", epoch, cfg.epochs, epoch_losses[-1])

    final = evaluate_loss(model, phi, samples, cfg)
    _check_finite(final, epoch=cfg.epochs, step=-1, last_finite_loss=last_finite)
    logger.info("final loss %.6f (initial %.6f)", final, initial)
    model.eval()
    return AETrainingResult(model, phi, initial, final, epoch_losses, samples.shape[0])


def load_autoencoder(checkpoint: Checkpoint) -> Autoencoder:
    """
    Rebuild a trained autoencoder (in eval mode) from its checkpoint.

    Raises:
        CheckpointError: not an autoencoder checkpoint, or weights do not fit
    """
    if checkpoint.kind != KIND:
        raise CheckpointError(f"expected an autoencoder checkpoint, got kind {checkpoint.kind!r}")
    try:
        cfg = AEConfig.from_dict(checkpoint.metadata['config'])
        height, width = checkpoint.metadata['frame_size']
        model = Autoencoder(cfg, int(height), int(width))
        model.load_state_dict(checkpoint.entries)
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError(f"autoencoder checkpoint does not match its configuration: {e}")
    return model.eval()
