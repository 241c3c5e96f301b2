"""
Configuration dataclasses.

Every config validates itself on construction and round-trips through
to_dict()/from_dict(), which is how checkpoints and run manifests store
the exact settings of a run.
"""

import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Optional, Tuple, Type, TypeVar

from ..constants import defaults as D

C = TypeVar('C')


class _ConfigMixin:
    """to_dict/from_dict shared by all configs."""

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key, value in data.items():
            if isinstance(value, tuple):
                data[key] = list(value)
        return data

    @classmethod
    def from_dict(cls: Type[C], data: Dict[str, Any]) -> C:
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for key, value in data.items():
            if key not in known:
                continue
            kwargs[key] = tuple(value) if isinstance(value, list) else value
        return cls(**kwargs)


@dataclass
class MaskConfig(_ConfigMixin):
    """Visual mask parameters (decay, floor, smoothing, quantization)."""
    alpha: float = D.MASK_ALPHA
    beta: float = D.MASK_BETA
    sigma: float = D.MASK_SIGMA_AT_64
    kernel_radius: Optional[int] = None     # None -> ceil(3 * sigma)
    kappa: int = D.MASK_KAPPA
    mode: str = D.MASK_MODE_PER_FRAME
    interpolate: bool = True                # False = smoothing-only path

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must be in (0, 1), got {self.beta}")
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if self.kernel_radius is None:
            self.kernel_radius = max(1, int(math.ceil(D.MASK_KERNEL_SIGMAS * self.sigma)))
        if self.kernel_radius < 1:
            raise ValueError(f"kernel_radius must be >= 1, got {self.kernel_radius}")
        if not 1 <= self.kappa <= 255:
            raise ValueError(f"kappa must be in [1, 255], got {self.kappa}")
        if self.mode not in D.MASK_MODES:
            raise ValueError(f"mode must be one of {D.MASK_MODES}, got {self.mode!r}")

    @classmethod
    def for_frame_size(cls, height: int, **overrides) -> 'MaskConfig':
        """Default config with sigma scaled to the frame height (2 px at 64)."""
        if overrides.get('sigma') is None:
            overrides['sigma'] = D.MASK_SIGMA_AT_64 * height / 64.0
        return cls(**overrides)


@dataclass
class AEConfig(_ConfigMixin):
    """Autoencoder architecture and training settings."""
    latent_dim: int = D.AE_LATENT_DIM
    channels: Tuple[int, ...] = D.AE_CHANNELS
    epochs: int = D.AE_EPOCHS
    batch: int = D.AE_BATCH
    lr: float = D.AE_LR
    dropout: float = D.AE_DROPOUT
    perceptual_layer: int = D.AE_PERCEPTUAL_LAYER
    frame_stride: int = D.AE_FRAME_STRIDE
    upsample: str = "nearest"
    dtype: str = "float32"
    seed: int = D.DEFAULT_SEED

    def __post_init__(self):
        self.channels = tuple(self.channels)
        if self.latent_dim < 1:
            raise ValueError(f"latent_dim must be >= 1, got {self.latent_dim}")
        if not self.lr > 0.0:
            raise ValueError(f"lr must be > 0, got {self.lr}")
        if len(self.channels) < 2 or self.channels[0] != 1:
            raise ValueError(f"channels must start at 1 (grayscale), got {self.channels}")
        if self.epochs < 0 or self.batch < 1 or self.frame_stride < 1:
            raise ValueError("epochs >= 0, batch >= 1 and frame_stride >= 1 are required")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError(f"dropout must be in [0, 1), got {self.dropout}")
        if self.upsample not in D.AE_UPSAMPLE_MODES:
            raise ValueError(f"upsample must be one of {D.AE_UPSAMPLE_MODES}, got {self.upsample!r}")
        if self.dtype not in ("float32", "float64"):
            raise ValueError(f"dtype must be float32 or float64, got {self.dtype!r}")

    @property
    def downsample_factor(self) -> int:
        return 2 ** (len(self.channels) - 1)


@dataclass
class ClassifierConfig(_ConfigMixin):
    """SE attention classifier settings (M1 when use_gaze is False, M2 otherwise)."""
    se_reduction: int = D.CLS_SE_REDUCTION
    kernel_size: int = D.CLS_KERNEL_SIZE
    epochs: int = D.CLS_EPOCHS
    batch: int = D.CLS_BATCH
    lr: float = D.CLS_LR
    use_gaze: bool = False
    mask_source: str = "mask"
    test_fraction: float = D.CLS_TEST_FRACTION
    dtype: str = "float32"
    seed: int = D.DEFAULT_SEED

    def __post_init__(self):
        if self.se_reduction < 1:
            raise ValueError(f"se_reduction must be >= 1, got {self.se_reduction}")
        if self.kernel_size < 1 or self.kernel_size % 2 == 0:
            raise ValueError(f"kernel_size must be a positive odd number, got {self.kernel_size}")
        if not self.lr > 0.0:
            raise ValueError(f"lr must be > 0, got {self.lr}")
        if self.batch != 1:
            raise ValueError("the classifier trains with a unit batch size")
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError(f"test_fraction must be in (0, 1), got {self.test_fraction}")
        if self.mask_source not in D.MASK_SOURCES:
            raise ValueError(f"mask_source must be one of {D.MASK_SOURCES}, got {self.mask_source!r}")
        if self.dtype not in ("float32", "float64"):
            raise ValueError(f"dtype must be float32 or float64, got {self.dtype!r}")

    @property
    def model_name(self) -> str:
        return "M2" if self.use_gaze else "M1"


@dataclass
class TrustConfig(_ConfigMixin):
    """Trust quantification settings (reward/penalty exponents, density grid)."""
    alpha: float = D.TRUST_ALPHA
    beta: float = D.TRUST_BETA
    grid_size: int = D.TRUST_GRID_SIZE
    bandwidth: str = "silverman"
    uniform_prior: bool = False

    def __post_init__(self):
        if not (self.alpha > 0.0 and self.beta > 0.0):
            raise ValueError("trust alpha and beta must be > 0")
        if self.grid_size < 2:
            raise ValueError(f"grid_size must be >= 2, got {self.grid_size}")


@dataclass
class SynthConfig(_ConfigMixin):
    """Synthetic clip + gaze dataset settings."""
    clips: int = D.SYNTH_CLIPS
    frames: int = D.SYNTH_FRAMES
    height: int = D.SYNTH_SIZE
    width: int = D.SYNTH_SIZE
    ratio: float = D.SYNTH_RATIO            # fraction of successful clips
    gaze_jitter: float = D.SYNTH_GAZE_JITTER
    missing_rate: float = D.SYNTH_MISSING_RATE
    distractors: int = D.SYNTH_DISTRACTORS
    noise: float = D.SYNTH_NOISE
    patch: int = D.SYNTH_PATCH
    stripe_period: int = D.SYNTH_STRIPE_PERIOD
    seed: int = D.DEFAULT_SEED
    workers: int = 1

    def __post_init__(self):
        if self.clips < 2:
            raise ValueError(f"need at least 2 clips, got {self.clips}")
        if self.frames < 1:
            raise ValueError(f"frames must be >= 1, got {self.frames}")
        if not 0.0 < self.ratio < 1.0:
            raise ValueError(f"ratio must be in (0, 1), got {self.ratio}")
        positives = self.positive_count
        if positives == 0 or positives == self.clips:
            raise ValueError(
                f"ratio {self.ratio} with {self.clips} clips leaves a class empty"
            )
        if not 0.0 <= self.missing_rate < 1.0:
            raise ValueError(f"missing_rate must be in [0, 1), got {self.missing_rate}")
        if self.gaze_jitter < 0.0 or self.noise < 0.0 or self.distractors < 0:
            raise ValueError("gaze_jitter, noise and distractors must be non-negative")
        if self.patch < 2 * self.stripe_period or 2 * self.patch + 4 > self.width or self.patch + 2 > self.height:
            raise ValueError(
                f"patch {self.patch} does not fit a {self.height}x{self.width} frame "
                f"with stripe period {self.stripe_period}"
            )
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    @property
    def positive_count(self) -> int:
        """Number of successful clips: round-half-up of clips * ratio."""
        return int(math.floor(self.clips * self.ratio + 0.5))
