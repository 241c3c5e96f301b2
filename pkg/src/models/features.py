"""
Per-clip encoder features.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass
class ClipFeatures:
    """Encoder features of one clip, channels x time; mask is set for the gaze model."""
    clip_id: str
    label: int
    video: np.ndarray
    mask: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.video.ndim != 2:
            raise ValueError(f"clip {self.clip_id!r}: features must be (C, T), got {self.video.shape}")
        if self.mask is not None and self.mask.shape != self.video.shape:
            raise ValueError(
                f"clip {self.clip_id!r}: mask features {self.mask.shape} differ from video {self.video.shape}"
            )

    @property
    def num_frames(self) -> int:
        return self.video.shape[1]
