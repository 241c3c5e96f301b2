"""
Video clip data model.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from ..constants import VALID_LABELS, get_class_name
from .gaze import GazeTrace


@dataclass
class Clip:
    """A grayscale frame stack with its outcome label and optional gaze trace."""
    clip_id: str
    frames: np.ndarray              # (T, H, W) uint8
    label: Optional[int] = None     # 0 = unsuccessful, 1 = successful
    gaze: Optional[GazeTrace] = None

    def __post_init__(self):
        if self.frames.ndim != 3:
            raise ValueError(
                f"clip {self.clip_id!r}: frames must be (T, H, W), got shape {self.frames.shape}"
            )
        if self.frames.shape[0] < 1:
            raise ValueError(f"clip {self.clip_id!r}: needs at least one frame")
        if self.frames.dtype != np.uint8:
            raise ValueError(f"clip {self.clip_id!r}: frames must be uint8, got {self.frames.dtype}")
        if self.label is not None and self.label not in VALID_LABELS:
            raise ValueError(f"clip {self.clip_id!r}: label must be 0 or 1, got {self.label}")
        if self.gaze is not None and len(self.gaze) != self.num_frames:
            raise ValueError(
                f"clip {self.clip_id!r}: gaze trace has {len(self.gaze)} slots "
                f"for {self.num_frames} frames"
            )

    @property
    def num_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def height(self) -> int:
        return self.frames.shape[1]

    @property
    def width(self) -> int:
        return self.frames.shape[2]

    @property
    def label_name(self) -> str:
        return get_class_name(self.label) if self.label is not None else 'unlabeled'

    def to_dict(self) -> Dict[str, Any]:
        """Summary for JSON export (frame data is not included)."""
        return {
            'clip_id': self.clip_id,
            'frames': self.num_frames,
            'height': self.height,
            'width': self.width,
            'label': self.label,
            'label_name': self.label_name,
            'gaze_missing': self.gaze.missing_count if self.gaze is not None else None,
        }
