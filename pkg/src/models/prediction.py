"""
Classifier prediction model.
"""

from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from ..constants import VALID_LABELS


@dataclass(frozen=True)
class Prediction:
    """Softmax output of the classifier for one clip."""
    clip_id: str
    probs: Tuple[float, float]      # (p_unsuccessful, p_successful)
    predicted: int
    true_label: int

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.shape != (2,):
            raise ValueError(f"prediction {self.clip_id!r}: expected 2 probabilities, got {probs.shape}")
        if not np.all(probs > 0.0):
            raise ValueError(f"prediction {self.clip_id!r}: probabilities must be strictly positive")
        if abs(probs.sum() - 1.0) > 1e-9:
            raise ValueError(f"prediction {self.clip_id!r}: probabilities sum to {probs.sum()!r}")
        if self.predicted not in VALID_LABELS or self.true_label not in VALID_LABELS:
            raise ValueError(f"prediction {self.clip_id!r}: labels must be 0 or 1")

    @classmethod
    def from_probs(cls, clip_id: str, probs, true_label: int) -> 'Prediction':
        """Build a prediction, taking the argmax as the predicted label (ties -> 0)."""
        p0, p1 = float(probs[0]), float(probs[1])
        return cls(
            clip_id=clip_id,
            probs=(p0, p1),
            predicted=1 if p1 > p0 else 0,
            true_label=int(true_label),
        )

    @property
    def confidence(self) -> float:
        """C(y|x): softmax probability of the predicted label."""
        return self.probs[self.predicted]

    @property
    def score(self) -> float:
        """Ranking score for ROC/PR: probability of the successful class."""
        return self.probs[1]

    @property
    def correct(self) -> bool:
        return self.predicted == self.true_label

    def to_dict(self) -> Dict[str, Any]:
        return {
            'clip_id': self.clip_id,
            'true': self.true_label,
            'pred': self.predicted,
            'p0': self.probs[0],
            'p1': self.probs[1],
        }
