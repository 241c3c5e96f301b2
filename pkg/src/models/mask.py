"""
Visual mask data model.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class VisualMask:
    """A smoothed mask grid in [0, 1] and its quantized 8-bit image."""
    grid: np.ndarray        # (H, W) float64
    quantized: np.ndarray   # (H, W) uint8, floor(grid * kappa)

    def __post_init__(self):
        if self.grid.shape != self.quantized.shape:
            raise ValueError(
                f"mask grid {self.grid.shape} and image {self.quantized.shape} differ in shape"
            )

    @property
    def shape(self):
        return self.grid.shape

    @property
    def peak(self):
        """(row, col) of the grid maximum."""
        return np.unravel_index(int(np.argmax(self.grid)), self.grid.shape)
