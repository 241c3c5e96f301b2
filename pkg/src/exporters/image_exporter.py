"""
PNG previews of masks: frame, mask heat tint and masked frame side by side.
"""

from pathlib import Path
from typing import List

import numpy as np
from PIL import Image

from ..constants.formats import PREVIEW_PATTERN

PREVIEW_SCALE = 4


def tint_mask(mask: np.ndarray) -> np.ndarray:
    """Grayscale mask -> RGB heat tint (black -> red -> yellow)."""
    m = mask.astype(np.float64) / 255.0
    rgb = np.stack([np.clip(2.0 * m, 0, 1), np.clip(2.0 * m - 1.0, 0, 1), np.zeros_like(m)], axis=-1)
    return np.floor(rgb * 255.0 + 0.5).astype(np.uint8)


def _gray_rgb(a: np.ndarray) -> np.ndarray:
    return np.repeat(a[:, :, None], 3, axis=2)


def preview_image(frame: np.ndarray, mask: np.ndarray, masked: np.ndarray, scale: int = PREVIEW_SCALE) -> Image.Image:
    """One RGB image: [frame | mask tint | masked frame], upscaled."""
    row = np.concatenate([_gray_rgb(frame), tint_mask(mask), _gray_rgb(masked)], axis=1)
    image = Image.fromarray(row)
    if scale != 1:
        image = image.resize((row.shape[1] * scale, row.shape[0] * scale), Image.Resampling.NEAREST)
    return image


def save_previews(out_dir: str | Path, frames: np.ndarray, masks: np.ndarray, masked: np.ndarray,
                  every: int = 1) -> List[Path]:
    """Write preview_%05d.png for every `every`-th frame."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for t in range(0, frames.shape[0], every):
        path = out_dir / PREVIEW_PATTERN.format(t)
        preview_image(frames[t], masks[t], masked[t]).save(path, format='PNG')
        paths.append(path)
    return paths
