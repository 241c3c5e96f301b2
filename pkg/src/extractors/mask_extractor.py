"""
Visual Mask Extractor

Turns a gaze trace into per-frame visual masks:

1. delta grid       one pixel set to 1 at the (rounded) gaze position
2. decay            alpha ** d around the gaze pixel, cut to 0 below beta
3. combination      element-wise max over gaze points
4. smoothing        isotropic Gaussian, zero padding at the borders
5. quantization     floor(grid * kappa) as an 8-bit image

Grids are indexed [row, col] = [y, x].
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy.signal import convolve2d

from ..constants.defaults import MASK_MODE_COMBINED, MASK_MODE_PER_FRAME
from ..errors import DataError
from ..models.clip import Clip
from ..models.config import MaskConfig
from ..models.gaze import GazePoint, GazeTrace
from ..models.mask import VisualMask
from ..parsers.gaze_parser import interpolate_missing
from ..utils import round_half_up

logger = logging.getLogger(__name__)


def _gaze_pixel(gaze: GazePoint, height: int, width: int):
    if not gaze.present:
        raise ValueError(f"gaze at frame {gaze.frame} is missing; masks need a present sample")
    col = round_half_up(gaze.x)
    row = round_half_up(gaze.y)
    if not (0 <= col < width and 0 <= row < height):
        raise ValueError(f"gaze pixel ({col}, {row}) lies outside a {width}x{height} frame")
    return row, col


def delta_grid(gaze: GazePoint, height: int, width: int) -> np.ndarray:
    """Zero grid with a single 1 at the rounded gaze pixel."""
    row, col = _gaze_pixel(gaze, height, width)
    grid = np.zeros((height, width), dtype=np.float64)
    grid[row, col] = 1.0
    return grid


def distance_grid(gaze: GazePoint, height: int, width: int) -> np.ndarray:
    """Euclidean distance of every pixel to the rounded gaze pixel."""
    row, col = _gaze_pixel(gaze, height, width)
    rows = np.arange(height, dtype=np.float64)[:, None]
    cols = np.arange(width, dtype=np.float64)[None, :]
    return np.sqrt((cols - col) ** 2 + (rows - row) ** 2)


def propagate_decay(gaze: GazePoint, cfg: MaskConfig, height: int, width: int) -> np.ndarray:
    """
    Spread a gaze point with alpha ** d, zeroing pixels where alpha ** d < beta.

    alpha ** d == beta keeps its value.
    """
    values = np.power(cfg.alpha, distance_grid(gaze, height, width))
    values[values < cfg.beta] = 0.0
    return values


def combine_masks(masks: Sequence[np.ndarray]) -> np.ndarray:
    """Element-wise maximum of equally shaped grids."""
    if len(masks) == 0:
        raise ValueError("cannot combine an empty sequence of masks")
    shape = masks[0].shape
    for mask in masks[1:]:
        if mask.shape != shape:
            raise ValueError(f"mask shapes differ: {shape} vs {mask.shape}")
    return np.maximum.reduce([np.asarray(m, dtype=np.float64) for m in masks])


def gaussian_kernel(cfg: MaskConfig, normalize: bool = True) -> np.ndarray:
    """
    Isotropic Gaussian kernel of size (2r+1) x (2r+1).

    With normalize=False the analytic values 1/(2 pi sigma^2) exp(-(x^2+y^2)/(2 sigma^2))
    are returned; otherwise the truncated kernel is rescaled to sum to 1.
    """
    r = cfg.kernel_radius
    axis = np.arange(-r, r + 1, dtype=np.float64)
    xx, yy = np.meshgrid(axis, axis)
    two_sigma_sq = 2.0 * cfg.sigma * cfg.sigma
    kernel = np.exp(-(xx ** 2 + yy ** 2) / two_sigma_sq) / (np.pi * two_sigma_sq)
    if normalize:
        kernel /= kernel.sum()
    return kernel


def gaussian_smooth(grid: np.ndarray, cfg: MaskConfig, kernel: Optional[np.ndarray] = None) -> np.ndarray:
    """Convolve with the normalized Gaussian kernel; zero padding, same-size output."""
    if kernel is None:
        kernel = gaussian_kernel(cfg)
    grid = np.asarray(grid, dtype=np.float64)
    smoothed = convolve2d(grid, kernel, mode='same', boundary='fill', fillvalue=0.0)
    # rounding can push a value a few ulps past the input range
    return np.clip(smoothed, 0.0, grid.max(initial=0.0))


def quantize(grid: np.ndarray, cfg: MaskConfig) -> np.ndarray:
    """V = floor(G * kappa) as uint8."""
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size and (grid.min() < 0.0 or grid.max() > 1.0):
        raise ValueError(
            f"mask values must lie in [0, 1] before quantization, got [{grid.min()}, {grid.max()}]"
        )
    return np.floor(grid * cfg.kappa).astype(np.uint8)


def finalize_mask(grid: np.ndarray, cfg: MaskConfig, kernel: Optional[np.ndarray] = None) -> VisualMask:
    """Smooth then quantize a raw decay grid."""
    smoothed = gaussian_smooth(grid, cfg, kernel)
    return VisualMask(grid=smoothed, quantized=quantize(smoothed, cfg))


def build_clip_masks(trace: GazeTrace, cfg: MaskConfig, height: int, width: int) -> List[VisualMask]:
    """
    Build one visual mask per frame of a clip.

    per_frame: each frame's mask comes from its own gaze sample; frames
        without one fall back to the combined mask of the whole clip.
    combined: one mask from all gaze samples, repeated for every frame.

    Raises:
        DataError: the trace holds no gaze sample at all
    """
    if cfg.interpolate:
        trace = interpolate_missing(trace)
    present = trace.present_points
    if not present:
        if not cfg.interpolate and cfg.mode == MASK_MODE_PER_FRAME:
            hint = "enable gaze interpolation or use combined mode"
        else:
            hint = "the clip cannot be masked without gaze"
        raise DataError(f"gaze trace {trace.clip_id!r} has no samples; {hint}")

    kernel = gaussian_kernel(cfg)
    combined: Optional[VisualMask] = None

    def get_combined() -> VisualMask:
        nonlocal combined
        if combined is None:
            grids = [propagate_decay(p, cfg, height, width) for p in present]
            combined = finalize_mask(combine_masks(grids), cfg, kernel)
        return combined

    if cfg.mode == MASK_MODE_COMBINED:
        mask = get_combined()
        return [mask for _ in range(len(trace))]

    masks = []
    fallbacks = 0
    for point in trace:
        if point.present:
            masks.append(finalize_mask(propagate_decay(point, cfg, height, width), cfg, kernel))
        else:
            masks.append(get_combined())
            fallbacks += 1
    if fallbacks:
        logger.debug("%s: %d frames used the combined-clip mask", trace.clip_id, fallbacks)
    return masks


def mask_stack(masks: Sequence[VisualMask]) -> np.ndarray:
    """Stack quantized masks into a (T, H, W) uint8 array."""
    return np.stack([m.quantized for m in masks], axis=0)


def apply_mask(clip: Clip, masks: Union[Sequence[VisualMask], np.ndarray], kappa: int = 255) -> Clip:
    """
    Attenuate each frame by its mask: round(frame * mask / kappa).

    Applying twice squares the attenuation; the operation is not idempotent
    for fractional masks.
    """
    stack = mask_stack(masks) if not isinstance(masks, np.ndarray) else masks
    if stack.shape != clip.frames.shape:
        raise ValueError(f"mask stack {stack.shape} does not match clip frames {clip.frames.shape}")
    weights = stack.astype(np.float64) / float(kappa)
    masked = np.floor(clip.frames.astype(np.float64) * weights + 0.5)
    masked = np.clip(masked, 0, 255).astype(np.uint8)
    return Clip(clip_id=clip.clip_id, frames=masked, label=clip.label, gaze=clip.gaze)


class MaskExtractor:
    """
    Builds visual masks for clips.

    Usage:
        extractor = MaskExtractor(MaskConfig(mode="per_frame"))
        masks = extractor.extract(clip)
        masked = extractor.apply(clip, masks)
    """

    def __init__(self, cfg: Optional[MaskConfig] = None, workers: int = 1):
        self.cfg = cfg
        self.workers = max(1, workers)

    def config_for(self, clip: Clip) -> MaskConfig:
        return self.cfg if self.cfg is not None else MaskConfig.for_frame_size(clip.height)

    def extract(self, clip: Clip) -> List[VisualMask]:
        """Build the masks for one clip."""
        if clip.gaze is None:
            raise DataError(f"clip {clip.clip_id!r} has no gaze trace")
        return build_clip_masks(clip.gaze, self.config_for(clip), clip.height, clip.width)

    def extract_stack(self, clip: Clip) -> np.ndarray:
        """Quantized masks of one clip as a (T, H, W) uint8 stack."""
        return mask_stack(self.extract(clip))

    def extract_many(self, clips: Sequence[Clip]) -> List[np.ndarray]:
        """Quantized mask stacks for many clips, in input order."""
        if self.workers == 1:
            return [self.extract_stack(c) for c in clips]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(self.extract_stack, clips))

    def apply(self, clip: Clip, masks: Union[Sequence[VisualMask], np.ndarray]) -> Clip:
        return apply_mask(clip, masks, self.config_for(clip).kappa)
