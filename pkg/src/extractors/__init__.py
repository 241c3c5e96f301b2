# Extractors
#
# High-level extractors built on the parsers: visual masks from gaze
# traces and autoencoder features from clips.

from .mask_extractor import (
    MaskExtractor,
    apply_mask,
    build_clip_masks,
    combine_masks,
    delta_grid,
    distance_grid,
    finalize_mask,
    gaussian_kernel,
    gaussian_smooth,
    mask_stack,
    propagate_decay,
    quantize,
)
from .feature_extractor import FeatureExtractor, encode_frames

__all__ = [
    'MaskExtractor',
    'apply_mask',
    'build_clip_masks',
    'combine_masks',
    'delta_grid',
    'distance_grid',
    'finalize_mask',
    'gaussian_kernel',
    'gaussian_smooth',
    'mask_stack',
    'propagate_decay',
    'quantize',
    'FeatureExtractor',
    'encode_frames',
]
