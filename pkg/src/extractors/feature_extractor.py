"""
Encoder Feature Extractor

Runs the frozen autoencoder encoder over frame stacks and mask stacks and
returns (latent_dim, T) sequences for the attention stage. Video frames
and quantized masks go through the same encoder weights.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from ..errors import DataError
from ..models.clip import Clip
from ..models.config import ClassifierConfig, MaskConfig
from ..models.features import ClipFeatures
from ..networks.autoencoder import Autoencoder, frames_to_batch
from ..engine.tensor import Tensor
from ..parsers.dataset_parser import load_mask_sequence
from .mask_extractor import MaskExtractor

logger = logging.getLogger(__name__)

ENCODE_CHUNK = 64


def encode_frames(frames: np.ndarray, model: Autoencoder) -> np.ndarray:
    """
    Encode a (T, H, W) uint8 stack into a (latent_dim, T) feature sequence.

    Raises:
        ValueError: the frame size differs from the encoder's
    """
    frames = np.asarray(frames)
    if frames.ndim != 3 or frames.shape[1:] != (model.height, model.width):
        raise ValueError(
            f"encoder expects (T, {model.height}, {model.width}) frames, got {frames.shape}"
        )
    batch = frames_to_batch(frames, np.dtype(model.cfg.dtype))
    latents = [
        model.encode(Tensor(batch[start:start + ENCODE_CHUNK])).data
        for start in range(0, batch.shape[0], ENCODE_CHUNK)
    ]
    return np.concatenate(latents, axis=0).T.copy()


class FeatureExtractor:
    """
    Builds ClipFeatures for classifier training and evaluation.

    Usage:
        extractor = FeatureExtractor(autoencoder, cls_cfg, masks_dir=None)
        features = extractor.extract_all(clips)
    """

    def __init__(
        self,
        model: Autoencoder,
        cfg: ClassifierConfig,
        mask_cfg: Optional[MaskConfig] = None,
        masks_dir: Optional[str | Path] = None,
        workers: int = 1,
    ):
        self.model = model
        self.cfg = cfg
        self.masks = MaskExtractor(mask_cfg)
        self.masks_dir = Path(masks_dir) if masks_dir is not None else None
        self.workers = max(1, workers)

    def _mask_stack(self, clip: Clip) -> np.ndarray:
        if self.masks_dir is not None:
            stack = load_mask_sequence(self.masks_dir / clip.clip_id)
            if stack.shape != clip.frames.shape:
                raise DataError(
                    f"masks for {clip.clip_id!r} have shape {stack.shape}, frames have {clip.frames.shape}"
                )
            return stack
        return self.masks.extract_stack(clip)

    def extract(self, clip: Clip) -> ClipFeatures:
        if clip.label is None:
            raise DataError(f"clip {clip.clip_id!r} has no label")
        video = encode_frames(clip.frames, self.model)
        mask = None
        if self.cfg.use_gaze:
            stack = self._mask_stack(clip)
            if self.cfg.mask_source == "masked_frames":
                stack = self.masks.apply(clip, stack).frames
            mask = encode_frames(stack, self.model)
        return ClipFeatures(clip.clip_id, clip.label, video, mask)

    def extract_all(self, clips: Sequence[Clip], progress: bool = True) -> List[ClipFeatures]:
        """Features for every clip, in input order."""
        logger.info("encoding %d clips (gaze=%s)", len(clips), self.cfg.use_gaze)
        if self.workers == 1:
            return [self.extract(c) for c in tqdm(clips, desc="encode", unit="clip", disable=not progress)]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(tqdm(pool.map(self.extract, clips), total=len(clips), desc="encode",
                             unit="clip", disable=not progress))
