"""
Classifier training: stratified split, unit-batch Adam on cross-entropy,
predictions for the held-out clips.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from ..engine import functional as F
from ..engine.optim import Adam
from ..engine.rng import STREAM_SHUFFLE, STREAM_SPLIT, generator
from ..engine.tensor import Tensor
from ..errors import CheckpointError, DatasetError, NumericalError
from ..models.features import ClipFeatures
from ..models.config import ClassifierConfig
from ..models.prediction import Prediction
from ..parsers.checkpoint_parser import Checkpoint
from .attention import AttentionClassifier, classify

logger = logging.getLogger(__name__)

KIND = "classifier"


def stratified_split(labels: Dict[str, int], test_fraction: float, seed: int) -> Tuple[List[str], List[str]]:
    """
    Seeded per-class split; each class sends round(n * fraction) clips to test.

    Returns:
        (train_ids, test_ids), each sorted

    Raises:
        DatasetError: either side of the split ends up with a single class
    """
    train, test = [], []
    for label in sorted(set(labels.values())):
        ids = sorted(cid for cid, lab in labels.items() if lab == label)
        order = generator(seed, STREAM_SPLIT, label).permutation(len(ids))
        n_test = int(math.floor(len(ids) * test_fraction + 0.5))
        n_test = min(max(n_test, 1), len(ids) - 1) if len(ids) > 1 else 0
        test.extend(ids[i] for i in order[:n_test])
        train.extend(ids[i] for i in order[n_test:])
    for name, part in (("train", train), ("test", test)):
        classes = {labels[cid] for cid in part}
        if len(classes) < 2:
            raise DatasetError(
                f"{name} split has a single class ({sorted(classes)}); "
                f"need at least 2 clips of each class"
            )
    return sorted(train), sorted(test)


def _inputs(item: ClipFeatures, dtype) -> Tuple[Tensor, Optional[Tensor]]:
    video = Tensor(np.asarray(item.video, dtype=dtype))
    mask = Tensor(np.asarray(item.mask, dtype=dtype)) if item.mask is not None else None
    return video, mask


def clip_loss(model: AttentionClassifier, item: ClipFeatures) -> Tensor:
    video, mask = _inputs(item, np.dtype(model.cfg.dtype))
    return F.cross_entropy(model(video, mask), item.label)


def mean_loss(model: AttentionClassifier, items: Sequence[ClipFeatures]) -> float:
    return float(np.mean([clip_loss(model, item).item() for item in items]))


@dataclass
class ClassifierRun:
    model: AttentionClassifier
    train_ids: List[str]
    test_ids: List[str]
    initial_loss: float
    final_loss: float
    epoch_losses: List[float] = field(default_factory=list)
    predictions: List[Prediction] = field(default_factory=list)

    def to_checkpoint(self) -> Checkpoint:
        return Checkpoint(
            entries=self.model.state_dict(),
            metadata={
                'kind': KIND,
                'model': self.model.cfg.model_name,
                'config': self.model.cfg.to_dict(),
                'channels': self.model.channels,
                'train_ids': list(self.train_ids),
                'test_ids': list(self.test_ids),
                'initial_loss': self.initial_loss,
                'final_loss': self.final_loss,
                'loss_curve': list(self.epoch_losses),
            },
        )


def predict_all(model: AttentionClassifier, items: Sequence[ClipFeatures]) -> List[Prediction]:
    """Predictions ordered by clip_id."""
    ordered = sorted(items, key=lambda item: item.clip_id)
    return [classify(model, item.clip_id, item.video, item.label, item.mask) for item in ordered]


def train_classifier(features: Sequence[ClipFeatures], cfg: ClassifierConfig, progress: bool = True) -> ClassifierRun:
    """
    Train M1 (cfg.use_gaze False) or M2 on a stratified split.

    Raises:
        DatasetError: empty input, mismatched features, single-class split
        NumericalError: the loss became NaN or infinite
    """
    if not features:
        raise DatasetError("classifier training needs at least one clip")
    channels = features[0].video.shape[0]
    for item in features:
        if item.video.shape[0] != channels:
            raise DatasetError(f"clip {item.clip_id!r} has {item.video.shape[0]} feature channels, expected {channels}")
        if cfg.use_gaze and item.mask is None:
            raise DatasetError(f"clip {item.clip_id!r} has no mask features")

    by_id = {item.clip_id: item for item in features}
    train_ids, test_ids = stratified_split({cid: it.label for cid, it in by_id.items()}, cfg.test_fraction, cfg.seed)
    train = [by_id[cid] for cid in train_ids]
    test = [by_id[cid] for cid in test_ids]
    if not cfg.use_gaze:
        train = [ClipFeatures(it.clip_id, it.label, it.video) for it in train]
        test = [ClipFeatures(it.clip_id, it.label, it.video) for it in test]
    logger.info("%s: %d train / %d test clips, %d channels", cfg.model_name, len(train), len(test), channels)

    model = AttentionClassifier(cfg, channels)
    optimizer = Adam(model.parameters(), lr=cfg.lr)
    initial = mean_loss(model, train)
    if not np.isfinite(initial):
        raise NumericalError("classifier loss is not finite", {'epoch': 0})

    epoch_losses: List[float] = []
    for epoch in tqdm(range(1, cfg.epochs + 1), desc=f"train-cls {cfg.model_name}", unit="epoch",
                      disable=not progress):
        order = generator(cfg.seed, STREAM_SHUFFLE, epoch).permutation(len(train))
        total = 0.0
        for step, idx in enumerate(order):
            loss = clip_loss(model, train[idx])
            value = loss.item()
            if not np.isfinite(value):
                raise NumericalError("classifier loss is not finite",
                                     {'epoch': epoch, 'step': step, 'clip_id': train[idx].clip_id})
            loss.backward()
            optimizer.step()
            total += value
        epoch_losses.append(total / len(train))
        logger.debug("epoch %d/%d loss %.6f", epoch, cfg.epochs, epoch_losses[-1])

    final = mean_loss(model, train)
    logger.info("%s: loss %.6f -> %.6f", cfg.model_name, initial, final)
    model.eval()
    return ClassifierRun(model, train_ids, test_ids, initial, final, epoch_losses, predict_all(model, test))


def load_classifier(checkpoint: Checkpoint) -> AttentionClassifier:
    """
    Rebuild a trained classifier from its checkpoint.

    Raises:
        CheckpointError: not a classifier checkpoint, or weights do not fit
    """
    if checkpoint.kind != KIND:
        raise CheckpointError(f"expected a classifier checkpoint, got kind {checkpoint.kind!r}")
    try:
        cfg = ClassifierConfig.from_dict(checkpoint.metadata['config'])
        model = AttentionClassifier(cfg, int(checkpoint.metadata['channels']))
        model.load_state_dict(checkpoint.entries)
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError(f"classifier checkpoint does not match its configuration: {e}")
    return model.eval()
