"""
Dataset Directory Parser

Dataset layout:

    <root>/labels.csv                   clip_id,label
    <root>/<clip_id>/frame_00000.pgm    P5, maxval 255
    <root>/<clip_id>/frame_00001.pgm
    ...
    <root>/<clip_id>/gaze.csv           frame,x,y

Mask sequences written by the mask stage mirror the frame names:

    <masks>/<clip_id>/mask_00000.pgm
"""

import csv
import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..constants import VALID_LABELS
from ..constants.formats import (
    FRAME_GLOB,
    FRAME_PATTERN,
    GAZE_FILENAME,
    LABELS_FILENAME,
    LABELS_HEADER,
    MASK_GLOB,
    MASK_PATTERN,
)
from ..errors import ClipLoadError, DatasetError
from ..models.clip import Clip
from .gaze_parser import GazeCsvParser, clamp_trace
from .pgm_parser import read_pgm, write_pgm

logger = logging.getLogger(__name__)

_INDEX_RE = re.compile(r'^(?:frame|mask)_(\d+)$')


def _indexed_files(directory: Path, pattern: str, kind: str) -> List[Path]:
    """List `<kind>_NNNNN.pgm` files in index order, rejecting gaps."""
    indexed: Dict[int, Path] = {}
    for path in directory.glob(pattern):
        match = _INDEX_RE.match(path.stem)
        if not match:
            raise ClipLoadError(f"{directory}: unexpected file name {path.name}")
        indexed[int(match.group(1))] = path

    if not indexed:
        raise ClipLoadError(f"{directory}: no {kind} files found")

    for expected in range(len(indexed)):
        if expected not in indexed:
            raise ClipLoadError(f"{directory}: missing {kind} index {expected}")

    return [indexed[i] for i in range(len(indexed))]


def _load_stack(files: Sequence[Path], directory: Path) -> np.ndarray:
    images = []
    shape = None
    for path in files:
        pixels = read_pgm(path)
        if shape is None:
            shape = pixels.shape
        elif pixels.shape != shape:
            raise ClipLoadError(
                f"{directory}: {path.name} is {pixels.shape[1]}x{pixels.shape[0]}, "
                f"expected {shape[1]}x{shape[0]}"
            )
        images.append(pixels)
    return np.stack(images, axis=0)


def load_clip(clip_dir: str | Path, label: Optional[int] = None, with_gaze: bool = True) -> Clip:
    """
    Load a clip directory.

    Args:
        clip_dir: Directory holding frame_%05d.pgm files and gaze.csv
        label: Outcome label, if known
        with_gaze: Also parse gaze.csv (coordinates clamped to the frame)

    Returns:
        Clip with frames in index order

    Raises:
        ClipLoadError: no frames, an index gap, bad PGM, or mixed frame sizes
        GazeParseError: malformed gaze.csv
    """
    clip_dir = Path(clip_dir)
    if not clip_dir.is_dir():
        raise ClipLoadError(f"clip directory does not exist: {clip_dir}")

    frames = _load_stack(_indexed_files(clip_dir, FRAME_GLOB, 'frame'), clip_dir)

    gaze = None
    if with_gaze:
        gaze_path = clip_dir / GAZE_FILENAME
        if not gaze_path.exists():
            raise ClipLoadError(f"{clip_dir}: missing {GAZE_FILENAME}")
        gaze = GazeCsvParser(gaze_path, frames.shape[0], clip_id=clip_dir.name).get_trace()
        gaze = clamp_trace(gaze, frames.shape[1], frames.shape[2])

    return Clip(clip_id=clip_dir.name, frames=frames, label=label, gaze=gaze)


def save_clip_frames(clip_dir: str | Path, frames: np.ndarray) -> List[Path]:
    """Write a (T, H, W) uint8 stack as frame_%05d.pgm files."""
    clip_dir = Path(clip_dir)
    clip_dir.mkdir(parents=True, exist_ok=True)
    return [write_pgm(clip_dir / FRAME_PATTERN.format(t), frame) for t, frame in enumerate(frames)]


def save_mask_sequence(out_dir: str | Path, masks: Sequence[np.ndarray]) -> List[Path]:
    """Write quantized masks as mask_%05d.pgm files, mirroring frame names."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return [write_pgm(out_dir / MASK_PATTERN.format(t), mask) for t, mask in enumerate(masks)]


def load_mask_sequence(mask_dir: str | Path) -> np.ndarray:
    """Load mask_%05d.pgm files into a (T, H, W) uint8 stack."""
    mask_dir = Path(mask_dir)
    if not mask_dir.is_dir():
        raise ClipLoadError(f"mask directory does not exist: {mask_dir}")
    return _load_stack(_indexed_files(mask_dir, MASK_GLOB, 'mask'), mask_dir)


def write_labels_csv(root: str | Path, labels: Dict[str, int]) -> Path:
    """Write `<root>/labels.csv` in the given clip order."""
    path = Path(root) / LABELS_FILENAME
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(LABELS_HEADER)
        for clip_id, label in labels.items():
            writer.writerow([clip_id, label])
    return path


class DatasetParser:
    """
    Parser for a dataset root.

    Usage:
        dataset = DatasetParser("data/")
        dataset.parse()

        for clip_id in dataset.clip_ids:
            clip = dataset.load_clip(clip_id)
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.labels: Dict[str, int] = {}
        self._parsed = False

    def parse(self) -> None:
        """Parse labels.csv."""
        if not self.root.is_dir():
            raise DatasetError(f"dataset root does not exist: {self.root}")
        labels_path = self.root / LABELS_FILENAME
        if not labels_path.exists():
            raise DatasetError(f"{self.root}: missing {LABELS_FILENAME}")

        with open(labels_path, 'r', encoding='utf-8', newline='') as f:
            reader = csv.reader(f)
            header = next(reader, None)
            if header is None or tuple(h.strip() for h in header) != LABELS_HEADER:
                raise DatasetError(f"{labels_path}:1: header must be 'clip_id,label'")
            for row in reader:
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != 2:
                    raise DatasetError(f"{labels_path}:{reader.line_num}: expected 2 fields")
                clip_id, label_text = row[0].strip(), row[1].strip()
                try:
                    label = int(label_text)
                except ValueError:
                    raise DatasetError(f"{labels_path}:{reader.line_num}: bad label {label_text!r}")
                if label not in VALID_LABELS:
                    raise DatasetError(f"{labels_path}:{reader.line_num}: label must be 0 or 1")
                if clip_id in self.labels:
                    raise DatasetError(f"{labels_path}:{reader.line_num}: duplicate clip {clip_id!r}")
                self.labels[clip_id] = label

        if not self.labels:
            raise DatasetError(f"{labels_path}: no clips listed")
        logger.info("dataset %s: %d clips", self.root, len(self.labels))
        self._parsed = True

    @property
    def clip_ids(self) -> List[str]:
        if not self._parsed:
            self.parse()
        return sorted(self.labels)

    def clip_dir(self, clip_id: str) -> Path:
        return self.root / clip_id

    def load_clip(self, clip_id: str, with_gaze: bool = True) -> Clip:
        if not self._parsed:
            self.parse()
        if clip_id not in self.labels:
            raise DatasetError(f"{self.root}: clip {clip_id!r} not in {LABELS_FILENAME}")
        return load_clip(self.clip_dir(clip_id), label=self.labels[clip_id], with_gaze=with_gaze)

    def load_all(self, with_gaze: bool = True) -> List[Clip]:
        """Load every clip, ordered by clip_id."""
        return [self.load_clip(cid, with_gaze=with_gaze) for cid in self.clip_ids]
