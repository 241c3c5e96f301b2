"""
Synthetic clip + gaze dataset.

Each clip shows two striped patches on a dark noisy background, one in
each half of the frame: the "tool" and a decoy with the opposite stripe
orientation. The tool's orientation encodes the outcome (horizontal
stripes = successful), the tool's side is random and independent of the
label, and the gaze trace follows the tool. A frame therefore always
holds one patch of each orientation, so frame-wide statistics carry no
label information, while the region under gaze does.

Unstriped distractor blobs wander over the whole frame.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from ..constants import LABEL_SUCCESSFUL, LABEL_UNSUCCESSFUL
from ..engine.rng import STREAM_SYNTH, generator, spawn
from ..errors import DataError, DatasetError
from ..models.clip import Clip
from ..models.config import SynthConfig
from ..models.gaze import GazePoint, GazeTrace
from ..parsers.dataset_parser import DatasetParser, save_clip_frames, write_labels_csv
from ..parsers.gaze_parser import write_gaze_csv
from ..constants.formats import GAZE_FILENAME
from ..utils import round_half_up

logger = logging.getLogger(__name__)

BACKGROUND = 40.0
STRIPE_BRIGHT = 220.0
STRIPE_DARK = 110.0
DISTRACTOR_LEVEL = 165.0
CLIP_ID_PATTERN = "clip_{:04d}"


def stripe_patch(size: int, period: int, horizontal: bool) -> np.ndarray:
    """size x size patch of alternating bright/dark bands, half a period wide."""
    bands = (np.arange(size) // max(1, period // 2)) % 2 == 0
    profile = np.where(bands, STRIPE_BRIGHT, STRIPE_DARK)
    if horizontal:
        return np.repeat(profile[:, None], size, axis=1)
    return np.repeat(profile[None, :], size, axis=0)


def _bounce_path(rng: np.random.Generator, frames: int, lo: Tuple[int, int], hi: Tuple[int, int]) -> np.ndarray:
    """
    Integer top-left positions (frames, 2) as (x, y), moving with a random
    velocity and reflecting off the box [lo, hi].
    """
    pos = np.array([rng.integers(lo[0], hi[0] + 1), rng.integers(lo[1], hi[1] + 1)], dtype=np.int64)
    vel = rng.integers(1, 3, size=2) * rng.choice([-1, 1], size=2)
    path = np.empty((frames, 2), dtype=np.int64)
    for t in range(frames):
        path[t] = pos
        nxt = pos + vel
        for axis in range(2):
            if nxt[axis] < lo[axis] or nxt[axis] > hi[axis]:
                vel[axis] = -vel[axis]
                nxt[axis] = pos[axis] + vel[axis]
            nxt[axis] = min(max(nxt[axis], lo[axis]), hi[axis])
        pos = nxt
    return path


def render_clip(clip_id: str, label: int, cfg: SynthConfig, rng: np.random.Generator) -> Clip:
    """Render one clip and its gaze trace."""
    T, H, W, P = cfg.frames, cfg.height, cfg.width, cfg.patch
    half = W // 2
    tool_side = int(rng.integers(2))
    tool_horizontal = label == LABEL_SUCCESSFUL
    tool_tex = stripe_patch(P, cfg.stripe_period, tool_horizontal)
    decoy_tex = stripe_patch(P, cfg.stripe_period, not tool_horizontal)

    def half_box(side: int):
        x0 = side * half
        return (x0 + 1, 1), (x0 + half - P - 1, H - P - 1)

    tool_path = _bounce_path(rng, T, *half_box(tool_side))
    decoy_path = _bounce_path(rng, T, *half_box(1 - tool_side))
    blob = max(2, P // 2)
    blob_paths = [_bounce_path(rng, T, (0, 0), (W - blob, H - blob)) for _ in range(cfg.distractors)]

    frames = np.full((T, H, W), BACKGROUND, dtype=np.float64)
    for t in range(T):
        for path in blob_paths:
            x, y = path[t]
            frames[t, y:y + blob, x:x + blob] = DISTRACTOR_LEVEL
        for path, tex in ((decoy_path, decoy_tex), (tool_path, tool_tex)):
            x, y = path[t]
            frames[t, y:y + P, x:x + P] = tex
    if cfg.noise > 0:
        frames += rng.normal(0.0, cfg.noise, size=frames.shape)
    frames = np.clip(np.floor(frames + 0.5), 0, 255).astype(np.uint8)

    centers = tool_path.astype(np.float64) + (P - 1) / 2.0
    jitter = rng.normal(0.0, cfg.gaze_jitter, size=(T, 2)) if cfg.gaze_jitter > 0 else np.zeros((T, 2))
    missing = rng.random(T) < cfg.missing_rate
    points = []
    for t in range(T):
        if missing[t]:
            points.append(GazePoint.missing(t))
            continue
        gx = float(np.clip(centers[t, 0] + jitter[t, 0], 0.0, W - 1.0))
        gy = float(np.clip(centers[t, 1] + jitter[t, 1], 0.0, H - 1.0))
        points.append(GazePoint(frame=t, x=gx, y=gy, present=True))
    return Clip(clip_id=clip_id, frames=frames, label=label, gaze=GazeTrace(clip_id, points))


def assign_labels(cfg: SynthConfig) -> Dict[str, int]:
    """Exactly cfg.positive_count successful clips, at seeded positions."""
    order = generator(cfg.seed, STREAM_SYNTH, 0).permutation(cfg.clips)
    positives = set(order[:cfg.positive_count].tolist())
    return {
        CLIP_ID_PATTERN.format(i): LABEL_SUCCESSFUL if i in positives else LABEL_UNSUCCESSFUL
        for i in range(cfg.clips)
    }


def generate_clips(cfg: SynthConfig, progress: bool = False) -> List[Clip]:
    """All clips in memory, ordered by clip_id; identical for any worker count."""
    labels = assign_labels(cfg)
    rngs = spawn(cfg.seed, cfg.clips, STREAM_SYNTH, 1)
    jobs = list(zip(labels.items(), rngs))

    def build(job):
        (clip_id, label), rng = job
        return render_clip(clip_id, label, cfg, rng)

    if cfg.workers == 1:
        return [build(job) for job in tqdm(jobs, desc="synth", unit="clip", disable=not progress)]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(tqdm(pool.map(build, jobs), total=len(jobs), desc="synth", unit="clip", disable=not progress))


def write_clip(root: Path, clip: Clip) -> None:
    clip_dir = root / clip.clip_id
    save_clip_frames(clip_dir, clip.frames)
    write_gaze_csv(clip_dir / GAZE_FILENAME, clip.gaze)


def generate(cfg: SynthConfig, out: str | Path, progress: bool = False) -> Dict[str, int]:
    """
    Write a dataset root and return its labels.

    Raises:
        DataError: the output directory cannot be written
    """
    root = Path(out)
    clips = generate_clips(cfg, progress)
    try:
        root.mkdir(parents=True, exist_ok=True)
        for clip in clips:
            write_clip(root, clip)
        labels = {clip.clip_id: clip.label for clip in clips}
        write_labels_csv(root, labels)
    except OSError as e:
        raise DataError(f"cannot write dataset to {root}: {e}")
    logger.info("wrote %d clips to %s (%d successful)", len(clips), root, cfg.positive_count)
    return labels


# ----------------------------------------------------------------------
# Inspection
# ----------------------------------------------------------------------

@dataclass
class DatasetSummary:
    clips: int
    successful: int
    unsuccessful: int
    frames: int
    frame_size: Tuple[int, int]
    missing_gaze_fraction: float

    @property
    def balance(self) -> float:
        """Fraction of successful clips."""
        return self.successful / self.clips

    def to_dict(self):
        return {
            'clips': self.clips,
            'successful': self.successful,
            'unsuccessful': self.unsuccessful,
            'balance': self.balance,
            'frames': self.frames,
            'frame_size': list(self.frame_size),
            'missing_gaze_fraction': self.missing_gaze_fraction,
        }


def describe(root: str | Path) -> DatasetSummary:
    """
    Counts, class balance and missing-gaze fraction of a dataset root.

    Raises:
        DatasetError: the root has no labels.csv or lists no clips
    """
    dataset = DatasetParser(root)
    clips = dataset.load_all()
    if not clips:
        raise DatasetError(f"{root}: no clips")
    total_frames = sum(c.num_frames for c in clips)
    missing = sum(c.gaze.missing_count for c in clips)
    successful = sum(1 for c in clips if c.label == LABEL_SUCCESSFUL)
    return DatasetSummary(
        clips=len(clips),
        successful=successful,
        unsuccessful=len(clips) - successful,
        frames=total_frames,
        frame_size=(clips[0].height, clips[0].width),
        missing_gaze_fraction=missing / total_frames,
    )


def orientation_statistic(region: np.ndarray) -> float:
    """
    Mean |d/dy| minus mean |d/dx|: positive for horizontal stripes,
    negative for vertical ones.
    """
    region = np.asarray(region, dtype=np.float64)
    dy = np.abs(np.diff(region, axis=-2)).mean()
    dx = np.abs(np.diff(region, axis=-1)).mean()
    return float(dy - dx)


def _gaze_window(frame: np.ndarray, x: float, y: float, size: int) -> np.ndarray:
    h, w = frame.shape
    x0 = min(max(round_half_up(x - (size - 1) / 2.0), 0), w - size)
    y0 = min(max(round_half_up(y - (size - 1) / 2.0), 0), h - size)
    return frame[y0:y0 + size, x0:x0 + size]


def oracle_predictions(clips: Sequence[Clip], patch: int) -> Tuple[List[int], List[int]]:
    """
    Label guesses from the orientation statistic: (gaze patch, full frame).

    The gaze-patch guess averages the statistic over windows centered on
    the present gaze samples.
    """
    gaze_guess, frame_guess = [], []
    for clip in clips:
        values = [
            orientation_statistic(_gaze_window(clip.frames[p.frame], p.x, p.y, patch))
            for p in clip.gaze.present_points
        ]
        local = float(np.mean(values)) if values else 0.0
        gaze_guess.append(LABEL_SUCCESSFUL if local > 0 else LABEL_UNSUCCESSFUL)
        whole = orientation_statistic(clip.frames)
        frame_guess.append(LABEL_SUCCESSFUL if whole > 0 else LABEL_UNSUCCESSFUL)
    return gaze_guess, frame_guess


def discriminability(clips: Sequence[Clip], patch: int) -> Dict[str, float]:
    """Accuracy of the orientation statistic under gaze vs over the whole frame."""
    gaze_guess, frame_guess = oracle_predictions(clips, patch)
    truth = np.array([c.label for c in clips])
    return {
        'gaze_patch_accuracy': float(np.mean(np.array(gaze_guess) == truth)),
        'full_frame_accuracy': float(np.mean(np.array(frame_guess) == truth)),
    }
