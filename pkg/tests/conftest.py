"""Shared test fixtures."""

import numpy as np
import pytest

from src.models import Clip, GazePoint, GazeTrace, Prediction, SynthConfig
from src.synth import generate, generate_clips

# Random instances per gradient check.
GRADCHECK_INSTANCES = 20


def make_trace(clip_id, coords):
    """Trace from a list of (x, y) pairs; None marks a missing frame."""
    points = [
        GazePoint.missing(t) if xy is None else GazePoint(t, float(xy[0]), float(xy[1]), True)
        for t, xy in enumerate(coords)
    ]
    return GazeTrace(clip_id, points)


def make_prediction(clip_id, p1, true_label):
    return Prediction.from_probs(clip_id, (1.0 - p1, p1), true_label)


@pytest.fixture
def tiny_synth_cfg():
    """8 clips of 8 frames at 32x32: small enough for training tests."""
    return SynthConfig(clips=8, frames=8, height=32, width=32, patch=8, stripe_period=4,
                       distractors=1, noise=4.0, seed=3)


@pytest.fixture
def tiny_clips(tiny_synth_cfg):
    return generate_clips(tiny_synth_cfg)


@pytest.fixture
def tiny_dataset(tmp_path, tiny_synth_cfg):
    root = tmp_path / "data"
    generate(tiny_synth_cfg, root)
    return root


@pytest.fixture
def small_clip():
    rng = np.random.default_rng(0)
    frames = rng.integers(0, 256, size=(4, 16, 16), dtype=np.uint8)
    trace = make_trace("c0", [(3.0, 4.0), None, (8.0, 8.0), (12.0, 2.0)])
    return Clip("c0", frames, label=1, gaze=trace)
