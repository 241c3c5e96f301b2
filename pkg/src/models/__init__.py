# Data Models
#
# Data classes for gaze traces, clips, predictions, configs and reports.

from .gaze import GazePoint, GazeTrace
from .clip import Clip
from .mask import VisualMask
from .features import ClipFeatures
from .prediction import Prediction
from .config import MaskConfig, AEConfig, ClassifierConfig, TrustConfig, SynthConfig
from .reports import (
    ConfusionCounts,
    EvalReport,
    ClassTrust,
    TrustReport,
    RunManifest,
    EVAL_METRIC_KEYS,
)

__all__ = [
    'GazePoint',
    'GazeTrace',
    'Clip',
    'VisualMask',
    'ClipFeatures',
    'Prediction',
    'MaskConfig',
    'AEConfig',
    'ClassifierConfig',
    'TrustConfig',
    'SynthConfig',
    'ConfusionCounts',
    'EvalReport',
    'ClassTrust',
    'TrustReport',
    'RunManifest',
    'EVAL_METRIC_KEYS',
]
