# Gaze-Guided Outcome Toolkit
#
# Turns eye-tracking traces into visual masks and uses them to steer a
# spatiotemporal attention classifier that predicts task outcome from
# video clips.
#
# Main components:
# - parsers: On-disk formats (PGM frames/masks, gaze CSV, datasets, checkpoints, predictions)
# - extractors: Visual masks from gaze, autoencoder features from clips
# - engine: numpy reverse-mode differentiation, layers and Adam
# - networks: Perceptual net, autoencoder, SE attention classifier
# - metrics: Confusion metrics, ROC/PR curves, trust quantification
# - synth: Synthetic clip + gaze datasets
# - exporters: JSON, CSV, SVG, PNG and XLSX outputs
# - models: Data classes and configs

__version__ = "1.0.0"

from .parsers import (
    DatasetParser,
    CheckpointParser,
    GazeCsvParser,
    PredictionsParser,
    load_clip,
    load_checkpoint,
    save_checkpoint,
    load_predictions,
)

from .extractors import (
    MaskExtractor,
    FeatureExtractor,
    apply_mask,
)

from .models import (
    Clip,
    GazePoint,
    GazeTrace,
    VisualMask,
    Prediction,
    MaskConfig,
    AEConfig,
    ClassifierConfig,
    TrustConfig,
    SynthConfig,
    EvalReport,
    TrustReport,
)

from .networks import (
    Autoencoder,
    AttentionClassifier,
    train_autoencoder,
    train_classifier,
)

from .metrics import evaluate, trust_report

from .exporters import JsonExporter

from .errors import (
    GazeGuideError,
    UsageError,
    DataError,
    NumericalError,
)

__all__ = [
    '__version__',
    # Parsers
    'DatasetParser',
    'CheckpointParser',
    'GazeCsvParser',
    'PredictionsParser',
    'load_clip',
    'load_checkpoint',
    'save_checkpoint',
    'load_predictions',
    # Extractors
    'MaskExtractor',
    'FeatureExtractor',
    'apply_mask',
    # Models
    'Clip',
    'GazePoint',
    'GazeTrace',
    'VisualMask',
    'Prediction',
    'MaskConfig',
    'AEConfig',
    'ClassifierConfig',
    'TrustConfig',
    'SynthConfig',
    'EvalReport',
    'TrustReport',
    # Networks
    'Autoencoder',
    'AttentionClassifier',
    'train_autoencoder',
    'train_classifier',
    # Metrics
    'evaluate',
    'trust_report',
    # Output
    'JsonExporter',
    # Errors
    'GazeGuideError',
    'UsageError',
    'DataError',
    'NumericalError',
]
