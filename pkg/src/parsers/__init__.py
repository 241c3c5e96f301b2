# File Parsers
#
# Parsers for the on-disk formats: PGM frames/masks, gaze CSV, dataset
# roots, prediction tables and GZGD checkpoints.

from .pgm_parser import PgmParser, read_pgm, write_pgm, encode_pgm
from .gaze_parser import (
    GazeCsvParser,
    parse_gaze_csv,
    serialize_gaze_csv,
    interpolate_missing,
    clamp_trace,
    write_gaze_csv,
)
from .dataset_parser import (
    DatasetParser,
    load_clip,
    save_clip_frames,
    save_mask_sequence,
    load_mask_sequence,
    write_labels_csv,
)
from .checkpoint_parser import (
    Checkpoint,
    CheckpointParser,
    save_checkpoint,
    load_checkpoint,
    encode_checkpoint,
    decode_checkpoint,
)
from .predictions_parser import PredictionsParser, load_predictions

__all__ = [
    # PGM
    'PgmParser',
    'read_pgm',
    'write_pgm',
    'encode_pgm',
    # Gaze
    'GazeCsvParser',
    'parse_gaze_csv',
    'serialize_gaze_csv',
    'interpolate_missing',
    'clamp_trace',
    'write_gaze_csv',
    # Dataset
    'DatasetParser',
    'load_clip',
    'save_clip_frames',
    'save_mask_sequence',
    'load_mask_sequence',
    'write_labels_csv',
    # Checkpoints
    'Checkpoint',
    'CheckpointParser',
    'save_checkpoint',
    'load_checkpoint',
    'encode_checkpoint',
    'decode_checkpoint',
    # Predictions
    'PredictionsParser',
    'load_predictions',
]
