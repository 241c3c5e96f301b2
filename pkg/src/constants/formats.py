"""
On-disk naming and binary container constants.
"""

# Dataset layout
LABELS_FILENAME = "labels.csv"
GAZE_FILENAME = "gaze.csv"
FRAME_PATTERN = "frame_{:05d}.pgm"
FRAME_GLOB = "frame_*.pgm"
MASK_PATTERN = "mask_{:05d}.pgm"
MASK_GLOB = "mask_*.pgm"
PREVIEW_PATTERN = "preview_{:05d}.png"
MANIFEST_FILENAME = "manifest.json"

GAZE_HEADER = ("frame", "x", "y")
LABELS_HEADER = ("clip_id", "label")
PREDICTIONS_HEADER = ("clip_id", "true", "pred", "p0", "p1")

# PGM
PGM_MAGIC = b"P5"
PGM_MAXVAL = 255

# GZGD checkpoint container
CHECKPOINT_MAGIC = b"GZGD"
CHECKPOINT_VERSION = 1
SUPPORTED_CHECKPOINT_VERSIONS = (1,)

# dtype codes inside the container
DTYPE_CODES = {
    'f32': 0,
    'f64': 1,
}
DTYPE_NAMES = {code: name for name, code in DTYPE_CODES.items()}
DTYPE_NUMPY = {
    'f32': '<f4',
    'f64': '<f8',
}
