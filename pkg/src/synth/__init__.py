# Synthetic Data
#
# Seeded clip + gaze datasets where the outcome is visible only in the
# region the gaze follows, plus dataset inspection helpers.

from .generator import (
    DatasetSummary,
    assign_labels,
    describe,
    discriminability,
    generate,
    generate_clips,
    oracle_predictions,
    orientation_statistic,
    render_clip,
    stripe_patch,
)

__all__ = [
    'DatasetSummary',
    'assign_labels',
    'describe',
    'discriminability',
    'generate',
    'generate_clips',
    'oracle_predictions',
    'orientation_statistic',
    'render_clip',
    'stripe_patch',
]
