# Toolkit constants
#
# Defaults, class labels and on-disk format constants shared by every
# module.

from .classes import (
    LABEL_UNSUCCESSFUL,
    LABEL_SUCCESSFUL,
    CLASS_NAMES,
    POSITIVE_LABEL,
    VALID_LABELS,
    get_class_name,
)
from .defaults import DEFAULT_SEED, SEED_ENV_VAR

__all__ = [
    'LABEL_UNSUCCESSFUL',
    'LABEL_SUCCESSFUL',
    'CLASS_NAMES',
    'POSITIVE_LABEL',
    'VALID_LABELS',
    'get_class_name',
    'DEFAULT_SEED',
    'SEED_ENV_VAR',
]
