"""
Outcome classes.

The positive class for every confusion-based metric is "successful".
"""

LABEL_UNSUCCESSFUL = 0
LABEL_SUCCESSFUL = 1

CLASS_NAMES = {
    LABEL_UNSUCCESSFUL: "unsuccessful",
    LABEL_SUCCESSFUL: "successful",
}

POSITIVE_LABEL = LABEL_SUCCESSFUL
VALID_LABELS = (LABEL_UNSUCCESSFUL, LABEL_SUCCESSFUL)


def get_class_name(label: int) -> str:
    """Get the display name for a label."""
    return CLASS_NAMES.get(label, f'class_{label}')
