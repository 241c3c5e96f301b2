# Metrics
#
# Confusion metrics, ROC/PR curves and trust quantification.

from .evaluation import (
    accuracy,
    confusion,
    evaluate,
    f1,
    mcc,
    pr_auc,
    pr_curve,
    precision,
    roc_auc,
    roc_curve,
    sensitivity,
    specificity,
)
from .trust import (
    class_priors,
    net_trust_score,
    question_answer_trust,
    trust_density,
    trust_report,
    trust_spectrum,
)

__all__ = [
    'accuracy',
    'confusion',
    'evaluate',
    'f1',
    'mcc',
    'pr_auc',
    'pr_curve',
    'precision',
    'roc_auc',
    'roc_curve',
    'sensitivity',
    'specificity',
    'class_priors',
    'net_trust_score',
    'question_answer_trust',
    'trust_density',
    'trust_report',
    'trust_spectrum',
]
