"""
Binary classification metrics and ranking curves.

The positive class is "successful" (label 1); ranking scores are the
predicted probability of that class.

Degenerate denominators return 0: MCC when any confusion marginal is
empty, F1 when precision + recall = 0, and sensitivity / specificity /
precision when their class (or prediction set) is empty.
"""

import math
from typing import List, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid

from ..constants import POSITIVE_LABEL
from ..models.prediction import Prediction
from ..models.reports import ConfusionCounts, EvalReport

PR_AREA_METHOD = "average_precision"


def confusion(preds: Sequence[Prediction]) -> ConfusionCounts:
    if not preds:
        raise ValueError("cannot build a confusion matrix from zero predictions")
    tp = tn = fp = fn = 0
    for p in preds:
        positive = p.predicted == POSITIVE_LABEL
        if p.correct:
            tp, tn = (tp + 1, tn) if positive else (tp, tn + 1)
        else:
            fp, fn = (fp + 1, fn) if positive else (fp, fn + 1)
    return ConfusionCounts(tp=tp, tn=tn, fp=fp, fn=fn)


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def accuracy(c: ConfusionCounts) -> float:
    return (c.tp + c.tn) / c.total


def sensitivity(c: ConfusionCounts) -> float:
    """Recall of the positive class, tp / (tp + fn)."""
    return _ratio(c.tp, c.tp + c.fn)


def specificity(c: ConfusionCounts) -> float:
    return _ratio(c.tn, c.tn + c.fp)


def precision(c: ConfusionCounts) -> float:
    return _ratio(c.tp, c.tp + c.fp)


def f1(c: ConfusionCounts) -> float:
    p, r = precision(c), sensitivity(c)
    if p + r == 0.0:
        return 0.0
    return 2.0 * p * r / (p + r)


def mcc(c: ConfusionCounts) -> float:
    """Matthews correlation coefficient in [-1, 1]."""
    marginals = (c.tp + c.fp) * (c.tp + c.fn) * (c.tn + c.fp) * (c.tn + c.fn)
    if marginals == 0:
        return 0.0
    return (c.tp * c.tn - c.fp * c.fn) / math.sqrt(marginals)


# ----------------------------------------------------------------------
# Curves
# ----------------------------------------------------------------------

def _sweep(scores, labels) -> Tuple[np.ndarray, np.ndarray, int, int]:
    """
    Cumulative (tp, fp) when predicting positive for score >= t, one entry
    per distinct score t in decreasing order.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError(f"scores {scores.shape} and labels {labels.shape} must be equal-length vectors")
    positive = labels == POSITIVE_LABEL
    order = np.argsort(-scores, kind='mergesort')
    sorted_scores = scores[order]
    hits = positive[order]
    tp = np.cumsum(hits)
    fp = np.cumsum(~hits)
    last_of_group = np.r_[sorted_scores[1:] != sorted_scores[:-1], True]
    return tp[last_of_group], fp[last_of_group], int(positive.sum()), int((~positive).sum())


def roc_curve(scores, labels) -> List[Tuple[float, float]]:
    """
    (fpr, tpr) points from (0, 0) to (1, 1) over all distinct thresholds.

    Raises:
        ValueError: labels hold a single class
    """
    tp, fp, n_pos, n_neg = _sweep(scores, labels)
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC needs at least one positive and one negative sample")
    fpr = np.r_[0.0, fp / n_neg]
    tpr = np.r_[0.0, tp / n_pos]
    return list(zip(fpr.tolist(), tpr.tolist()))


def roc_auc(scores, labels) -> float:
    """Trapezoid area under the ROC curve (ties get half credit)."""
    points = np.asarray(roc_curve(scores, labels))
    return float(trapezoid(points[:, 1], points[:, 0]))


def pr_curve(scores, labels) -> List[Tuple[float, float]]:
    """
    (recall, precision) points, starting at (0, 1) and reaching recall 1.

    Raises:
        ValueError: no positive samples
    """
    tp, fp, n_pos, _ = _sweep(scores, labels)
    if n_pos == 0:
        raise ValueError("precision-recall needs at least one positive sample")
    recall = np.r_[0.0, tp / n_pos]
    prec = np.r_[1.0, tp / (tp + fp)]
    return list(zip(recall.tolist(), prec.tolist()))


def pr_auc(scores, labels) -> float:
    """Average precision: sum over thresholds of (R_k - R_{k-1}) * P_k."""
    points = np.asarray(pr_curve(scores, labels))
    recall, prec = points[:, 0], points[:, 1]
    return float(np.sum(np.diff(recall) * prec[1:]))


def evaluate(preds: Sequence[Prediction]) -> EvalReport:
    """All metrics and curves for one prediction set."""
    counts = confusion(preds)
    scores = [p.score for p in preds]
    labels = [p.true_label for p in preds]
    return EvalReport(
        accuracy=accuracy(counts),
        mcc=mcc(counts),
        f1=f1(counts),
        specificity=specificity(counts),
        sensitivity=sensitivity(counts),
        roc_auc=roc_auc(scores, labels),
        pr_auc=pr_auc(scores, labels),
        n=len(preds),
        roc_points=roc_curve(scores, labels),
        pr_points=pr_curve(scores, labels),
        confusion=counts,
        pr_area_method=PR_AREA_METHOD,
    )
