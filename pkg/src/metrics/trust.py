"""
Trust quantification over prediction sets.

Q(x) = C^alpha when the predicted label matches the ground truth z,
(1 - C)^beta otherwise, with C the softmax confidence of the predicted
label. A class's trust spectrum is the mean Q over samples whose ground
truth is that class; the NetTrustScore weights the spectra by class
priors (empirical frequencies, or uniform on request).
"""

import logging
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.stats import gaussian_kde

from ..constants import VALID_LABELS
from ..models.config import TrustConfig
from ..models.prediction import Prediction
from ..models.reports import ClassTrust, TrustReport

logger = logging.getLogger(__name__)


def question_answer_trust(pred: Prediction, z: int, cfg: TrustConfig) -> float:
    confidence = pred.confidence
    if pred.predicted == z:
        return confidence ** cfg.alpha
    return (1.0 - confidence) ** cfg.beta


def class_trust_values(preds: Sequence[Prediction], z: int, cfg: TrustConfig) -> List[float]:
    """
    Q for every sample whose ground truth is z.

    Raises:
        ValueError: no sample of class z
    """
    values = [question_answer_trust(p, z, cfg) for p in preds if p.true_label == z]
    if not values:
        raise ValueError(f"no samples with ground truth {z}")
    return values


def trust_spectrum(preds: Sequence[Prediction], z: int, cfg: TrustConfig) -> float:
    return float(np.mean(class_trust_values(preds, z, cfg)))


def class_priors(preds: Sequence[Prediction], uniform: bool = False) -> Dict[int, float]:
    """
    P(z) per class.

    Raises:
        ValueError: a class has no samples
    """
    counts = {z: sum(1 for p in preds if p.true_label == z) for z in VALID_LABELS}
    missing = [z for z, n in counts.items() if n == 0]
    if missing:
        raise ValueError(f"classes {missing} have no samples; NetTrustScore needs every class")
    if uniform:
        return {z: 1.0 / len(counts) for z in counts}
    total = sum(counts.values())
    return {z: n / total for z, n in counts.items()}


def net_trust_score(preds: Sequence[Prediction], cfg: TrustConfig) -> float:
    priors = class_priors(preds, cfg.uniform_prior)
    return float(sum(prior * trust_spectrum(preds, z, cfg) for z, prior in priors.items()))


def trust_grid(cfg: TrustConfig) -> np.ndarray:
    return np.linspace(0.0, 1.0, cfg.grid_size)


def trust_density(preds: Sequence[Prediction], z: int, cfg: TrustConfig) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gaussian KDE of class z's Q values on [0, 1], renormalized to unit area.

    A single sample, or samples that are all equal, get a narrow Gaussian
    two grid steps wide instead of a bandwidth estimate.
    """
    values = np.asarray(class_trust_values(preds, z, cfg))
    grid = trust_grid(cfg)
    if values.size >= 2 and np.ptp(values) > 0.0:
        density = gaussian_kde(values, bw_method=cfg.bandwidth)(grid)
    else:
        width = 2.0 / (cfg.grid_size - 1)
        density = np.exp(-0.5 * ((grid - values.mean()) / width) ** 2)
        logger.debug("class %d: degenerate trust sample, narrow kernel", z)
    area = trapezoid(density, grid)
    return grid, density / area


def trust_report(preds: Sequence[Prediction], cfg: TrustConfig) -> TrustReport:
    priors = class_priors(preds, cfg.uniform_prior)
    per_class = {}
    grid = trust_grid(cfg)
    for z, prior in priors.items():
        qz = class_trust_values(preds, z, cfg)
        _, density = trust_density(preds, z, cfg)
        per_class[z] = ClassTrust(
            label=z,
            qz=qz,
            spectrum=float(np.mean(qz)),
            density=density.tolist(),
            prior=prior,
        )
    nts = float(sum(ct.prior * ct.spectrum for ct in per_class.values()))
    return TrustReport(per_class=per_class, nts=nts, grid=grid.tolist(), uniform_prior=cfg.uniform_prior)
