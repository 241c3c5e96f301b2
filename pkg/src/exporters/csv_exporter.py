"""
CSV Exporter: predictions, loss curves, ROC/PR points, trust densities
and model comparison tables.
"""

import csv
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..constants.formats import PREDICTIONS_HEADER
from ..models.prediction import Prediction
from ..models.reports import TrustReport


def _write_rows(filepath: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)
    with open(filepath, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    return filepath


def _num(value: float) -> str:
    return repr(float(value))


def write_predictions(filepath: str | Path, preds: Sequence[Prediction]) -> Path:
    """clip_id,true,pred,p0,p1 with full-precision probabilities."""
    rows = ((p.clip_id, p.true_label, p.predicted, _num(p.probs[0]), _num(p.probs[1])) for p in preds)
    return _write_rows(filepath, PREDICTIONS_HEADER, rows)


def write_loss_curve(filepath: str | Path, epoch_losses: Sequence[float],
                     initial: Optional[float] = None) -> Path:
    """epoch,loss; epoch 0 holds the loss before training when given."""
    rows: List[Tuple] = []
    if initial is not None:
        rows.append((0, _num(initial)))
    rows.extend((i, _num(v)) for i, v in enumerate(epoch_losses, 1))
    return _write_rows(filepath, ("epoch", "loss"), rows)


def write_curve(filepath: str | Path, points: Sequence[Tuple[float, float]], x_name: str, y_name: str) -> Path:
    return _write_rows(filepath, (x_name, y_name), ((_num(x), _num(y)) for x, y in points))


def write_density(filepath: str | Path, report: TrustReport) -> Path:
    """q followed by one density column per class."""
    labels = sorted(report.per_class)
    header = ["q"] + [f"density_{z}" for z in labels]
    rows = (
        [_num(q)] + [_num(report.per_class[z].density[i]) for z in labels]
        for i, q in enumerate(report.grid)
    )
    return _write_rows(filepath, header, rows)


def write_comparison(filepath: str | Path, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
    return _write_rows(filepath, header, rows)
