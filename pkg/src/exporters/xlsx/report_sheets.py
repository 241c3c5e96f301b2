"""
Metric, curve, trust and prediction sheets.
"""

from typing import Dict, Sequence

from ...constants import get_class_name
from ...models.prediction import Prediction
from ...models.reports import EVAL_METRIC_KEYS, EvalReport, TrustReport

METRIC_HEADERS = {
    "accuracy": "Accuracy",
    "mcc": "MCC",
    "f1": "F1",
    "specificity": "Specificity",
    "sensitivity": "Sensitivity",
    "roc_auc": "ROC AUC",
    "pr_auc": "PR AUC",
}


class ReportSheetsMixin:
    """Mixin providing evaluation and trust sheet exports."""

    def export_metrics(self, reports: Dict[str, EvalReport]) -> None:
        """One row per model, metrics x100 like a results table."""
        headers = ["Model"] + [METRIC_HEADERS[k] for k in EVAL_METRIC_KEYS] + ["N"]
        ws = self._create_sheet("Metrics", headers)
        for row, (name, report) in enumerate(reports.items(), 2):
            percents = report.as_percent_row()
            values = [name] + [percents[k] for k in EVAL_METRIC_KEYS] + [report.n]
            self._add_row(ws, row, values, row % 2 == 0, number_format="0.0")
        self._auto_column_width(ws)

    def export_curves(self, name: str, report: EvalReport) -> None:
        ws = self._create_sheet(f"{name} curves", ["FPR", "TPR", "", "Recall", "Precision"])
        rows = max(len(report.roc_points), len(report.pr_points))
        for i in range(rows):
            roc = list(report.roc_points[i]) if i < len(report.roc_points) else ["", ""]
            pr = list(report.pr_points[i]) if i < len(report.pr_points) else ["", ""]
            self._add_row(ws, i + 2, roc + [""] + pr, number_format="0.0000")
        self._auto_column_width(ws)

    def export_table(self, name: str, headers: Sequence[str], rows: Sequence[Sequence]) -> None:
        ws = self._create_sheet(name, list(headers))
        for row, values in enumerate(rows, 2):
            self._add_row(ws, row, list(values), row % 2 == 0, number_format="0.000")
        self._auto_column_width(ws)

    def export_trust(self, reports: Dict[str, TrustReport]) -> None:
        """Per-class trust spectrum, priors and NTS per model."""
        headers = ["Model", "Class", "N", "Prior", "Trust Spectrum", "NTS", "High Trust"]
        ws = self._create_sheet("Trust", headers)
        row = 2
        for name, report in reports.items():
            for z in sorted(report.per_class):
                ct = report.per_class[z]
                values = [name, get_class_name(z), ct.n, ct.prior, ct.spectrum, report.nts,
                          "yes" if report.high_trust else "no"]
                self._add_row(ws, row, values, row % 2 == 0, number_format="0.000")
                row += 1
        self._auto_column_width(ws)

    def export_predictions(self, name: str, preds: Sequence[Prediction]) -> None:
        ws = self._create_sheet(f"{name} predictions", ["Clip", "True", "Predicted", "P0", "P1", "Correct"])
        for row, p in enumerate(preds, 2):
            values = [p.clip_id, p.true_label, p.predicted, p.probs[0], p.probs[1], "yes" if p.correct else "no"]
            self._add_row(ws, row, values, row % 2 == 0, number_format="0.0000")
        self._auto_column_width(ws)
