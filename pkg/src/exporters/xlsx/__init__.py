"""
Excel (XLSX) exporter for evaluation and trust reports.

- base_exporter: XlsxExporterBase with styles and helpers
- report_sheets: metrics, curves, trust and prediction sheets
"""

from .base_exporter import OPENPYXL_AVAILABLE, XlsxExporterBase
from .report_sheets import ReportSheetsMixin


class XlsxExporter(ReportSheetsMixin, XlsxExporterBase):
    """
    Exports reports to an Excel workbook.

    Usage:
        exporter = XlsxExporter("runs")
        exporter.export_metrics({"M1": report_m1, "M2": report_m2})
        exporter.export_trust({"M1": trust_m1, "M2": trust_m2})
        exporter.save("comparison.xlsx")
    """


__all__ = ['XlsxExporter', 'OPENPYXL_AVAILABLE']
