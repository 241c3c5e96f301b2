# Exporters
#
# Write reports, predictions, plots, previews and workbooks.

from .json_exporter import JsonExporter, read_json
from .csv_exporter import write_comparison, write_curve, write_density, write_loss_curve, write_predictions
from .svg_exporter import SvgPlot, density_plot, pr_plot, roc_plot
from .image_exporter import preview_image, save_previews

# XlsxExporter is optional - requires openpyxl
try:
    from .xlsx import XlsxExporter, OPENPYXL_AVAILABLE
    XLSX_AVAILABLE = OPENPYXL_AVAILABLE
except ImportError:
    XLSX_AVAILABLE = False
    XlsxExporter = None

__all__ = [
    'JsonExporter',
    'read_json',
    'write_comparison',
    'write_curve',
    'write_density',
    'write_loss_curve',
    'write_predictions',
    'SvgPlot',
    'density_plot',
    'pr_plot',
    'roc_plot',
    'preview_image',
    'save_previews',
    'XlsxExporter',
    'XLSX_AVAILABLE',
]
