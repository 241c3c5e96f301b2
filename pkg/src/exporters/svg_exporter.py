"""
SVG Exporter

Self-contained line plots for ROC, PR and trust density curves.
"""

from pathlib import Path
from typing import List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from ..constants import get_class_name
from ..models.reports import TrustReport

Series = Tuple[str, Sequence[Tuple[float, float]]]

WIDTH = 480
HEIGHT = 420
MARGIN_LEFT = 60
MARGIN_RIGHT = 20
MARGIN_TOP = 40
MARGIN_BOTTOM = 50
COLORS = ("#4472C4", "#C0504D", "#9BBB59", "#8064A2", "#F79646")
TICKS = 5


class SvgPlot:
    """
    Minimal line plot.

    Usage:
        plot = SvgPlot("ROC", "false positive rate", "true positive rate")
        plot.add_series("M2", points)
        plot.add_diagonal()
        plot.save("roc.svg")
    """

    def __init__(self, title: str, x_label: str, y_label: str,
                 x_range: Tuple[float, float] = (0.0, 1.0), y_range: Optional[Tuple[float, float]] = (0.0, 1.0)):
        self.title = title
        self.x_label = x_label
        self.y_label = y_label
        self.x_range = x_range
        self.y_range = y_range
        self.series: List[Tuple[str, List[Tuple[float, float]], bool]] = []
        self.diagonal = False

    def add_series(self, name: str, points: Sequence[Tuple[float, float]], step: bool = False) -> None:
        self.series.append((name, [(float(x), float(y)) for x, y in points], step))

    def add_diagonal(self) -> None:
        self.diagonal = True

    def _y_range(self) -> Tuple[float, float]:
        if self.y_range is not None:
            return self.y_range
        top = max((y for _, pts, _ in self.series for _, y in pts), default=1.0)
        return 0.0, top * 1.05 if top > 0 else 1.0

    def _mapper(self):
        x0, x1 = self.x_range
        y0, y1 = self._y_range()
        plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
        plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

        def to_px(x: float, y: float) -> Tuple[float, float]:
            px = MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w
            py = MARGIN_TOP + plot_h - (y - y0) / (y1 - y0) * plot_h
            return px, py

        return to_px, (x0, x1), (y0, y1)

    def render(self) -> str:
        to_px, (x0, x1), (y0, y1) = self._mapper()
        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(self.title)}</text>',
        ]
        left, top = to_px(x0, y1)
        right, bottom = to_px(x1, y0)
        parts.append(f'<rect x="{left:.1f}" y="{top:.1f}" width="{right - left:.1f}" '
                     f'height="{bottom - top:.1f}" fill="none" stroke="black"/>')
        for i in range(TICKS + 1):
            xv = x0 + (x1 - x0) * i / TICKS
            yv = y0 + (y1 - y0) * i / TICKS
            px, _ = to_px(xv, y0)
            _, py = to_px(x0, yv)
            parts.append(f'<line x1="{px:.1f}" y1="{bottom:.1f}" x2="{px:.1f}" y2="{bottom + 4:.1f}" stroke="black"/>')
            parts.append(f'<text x="{px:.1f}" y="{bottom + 16:.1f}" text-anchor="middle">{xv:.2f}</text>')
            parts.append(f'<line x1="{left - 4:.1f}" y1="{py:.1f}" x2="{left:.1f}" y2="{py:.1f}" stroke="black"/>')
            parts.append(f'<text x="{left - 6:.1f}" y="{py + 4:.1f}" text-anchor="end">{yv:.2f}</text>')
        parts.append(f'<text x="{(left + right) / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">'
                     f'{escape(self.x_label)}</text>')
        parts.append(f'<text x="16" y="{(top + bottom) / 2:.1f}" text-anchor="middle" '
                     f'transform="rotate(-90 16 {(top + bottom) / 2:.1f})">{escape(self.y_label)}</text>')

        if self.diagonal:
            ax, ay = to_px(x0, y0)
            bx, by = to_px(x1, y1)
            parts.append(f'<line x1="{ax:.1f}" y1="{ay:.1f}" x2="{bx:.1f}" y2="{by:.1f}" '
                         f'stroke="#999999" stroke-dasharray="4 4"/>')

        for i, (name, points, step) in enumerate(self.series):
            color = COLORS[i % len(COLORS)]
            coords = []
            for j, (x, y) in enumerate(points):
                if step and j > 0:
                    coords.append(to_px(x, points[j - 1][1]))
                coords.append(to_px(x, y))
            path = " ".join(f"{px:.2f},{py:.2f}" for px, py in coords)
            parts.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="2"/>')
            ly = top + 14 + 14 * i
            parts.append(f'<line x1="{right - 90:.1f}" y1="{ly - 4:.1f}" x2="{right - 74:.1f}" y2="{ly - 4:.1f}" '
                         f'stroke="{color}" stroke-width="2"/>')
            parts.append(f'<text x="{right - 70:.1f}" y="{ly:.1f}">{escape(name)}</text>')

        parts.append('</svg>')
        return "\n".join(parts) + "\n"

    def save(self, filepath: str | Path) -> Path:
        filepath = Path(filepath)
        filepath.parent.mkdir(parents=True, exist_ok=True)
        filepath.write_text(self.render(), encoding='utf-8')
        return filepath


def roc_plot(series: Sequence[Series]) -> SvgPlot:
    plot = SvgPlot("ROC curve", "false positive rate", "true positive rate")
    for name, points in series:
        plot.add_series(name, points)
    plot.add_diagonal()
    return plot


def pr_plot(series: Sequence[Series]) -> SvgPlot:
    plot = SvgPlot("Precision-recall curve", "recall", "precision")
    for name, points in series:
        plot.add_series(name, points, step=True)
    return plot


def density_plot(report: TrustReport, title: str = "Trust density") -> SvgPlot:
    plot = SvgPlot(f"{title} (NTS {report.nts:.3f})", "question-answer trust", "density", y_range=None)
    for z in sorted(report.per_class):
        ct = report.per_class[z]
        plot.add_series(f"{get_class_name(z)} {ct.spectrum:.3f}", list(zip(report.grid, ct.density)))
    return plot
