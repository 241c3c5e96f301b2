"""
JSON Exporter for reports, summaries and run manifests.
"""

import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict

from ..constants.formats import MANIFEST_FILENAME
from ..models.reports import EvalReport, RunManifest, TrustReport


class JsonExporter:
    """
    Writes JSON documents into one output folder.

    Usage:
        exporter = JsonExporter("runs/m2")
        exporter.export_eval_report(report, "report.json")
        exporter.export_trust_report(trust, "trust.json")
        exporter.export_manifest(manifest)
    """

    def __init__(self, output_path: str | Path):
        self.output_path = Path(output_path)
        self.output_path.mkdir(parents=True, exist_ok=True)

    def _write_json(self, filename: str, data: Any) -> Path:
        """Write data to a JSON file; keys keep insertion order."""
        filepath = self.output_path / filename
        with open(filepath, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, ensure_ascii=False)
            f.write('\n')
        return filepath

    def export_eval_report(self, report: EvalReport, filename: str = "report.json") -> Path:
        """Metric keys exactly as EvalReport.to_dict() lists them."""
        return self._write_json(filename, report.to_dict())

    def export_trust_report(self, report: TrustReport, filename: str = "trust.json") -> Path:
        return self._write_json(filename, report.to_dict())

    def export_summary(self, summary: Dict[str, Any], filename: str, kind: str) -> Path:
        data = {
            'metadata': {
                'type': kind,
                'generated': datetime.now().isoformat(),
            },
            **summary,
        }
        return self._write_json(filename, data)

    def export_manifest(self, manifest: RunManifest, filename: str = MANIFEST_FILENAME) -> Path:
        return self._write_json(filename, manifest.to_dict())


def read_json(filepath: str | Path) -> Any:
    with open(filepath, 'r', encoding='utf-8') as f:
        return json.load(f)
