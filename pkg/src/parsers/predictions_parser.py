"""
Predictions CSV Parser

Classifier outputs are stored as `preds.csv`:

    clip_id,true,pred,p0,p1
    clip_0003,1,1,0.12,0.88

p0/p1 are the softmax probabilities of the unsuccessful/successful class.
"""

import csv
import logging
from pathlib import Path
from typing import List, Optional

from ..constants.formats import PREDICTIONS_HEADER
from ..errors import DataError
from ..models.prediction import Prediction

logger = logging.getLogger(__name__)


class PredictionsParser:
    """
    Parser for preds.csv files.

    Usage:
        parser = PredictionsParser("runs/m2/preds.csv")
        parser.parse()
        preds = parser.predictions
    """

    def __init__(self, filepath: str | Path):
        self.filepath = Path(filepath)
        self.predictions: List[Prediction] = []
        self._parsed = False

    def parse(self) -> None:
        """Parse the predictions file."""
        try:
            f = open(self.filepath, 'r', encoding='utf-8', newline='')
        except OSError as e:
            raise DataError(f"cannot read predictions {self.filepath}: {e}") from e

        with f:
            reader = csv.reader(f)
            header = next(reader, None)
            if header is None or tuple(h.strip() for h in header) != PREDICTIONS_HEADER:
                raise DataError(f"{self.filepath}:1: header must be {','.join(PREDICTIONS_HEADER)!r}")
            for row in reader:
                if not row or all(not c.strip() for c in row):
                    continue
                line = reader.line_num
                if len(row) != len(PREDICTIONS_HEADER):
                    raise DataError(f"{self.filepath}:{line}: expected {len(PREDICTIONS_HEADER)} fields")
                try:
                    pred = Prediction(
                        clip_id=row[0].strip(),
                        true_label=int(row[1]),
                        predicted=int(row[2]),
                        probs=(float(row[3]), float(row[4])),
                    )
                except ValueError as e:
                    raise DataError(f"{self.filepath}:{line}: {e}") from e
                self.predictions.append(pred)

        if not self.predictions:
            raise DataError(f"{self.filepath}: no predictions")
        logger.debug("read %d predictions from %s", len(self.predictions), self.filepath)
        self._parsed = True

    def get_predictions(self) -> List[Prediction]:
        if not self._parsed:
            self.parse()
        return self.predictions


def load_predictions(filepath: str | Path) -> List[Prediction]:
    """Read a preds.csv file."""
    return PredictionsParser(filepath).get_predictions()
