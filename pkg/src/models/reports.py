"""
Metric bundles and run manifests.

EvalReport.to_dict() emits exactly the keys consumed by downstream
tooling; percentage forms for tables come from as_percent_row().
"""

from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, List, Optional, Tuple

from ..constants import get_class_name
from ..constants.defaults import TRUST_HIGH_NTS


@dataclass(frozen=True)
class ConfusionCounts:
    """Binary confusion counts; positive class = successful."""
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")
        if self.total < 1:
            raise ValueError("confusion counts must sum to at least 1")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def to_dict(self) -> Dict[str, int]:
        return {'tp': self.tp, 'tn': self.tn, 'fp': self.fp, 'fn': self.fn}


CurvePoint = Tuple[float, float]

EVAL_METRIC_KEYS = ('accuracy', 'mcc', 'f1', 'specificity', 'sensitivity', 'roc_auc', 'pr_auc')


@dataclass
class EvalReport:
    """Confusion metrics and ranking curves for one prediction set."""
    accuracy: float
    mcc: float
    f1: float
    specificity: float
    sensitivity: float
    roc_auc: float
    pr_auc: float
    n: int
    roc_points: List[CurvePoint] = field(default_factory=list)    # (fpr, tpr)
    pr_points: List[CurvePoint] = field(default_factory=list)     # (recall, precision)
    confusion: Optional[ConfusionCounts] = None
    pr_area_method: str = "average_precision"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'accuracy': self.accuracy,
            'mcc': self.mcc,
            'f1': self.f1,
            'specificity': self.specificity,
            'sensitivity': self.sensitivity,
            'roc_auc': self.roc_auc,
            'pr_auc': self.pr_auc,
            'n': self.n,
            'curves': {
                'roc': [list(p) for p in self.roc_points],
                'pr': [list(p) for p in self.pr_points],
                'pr_area_method': self.pr_area_method,
                'confusion': self.confusion.to_dict() if self.confusion else None,
            },
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EvalReport':
        curves = data.get('curves', {})
        confusion = curves.get('confusion')
        return cls(
            accuracy=data['accuracy'],
            mcc=data['mcc'],
            f1=data['f1'],
            specificity=data['specificity'],
            sensitivity=data['sensitivity'],
            roc_auc=data['roc_auc'],
            pr_auc=data['pr_auc'],
            n=data['n'],
            roc_points=[tuple(p) for p in curves.get('roc', [])],
            pr_points=[tuple(p) for p in curves.get('pr', [])],
            confusion=ConfusionCounts(**confusion) if confusion else None,
            pr_area_method=curves.get('pr_area_method', 'average_precision'),
        )

    def as_percent_row(self) -> Dict[str, float]:
        """Metric values x100, rounded to one decimal like a results table."""
        return {key: round(getattr(self, key) * 100.0, 1) for key in EVAL_METRIC_KEYS}


@dataclass
class ClassTrust:
    """Trust results for a single ground-truth class."""
    label: int
    qz: List[float]                 # question-answer trust per sample
    spectrum: float                 # T_M(z)
    density: List[float]            # KDE on the trust grid
    prior: float

    @property
    def n(self) -> int:
        return len(self.qz)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': get_class_name(self.label),
            'qz_mean': self.spectrum,
            'n': self.n,
            'density_grid': self.density,
        }


@dataclass
class TrustReport:
    """Trust spectrum per class and the aggregate NetTrustScore."""
    per_class: Dict[int, ClassTrust]
    nts: float
    grid: List[float]
    uniform_prior: bool = False

    @property
    def priors(self) -> Dict[int, float]:
        return {z: ct.prior for z, ct in self.per_class.items()}

    @property
    def high_trust(self) -> bool:
        return self.nts > TRUST_HIGH_NTS

    def to_dict(self) -> Dict[str, Any]:
        return {
            'per_class': {str(z): ct.to_dict() for z, ct in sorted(self.per_class.items())},
            'nts': self.nts,
            'priors': {str(z): p for z, p in sorted(self.priors.items())},
            'prior_estimator': 'uniform' if self.uniform_prior else 'empirical',
            'high_trust': self.high_trust,
            'high_trust_threshold': TRUST_HIGH_NTS,
        }


@dataclass
class RunManifest:
    """Everything needed to reproduce a CLI run."""
    subcommand: str
    argv: List[str]
    config: Dict[str, Any]
    seed: Optional[int]
    inputs: Dict[str, str] = field(default_factory=dict)     # path -> sha256
    outputs: Dict[str, str] = field(default_factory=dict)    # path -> sha256
    tool_version: str = ""
    created: str = field(default_factory=lambda: datetime.now().isoformat())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'metadata': {
                'type': 'run_manifest',
                'tool_version': self.tool_version,
                'generated': self.created,
            },
            'subcommand': self.subcommand,
            'argv': self.argv,
            'config': self.config,
            'seed': self.seed,
            'inputs': self.inputs,
            'outputs': self.outputs,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunManifest':
        meta = data.get('metadata', {})
        return cls(
            subcommand=data['subcommand'],
            argv=list(data['argv']),
            config=data.get('config', {}),
            seed=data.get('seed'),
            inputs=data.get('inputs', {}),
            outputs=data.get('outputs', {}),
            tool_version=meta.get('tool_version', ''),
            created=meta.get('generated', ''),
        )
