import csv
import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from sklearn import metrics as sk_metrics

from ..core.patterns import DropPattern
from .crude_model import PixelScores

logger = logging.getLogger(__name__)

REPORT_FIELDS = ('threshold', 'precision', 'recall', 'f1', 'auc_pr', 'tp', 'fp', 'fn', 'tn')


class MetricsError(Exception):
    """Custom exception for metric inputs that admit no answer"""
    pass


@dataclass(frozen=True)
class MetricsReport:
    """
    Pixel-classification scores at one threshold, micro-averaged over all examples

    Attributes:
        precision (float): tp / (tp + fp), 0 without predicted positives
        recall (float): tp / (tp + fn), 0 without actual positives
        f1 (float): Harmonic mean of precision and recall
        auc_pr (Optional[float]): Area under the precision-recall curve, when computed
        threshold (float): Score at or above which a pixel counts as On
        tp, fp, fn, tn (int): Confusion counts
    """

    precision: float
    recall: float
    f1: float
    auc_pr: Optional[float]
    threshold: float
    tp: int
    fp: int
    fn: int
    tn: int

    def to_text(self) -> str:
        """key=value lines"""
        return ''.join(f"{key}={'' if value is None else value}\n"
                       for key, value in ((k, getattr(self, k)) for k in REPORT_FIELDS))

    def to_row(self) -> dict:
        row = asdict(self)
        return {key: row[key] for key in REPORT_FIELDS}


ScoresInput = Union[PixelScores, Sequence[PixelScores]]
TruthInput = Union[DropPattern, Sequence[DropPattern]]


def _pool(preds: ScoresInput, truths: TruthInput) -> Tuple[np.ndarray, np.ndarray]:
    """Flatten aligned predictions and ground truths into pixel vectors"""
    if isinstance(preds, PixelScores):
        preds = [preds]
    if isinstance(truths, DropPattern):
        truths = [truths]
    preds, truths = list(preds), list(truths)
    if len(preds) != len(truths):
        raise MetricsError(f"{len(preds)} predictions for {len(truths)} ground truths")
    for k, (p, t) in enumerate(zip(preds, truths)):
        if p.scores.shape != t.on_pixels.shape:
            raise MetricsError(f"Example {k}: scores {p.scores.shape} vs truth {t.on_pixels.shape}")
    if not preds:
        return np.zeros(0), np.zeros(0, dtype=bool)
    scores = np.concatenate([p.scores.ravel() for p in preds])
    labels = np.concatenate([t.on_pixels.ravel() for t in truths])
    return scores, labels


def _confusion_pooled(scores: np.ndarray, labels: np.ndarray, threshold: float,
                      auc: Optional[float] = None) -> MetricsReport:
    if scores.size == 0:
        return MetricsReport(0.0, 0.0, 0.0, auc, threshold, 0, 0, 0, 0)
    truth = labels.astype(int)
    predicted = (scores >= threshold).astype(int)
    tn, fp, fn, tp = (int(x) for x in sk_metrics.confusion_matrix(truth, predicted, labels=[0, 1]).ravel())
    precision, recall, f1, _ = sk_metrics.precision_recall_fscore_support(
        truth, predicted, pos_label=1, average='binary', zero_division=0)
    return MetricsReport(float(precision), float(recall), float(f1), auc, threshold, tp, fp, fn, tn)


def confusion(pred: ScoresInput, truth: TruthInput, threshold: float = 0.5) -> MetricsReport:
    """Confusion counts with precision, recall and F1 at one threshold"""
    scores, labels = _pool(pred, truth)
    return _confusion_pooled(scores, labels, threshold)


def _require_positives(labels: np.ndarray):
    if not labels.any():
        raise MetricsError("Precision-recall needs at least one positive pixel")


def precision_recall_curve(preds: ScoresInput, truths: TruthInput) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Precision and recall at every distinct score, highest score first

    Pixels sharing a score switch to predicted-On together, so every distinct score
    contributes exactly one curve point.

    Returns:
        (precision, recall, thresholds)

    Raises:
        MetricsError: If there is no positive pixel
    """
    scores, labels = _pool(preds, truths)
    _require_positives(labels)
    precision, recall, thresholds = sk_metrics.precision_recall_curve(labels.astype(int), scores)
    # scikit-learn lists thresholds ascending and closes the curve with (recall 0, precision 1)
    return precision[-2::-1], recall[-2::-1], thresholds[::-1]


def auc_pr(preds: ScoresInput, truths: TruthInput) -> float:
    """
    Area under the precision-recall curve by step-wise summation

    Each recall increment is weighted by the precision at its right end,
    sum_k (R_k - R_{k-1})·P_k with R_0 = 0; no trapezoidal interpolation.
    """
    scores, labels = _pool(preds, truths)
    _require_positives(labels)
    return float(sk_metrics.average_precision_score(labels.astype(int), scores))


def threshold_sweep(preds: ScoresInput, truths: TruthInput, grid: Sequence[float]) -> List[MetricsReport]:
    """One report per threshold of the grid, in grid order"""
    scores, labels = _pool(preds, truths)
    return [_confusion_pooled(scores, labels, float(threshold)) for threshold in grid]


def best_threshold(reports: Sequence[MetricsReport]) -> MetricsReport:
    """Report with the highest F1; the lowest threshold wins ties"""
    if not reports:
        raise MetricsError("No reports to choose from")
    return max(sorted(reports, key=lambda r: r.threshold), key=lambda r: r.f1)


def evaluate(preds: ScoresInput, truths: TruthInput, threshold: float = 0.5) -> MetricsReport:
    """Confusion at the threshold together with the AUC-PR"""
    scores, labels = _pool(preds, truths)
    return _confusion_pooled(scores, labels, threshold, auc_pr(preds, truths))


def write_reports_csv(reports: Sequence[MetricsReport], path: Union[str, Path]) -> None:
    """Machine-readable rows, one per report"""
    with open(path, 'w', encoding='ascii', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=REPORT_FIELDS, lineterminator='\n')
        writer.writeheader()
        for report in reports:
            writer.writerow(report.to_row())
    logger.info(f"Wrote {len(reports)} metric rows to {path}")
