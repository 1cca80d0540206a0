from .crude_model import PixelScores, assert_blocks_retained, crude_predict, max_pool_2x2
from .metrics import (MetricsError, MetricsReport, auc_pr, best_threshold, confusion, evaluate,
                      precision_recall_curve, threshold_sweep, write_reports_csv)

__all__ = [
    'PixelScores', 'crude_predict', 'max_pool_2x2', 'assert_blocks_retained',
    'MetricsError', 'MetricsReport', 'confusion', 'auc_pr', 'precision_recall_curve',
    'threshold_sweep', 'best_threshold', 'evaluate', 'write_reports_csv',
]
