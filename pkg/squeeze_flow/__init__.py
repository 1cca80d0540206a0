"""Squeeze-flow imprint simulator - droplet patterns in, wet/dry imprint datasets out"""

from .config.sim_config import DEFAULT_PARAMS, ParameterError, SimParams
from .core.driver import run
from .core.patterns import DropPattern, ImprintImage, make_pattern_random
from .dataset.partition import DatasetPartition, read_partition, write_partition
from .evaluation.crude_model import crude_predict
from .evaluation.metrics import MetricsReport, auc_pr, confusion

__version__ = "0.1.0"

__all__ = [
    "SimParams",
    "DEFAULT_PARAMS",
    "ParameterError",
    "DropPattern",
    "ImprintImage",
    "make_pattern_random",
    "run",
    "DatasetPartition",
    "read_partition",
    "write_partition",
    "crude_predict",
    "MetricsReport",
    "confusion",
    "auc_pr",
]
