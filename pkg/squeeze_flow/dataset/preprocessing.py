import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from ..config.params_loader import load_yaml_config
from ..config.sim_config import ParameterError
from .partition import DatasetError, DatasetPartition, concatenate, find_partitions, read_partition

logger = logging.getLogger(__name__)


def max_window_coverage(image: np.ndarray, window: int) -> float:
    """Largest On-fraction over all window×window positions fully inside the image"""
    sums = np.pad(image.astype(np.int64), ((1, 0), (1, 0))).cumsum(axis=0).cumsum(axis=1)
    totals = (sums[window:, window:] - sums[:-window, window:]
              - sums[window:, :-window] + sums[:-window, :-window])
    return float(totals.max()) / (window * window)


def coverage_filter(p: DatasetPartition, window: int = 72, max_local_coverage: float = 0.90) -> DatasetPartition:
    """
    Drop examples whose imprint has a window with local coverage above the limit

    Args:
        p: Partition to filter
        window: Side of the sliding interrogation window, stride 1
        max_local_coverage: Largest allowed On-fraction inside any window

    Returns:
        Partition with the kept rows in their original order
    """
    if not 1 <= window <= p.vof_size:
        raise DatasetError(f"Window must lie in [1, {p.vof_size}], got {window}")
    kept = [row for row in range(len(p))
            if max_window_coverage(p.vof_image(row), window) <= max_local_coverage]
    logger.info(f"Coverage filter kept {len(kept)} of {len(p)} examples "
                f"(window {window}, max coverage {max_local_coverage})")
    return p.select(kept)


@dataclass(frozen=True)
class NormStats:
    """
    Log-space statistics of a training partition

    Attributes:
        mu_t (float): Mean of ln t
        sigma_t (float): Population standard deviation of ln t
        mu_h (float): Mean of ln h
        sigma_h (float): Population standard deviation of ln h
    """

    mu_t: float
    sigma_t: float
    mu_h: float
    sigma_h: float

    def as_dict(self) -> Dict[str, float]:
        return {'mu_t': self.mu_t, 'sigma_t': self.sigma_t, 'mu_h': self.mu_h, 'sigma_h': self.sigma_h}


def _log_moments(values: Sequence[float], name: str) -> Tuple[float, float]:
    data = np.asarray(values, dtype=float)
    if np.any(data <= 0):
        raise DatasetError(f"All {name} values must be positive to take logarithms")
    logs = np.log(data)
    mu, sigma = float(logs.mean()), float(logs.std())
    if sigma == 0.0:
        raise DatasetError(f"ln {name} has zero variance")
    return mu, sigma


def compute_norm_stats(training: DatasetPartition) -> NormStats:
    """Mean and population standard deviation of ln t and ln h"""
    if len(training) < 2:
        raise DatasetError(f"Need at least 2 examples for statistics, got {len(training)}")
    mu_t, sigma_t = _log_moments(training.t, 't')
    mu_h, sigma_h = _log_moments(training.h, 'h')
    return NormStats(mu_t, sigma_t, mu_h, sigma_h)


def normalize(x: float, mu: float, sigma: float) -> float:
    """(ln x - mu) / sigma"""
    if x <= 0:
        raise DatasetError(f"Cannot normalize non-positive value {x}")
    return (math.log(x) - mu) / sigma


def denormalize(x_star: float, mu: float, sigma: float) -> float:
    return math.exp(sigma * x_star + mu)


def normalize_t(t: float, stats: NormStats) -> float:
    return normalize(t, stats.mu_t, stats.sigma_t)


def normalize_h(h: float, stats: NormStats) -> float:
    return normalize(h, stats.mu_h, stats.sigma_h)


@dataclass
class LeakageReport:
    """
    Droplet patterns shared by more than one split

    Attributes:
        violations (Dict[Tuple[int, ...], List[int]]): pattern indices -> split positions holding it
    """

    violations: Dict[Tuple[int, ...], List[int]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.passed:
            return "No droplet pattern is shared between splits"
        lines = [f"{len(self.violations)} droplet patterns shared between splits:"]
        for pattern, splits in sorted(self.violations.items()):
            lines.append(f"  dp={list(pattern)} in splits {splits}")
        return '\n'.join(lines)


def leakage_check(splits: Sequence[DatasetPartition]) -> LeakageReport:
    """Report every droplet pattern that appears in more than one split"""
    owners: Dict[Tuple[int, ...], List[int]] = {}
    for position, split in enumerate(splits):
        for pattern in set(split.dp):
            owners.setdefault(pattern, []).append(position)
    return LeakageReport({pattern: where for pattern, where in owners.items() if len(where) > 1})


def pixel_occurrence(p: DatasetPartition) -> np.ndarray:
    """Per nozzle, the number of examples whose droplet pattern has it On"""
    counts = np.zeros(p.dp_size * p.dp_size, dtype=np.int64)
    for row in p.dp:
        counts[list(row)] += 1
    return counts.reshape(p.dp_size, p.dp_size)


@dataclass
class SplitRecipe:
    """
    Fraction of each category's simulations assigned to each split

    Attributes:
        splits (Dict[str, Dict[int, float]]): split name -> category -> fraction
        window (int): Interrogation window of the coverage filter
        max_coverage (float): Largest allowed local coverage
    """

    splits: Dict[str, Dict[int, float]]
    window: int = 72
    max_coverage: float = 0.90

    @classmethod
    def from_config(cls, config: dict) -> 'SplitRecipe':
        try:
            splits = {str(name): {int(cat): float(frac) for cat, frac in (cats or {}).items()}
                      for name, cats in config['splits'].items()}
            recipe = cls(splits, int(config.get('window', 72)), float(config.get('max_coverage', 0.90)))
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise ParameterError(f"Invalid split recipe: {str(e)}")
        recipe.validate()
        return recipe

    def validate(self):
        totals: Dict[int, float] = {}
        for name, cats in self.splits.items():
            for cat, frac in cats.items():
                if not 0 < frac <= 1:
                    raise ParameterError(f"Split '{name}' takes fraction {frac} of category {cat}")
                totals[cat] = totals.get(cat, 0.0) + frac
        over = [cat for cat, total in totals.items() if total > 1 + 1e-12]
        if over:
            raise ParameterError(f"Categories assigned more than once in full: {sorted(over)}")


def load_split_recipe(path: Union[str, Path, None] = None) -> SplitRecipe:
    """Load a YAML split recipe, the packaged default when no path is given"""
    path = Path(path) if path else Path(__file__).resolve().parent.parent / 'config' / 'default_splits.yaml'
    return SplitRecipe.from_config(load_yaml_config(path))


def build_splits(recipe: SplitRecipe, root: Union[str, Path]) -> Dict[str, DatasetPartition]:
    """
    Assemble filtered splits from a generated dataset root

    Simulations of a category are taken in lexicographic order; splits sharing a
    category receive disjoint consecutive blocks in recipe order.

    Raises:
        DatasetError: If a category is missing or the splits share a droplet pattern
    """
    root = Path(root)
    cursor: Dict[int, int] = {}
    result: Dict[str, DatasetPartition] = {}
    claimed = set()
    for name, cats in recipe.splits.items():
        parts = []
        for cat, frac in sorted(cats.items()):
            sims = find_partitions(root / str(cat)) if (root / str(cat)).is_dir() else []
            if not sims:
                raise DatasetError(f"Category {cat} has no simulations under {root}")
            take = int(round(frac * len(sims)))
            start = cursor.get(cat, 0)
            chosen = sims[start:start + take]
            cursor[cat] = start + take
            logger.info(f"Split '{name}': {len(chosen)} of {len(sims)} simulations from category {cat}")
            parts.extend(read_partition(d) for d in chosen)
        merged = concatenate(parts)

        # independent random runs can draw the same pattern; earlier splits keep it
        fresh = [row for row, pattern in enumerate(merged.dp) if pattern not in claimed]
        if len(fresh) < len(merged):
            logger.warning(f"Split '{name}': dropped {len(merged) - len(fresh)} examples "
                           f"whose droplet pattern belongs to an earlier split")
        merged = merged.select(fresh)
        claimed.update(merged.dp)
        result[name] = coverage_filter(merged, recipe.window, recipe.max_coverage)

    report = leakage_check(list(result.values()))
    if not report.passed:
        raise DatasetError(str(report))
    return result
