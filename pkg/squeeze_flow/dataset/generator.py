import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from ..config.sim_config import SimParams
from ..core.driver import run
from ..core.patterns import make_pattern_random
from ..core.schedule import SnapshotSchedule
from ..evaluation.crude_model import assert_blocks_retained
from .partition import DatasetError, find_partitions, partition_from_snapshots, read_partition, write_partition

logger = logging.getLogger(__name__)


def simulation_seed(seed: int, category: int, sim_id: int) -> int:
    """Seed of one simulation, independent of execution order"""
    return int(np.random.SeedSequence([seed, category, sim_id]).generate_state(1)[0])


def simulation_dir(out: Union[str, Path], category: int, sim_id: int) -> Path:
    return Path(out) / str(category) / f"{sim_id:04d}"


@dataclass(frozen=True)
class SimulationResult:
    """
    Outcome of one simulation of a batch

    Attributes:
        sim_id (int): Position of the simulation in its category
        n_examples (int): Snapshots written
        dp_count (int): On pixels of the droplet pattern
        reason (str): Termination reason
    """

    sim_id: int
    n_examples: int
    dp_count: int
    reason: str


class SimulationProcessor:
    """Runs one seeded simulation and writes its partition"""

    def __init__(self, params: SimParams, schedule: Optional[SnapshotSchedule] = None):
        """
        Initialize the processor

        Args:
            params: Simulation parameters shared by the batch
            schedule: Snapshot milestones
        """
        self.params = params
        self.schedule = schedule or SnapshotSchedule()

    def process(self, category: int, sim_id: int, seed: int, out: Union[str, Path]) -> SimulationResult:
        """
        Simulate one random pattern and write it under out/<category>/<sim_id>

        Raises:
            DatasetError: If an example breaks the one-wet-pixel-per-droplet-block invariant
        """
        dp = make_pattern_random(category, simulation_seed(seed, category, sim_id), self.params.nozzle_n)
        snapshots, status = run(dp, self.params, self.schedule)
        for snapshot in snapshots:
            try:
                assert_blocks_retained(snapshot.dp, snapshot.imprint)
            except ValueError as e:
                raise DatasetError(f"Simulation {sim_id} of category {category}: {str(e)}")

        write_partition(partition_from_snapshots(snapshots), simulation_dir(out, category, sim_id))
        logger.info(f"Category {category}, simulation {sim_id}: {len(snapshots)} examples ({status.reason})")
        return SimulationResult(sim_id, len(snapshots), dp.count, status.reason)


def _process_one(params: SimParams, ratio: float, category: int, sim_id: int, seed: int,
                 out: str) -> SimulationResult:
    return SimulationProcessor(params, SnapshotSchedule(ratio)).process(category, sim_id, seed, out)


@dataclass
class GenerationSummary:
    """
    Per-category batch summary in the dataset breakdown format

    Attributes:
        category (int): On pixels per pattern
        results (List[SimulationResult]): Successful simulations, ordered by sim_id
        failed (Dict[int, str]): sim_id -> error message
    """

    category: int
    results: List[SimulationResult] = field(default_factory=list)
    failed: Dict[int, str] = field(default_factory=dict)

    @property
    def n_simulations(self) -> int:
        return len(self.results)

    @property
    def n_examples(self) -> int:
        return sum(r.n_examples for r in self.results)

    @property
    def mean_dp(self) -> float:
        return float(np.mean([r.dp_count for r in self.results])) if self.results else 0.0

    def __str__(self) -> str:
        line = (f"category={self.category} #Simulations={self.n_simulations} "
                f"#Examples={self.n_examples} mean|DP|={self.mean_dp:.2f}")
        if self.failed:
            line += f" failed={sorted(self.failed)}"
        return line


def generate_category(category: int, n_sims: int, seed: int, params: SimParams,
                      out: Union[str, Path], jobs: int = 1,
                      schedule: Optional[SnapshotSchedule] = None) -> GenerationSummary:
    """
    Run n_sims seeded simulations of one category

    Args:
        category: On pixels per random pattern
        n_sims: Number of simulations
        seed: Batch seed; every simulation derives its own seed from it
        params: Simulation parameters
        out: Dataset root; partitions go to out/<category>/<sim_id>
        jobs: Worker processes; never changes the written content

    Returns:
        GenerationSummary listing successes and failures
    """
    make_pattern_random(category, seed, params.nozzle_n)  # validates the category up front
    if n_sims < 1:
        raise ValueError(f"n_sims must be positive, got {n_sims}")
    schedule = schedule or SnapshotSchedule()
    summary = GenerationSummary(category)
    results: Dict[int, SimulationResult] = {}

    if jobs <= 1:
        processor = SimulationProcessor(params, schedule)
        for sim_id in range(n_sims):
            try:
                results[sim_id] = processor.process(category, sim_id, seed, out)
            except Exception as e:
                summary.failed[sim_id] = str(e)
                logger.error(f"Simulation {sim_id} of category {category} failed: {str(e)}")
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = {
                executor.submit(_process_one, params, schedule.ratio, category, sim_id, seed, str(out)): sim_id
                for sim_id in range(n_sims)
            }
            for future in as_completed(futures):
                sim_id = futures[future]
                try:
                    results[sim_id] = future.result()
                except Exception as e:
                    summary.failed[sim_id] = str(e)
                    logger.error(f"Simulation {sim_id} of category {category} failed: {str(e)}")

    summary.results = [results[k] for k in sorted(results)]
    logger.info(f"Generation complete: {summary}")
    return summary


@dataclass(frozen=True)
class BreakdownRow:
    category: str
    n_simulations: int
    n_examples: int
    mean_dp: float


def category_breakdown(root: Union[str, Path]) -> List[BreakdownRow]:
    """#Simulations, #Examples and mean |DP| of every category directory under root"""
    root = Path(root)
    if not root.is_dir():
        raise DatasetError(f"Dataset root not found: {root}")
    rows = []
    categories = sorted((d for d in root.iterdir() if d.is_dir()),
                        key=lambda d: (not d.name.isdigit(), int(d.name) if d.name.isdigit() else 0, d.name))
    for category_dir in categories:
        sims = find_partitions(category_dir)
        if not sims:
            continue
        examples, dp_counts = 0, []
        for sim in sims:
            partition = read_partition(sim)
            examples += len(partition)
            if len(partition):
                dp_counts.append(len(partition.dp[0]))
        mean_dp = float(np.mean(dp_counts)) if dp_counts else 0.0
        rows.append(BreakdownRow(category_dir.name, len(sims), examples, mean_dp))
    return rows
