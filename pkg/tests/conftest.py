"""Shared fixtures: small hand-built datasets on the default 20/160 image sizes"""

import numpy as np
import pytest

from squeeze_flow.core.patterns import make_pattern_random
from squeeze_flow.dataset.partition import DatasetPartition, write_partition


def imprint_indices(dp_indices, grow: int = 0):
    """Wet pixels of the 8×8 blocks of the On nozzles, widened by `grow` pixels"""
    image = np.zeros((160, 160), dtype=bool)
    for index in dp_indices:
        i, j = divmod(index, 20)
        image[max(8 * i - grow, 0):8 * i + 8 + grow, max(8 * j - grow, 0):8 * j + 8 + grow] = True
    return tuple(np.flatnonzero(image).tolist())


def simulation_partition(dp, rows: int = 3) -> DatasetPartition:
    dp = tuple(dp)
    return DatasetPartition(
        t=[1e-12 * 10 ** (3 * k) for k in range(rows)],
        h=[1e-6 * 0.9 ** k for k in range(rows)],
        dp=[dp] * rows,
        vof=[imprint_indices(dp, grow=k) for k in range(rows)],
    )


@pytest.fixture
def dataset_root(tmp_path):
    """Generated-layout root: category 1 with 8 simulations, category 5 with 2"""
    root = tmp_path / 'data'
    for sim_id in range(8):
        write_partition(simulation_partition([23 * sim_id + 21]), root / '1' / f"{sim_id:04d}")
    for sim_id in range(2):
        dp = make_pattern_random(5, 500 + sim_id).indices()
        write_partition(simulation_partition(dp), root / '5' / f"{sim_id:04d}")
    return root
