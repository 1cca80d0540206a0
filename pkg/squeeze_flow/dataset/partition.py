import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from ..core.driver import Snapshot
from ..core.patterns import DropPattern, ImprintImage

logger = logging.getLogger(__name__)

DP_SIZE = 20
VOF_SIZE = 160
PARTITION_FILES = ('t.csv', 'h.csv', 'dp.csv', 'vof.csv')


class DatasetError(Exception):
    """Custom exception for malformed or inconsistent datasets"""
    pass


def round_significant(x: float, digits: int = 9) -> float:
    """Round to the precision the CSV files store"""
    return float(f"{x:.{digits - 1}e}")


@dataclass
class DatasetPartition:
    """
    Aligned columns of one dataset partition

    Attributes:
        t (List[float]): Spread times, s
        h (List[float]): Film thicknesses, m
        dp (List[Tuple[int, ...]]): Row-major 0-based On indices of the droplet patterns
        vof (List[Tuple[int, ...]]): Row-major 0-based On indices of the imprint images
        dp_size (int): Side of the droplet pattern images
        vof_size (int): Side of the imprint images
    """

    t: List[float] = field(default_factory=list)
    h: List[float] = field(default_factory=list)
    dp: List[Tuple[int, ...]] = field(default_factory=list)
    vof: List[Tuple[int, ...]] = field(default_factory=list)
    dp_size: int = DP_SIZE
    vof_size: int = VOF_SIZE

    def __post_init__(self):
        self.t = [float(x) for x in self.t]
        self.h = [float(x) for x in self.h]
        self.dp = [tuple(int(i) for i in row) for row in self.dp]
        self.vof = [tuple(int(i) for i in row) for row in self.vof]
        self.validate()

    def __len__(self) -> int:
        return len(self.t)

    def validate(self):
        """
        Check alignment and index ranges

        Raises:
            DatasetError: On length mismatch, unsorted rows or out-of-range indices
        """
        lengths = {len(self.t), len(self.h), len(self.dp), len(self.vof)}
        if len(lengths) != 1:
            raise DatasetError(f"Column length mismatch: t={len(self.t)}, h={len(self.h)}, "
                               f"dp={len(self.dp)}, vof={len(self.vof)}")
        for name, rows, limit in (('dp', self.dp, self.dp_size ** 2), ('vof', self.vof, self.vof_size ** 2)):
            for r, row in enumerate(rows):
                if any(b <= a for a, b in zip(row, row[1:])):
                    raise DatasetError(f"{name} row {r} is not strictly increasing")
                if row and (row[0] < 0 or row[-1] >= limit):
                    raise DatasetError(f"{name} row {r} has an index outside [0, {limit})")

    def dp_image(self, row: int) -> np.ndarray:
        grid = np.zeros(self.dp_size ** 2, dtype=bool)
        grid[list(self.dp[row])] = True
        return grid.reshape(self.dp_size, self.dp_size)

    def vof_image(self, row: int) -> np.ndarray:
        grid = np.zeros(self.vof_size ** 2, dtype=bool)
        grid[list(self.vof[row])] = True
        return grid.reshape(self.vof_size, self.vof_size)

    def select(self, rows: Iterable[int]) -> 'DatasetPartition':
        rows = list(rows)
        return DatasetPartition([self.t[i] for i in rows], [self.h[i] for i in rows],
                                [self.dp[i] for i in rows], [self.vof[i] for i in rows],
                                self.dp_size, self.vof_size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DatasetPartition):
            return NotImplemented
        return (self.t == other.t and self.h == other.h and self.dp == other.dp
                and self.vof == other.vof and self.dp_size == other.dp_size
                and self.vof_size == other.vof_size)


def concatenate(partitions: Sequence[DatasetPartition]) -> DatasetPartition:
    """Stack partitions row-wise; all must share image sizes"""
    if not partitions:
        return DatasetPartition()
    shapes = {(p.dp_size, p.vof_size) for p in partitions}
    if len(shapes) != 1:
        raise DatasetError(f"Cannot combine partitions with mixed image sizes: {sorted(shapes)}")
    dp_size, vof_size = shapes.pop()
    merged = DatasetPartition(dp_size=dp_size, vof_size=vof_size)
    for p in partitions:
        merged.t += p.t
        merged.h += p.h
        merged.dp += p.dp
        merged.vof += p.vof
    return merged


def partition_from_snapshots(snapshots: Sequence[Snapshot]) -> DatasetPartition:
    """Dataset rows of one run, times and thicknesses rounded to the stored precision"""
    if not snapshots:
        return DatasetPartition()
    return DatasetPartition(
        t=[round_significant(s.t) for s in snapshots],
        h=[round_significant(s.h) for s in snapshots],
        dp=[tuple(s.dp.indices()) for s in snapshots],
        vof=[tuple(s.imprint.indices()) for s in snapshots],
        dp_size=snapshots[0].dp.size,
        vof_size=snapshots[0].imprint.wet_pixels.shape[0],
    )


def example(p: DatasetPartition, row: int) -> Tuple[float, float, DropPattern, ImprintImage]:
    """One row as (t, h, pattern, imprint)"""
    if not 0 <= row < len(p):
        raise DatasetError(f"Row {row} out of range for a partition of {len(p)} examples")
    return (p.t[row], p.h[row], DropPattern(p.dp_image(row)), ImprintImage(p.vof_image(row)))


def _write_rows(path: Path, lines: Iterable[str]):
    with open(path, 'w', encoding='ascii', newline='') as f:
        for line in lines:
            f.write(line + '\n')


def write_partition(p: DatasetPartition, directory: Union[str, Path]) -> None:
    """
    Write the four CSV files of a partition

    t.csv and h.csv hold one value per row in scientific notation with 9 significant
    digits (seconds, meters); dp.csv and vof.csv hold comma-separated row-major
    0-based On indices, one example per row.
    """
    p.validate()
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    _write_rows(directory / 't.csv', (f"{x:.8e}" for x in p.t))
    _write_rows(directory / 'h.csv', (f"{x:.8e}" for x in p.h))
    _write_rows(directory / 'dp.csv', (','.join(map(str, row)) for row in p.dp))
    _write_rows(directory / 'vof.csv', (','.join(map(str, row)) for row in p.vof))
    logger.debug(f"Wrote {len(p)} examples to {directory}")


def _read_rows(path: Path) -> List[str]:
    if not path.is_file():
        raise DatasetError(f"Missing dataset file: {path}")
    text = path.read_text(encoding='ascii')
    if not text:
        return []
    if not text.endswith('\n'):
        text += '\n'
    return text.split('\n')[:-1]


def read_partition(directory: Union[str, Path], dp_size: int = DP_SIZE,
                   vof_size: int = VOF_SIZE) -> DatasetPartition:
    """
    Read the four CSV files of a partition

    Raises:
        DatasetError: On missing files, malformed rows, out-of-range indices or length mismatch
    """
    directory = Path(directory)
    try:
        t = [float(x) for x in _read_rows(directory / 't.csv')]
        h = [float(x) for x in _read_rows(directory / 'h.csv')]
        dp = [tuple(int(i) for i in row.split(',')) if row else () for row in _read_rows(directory / 'dp.csv')]
        vof = [tuple(int(i) for i in row.split(',')) if row else () for row in _read_rows(directory / 'vof.csv')]
    except DatasetError:
        raise
    except ValueError as e:
        raise DatasetError(f"Malformed row in {directory}: {str(e)}")
    return DatasetPartition(t, h, dp, vof, dp_size, vof_size)


def is_partition_dir(directory: Path) -> bool:
    return all((directory / name).is_file() for name in PARTITION_FILES)


def find_partitions(root: Union[str, Path]) -> List[Path]:
    """Partition directories under root, in lexicographic path order"""
    root = Path(root)
    if not root.is_dir():
        raise DatasetError(f"Dataset root not found: {root}")
    found = []
    for current, dirs, _ in os.walk(root):
        dirs.sort()
        if is_partition_dir(Path(current)):
            found.append(Path(current))
    return sorted(found, key=lambda d: d.relative_to(root).parts)


def compile_root(root: Union[str, Path], dp_size: int = DP_SIZE, vof_size: int = VOF_SIZE) -> DatasetPartition:
    """Concatenate every partition found under root"""
    directories = find_partitions(root)
    logger.info(f"Compiling {len(directories)} partitions under {root}")
    return concatenate([read_partition(d, dp_size, vof_size) for d in directories])
