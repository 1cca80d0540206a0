import logging
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np

logger = logging.getLogger(__name__)

NOZZLE_N = 20


class PatternError(Exception):
    """Custom exception for invalid droplet patterns and imprint images"""
    pass


def _frozen_bool_grid(values, shape: Tuple[int, int], what: str) -> np.ndarray:
    grid = np.asarray(values)
    if grid.shape != shape:
        raise PatternError(f"{what} must have shape {shape}, got {grid.shape}")
    grid = grid.astype(bool, copy=True)
    grid.setflags(write=False)
    return grid


@dataclass(frozen=True, eq=False)
class DropPattern:
    """
    Nozzle firing map of the printhead (the low resolution image)

    Attributes:
        on_pixels (np.ndarray): Boolean grid, True where a nozzle dispenses a droplet
    """

    on_pixels: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.on_pixels)
        if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
            raise PatternError(f"Droplet pattern must be a square grid, got shape {grid.shape}")
        object.__setattr__(self, 'on_pixels', _frozen_bool_grid(grid, grid.shape, 'Droplet pattern'))
        if not self.on_pixels.any():
            raise PatternError("Droplet pattern has no On pixel")

    @property
    def size(self) -> int:
        return self.on_pixels.shape[0]

    @property
    def count(self) -> int:
        return int(self.on_pixels.sum())

    def indices(self) -> List[int]:
        """Row-major 0-based indices of the On pixels, increasing"""
        return np.flatnonzero(self.on_pixels).tolist()

    def nozzles(self) -> List[Tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.on_pixels))]

    def rotated(self, quarter_turns: int = 1) -> 'DropPattern':
        return DropPattern(np.rot90(self.on_pixels, quarter_turns))

    @classmethod
    def from_indices(cls, indices: Iterable[int], size: int = NOZZLE_N) -> 'DropPattern':
        grid = np.zeros(size * size, dtype=bool)
        idx = np.asarray(list(indices), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= size * size):
            raise PatternError(f"Pattern index out of range [0, {size * size})")
        grid[idx] = True
        return cls(grid.reshape(size, size))

    @classmethod
    def from_text(cls, text: str, size: int = NOZZLE_N) -> 'DropPattern':
        """
        Parse the pattern file format: `size` lines of `size` characters in {0,1}

        Raises:
            PatternError: If the text is not a valid pattern
        """
        lines = [line.strip() for line in text.splitlines() if line.strip()]
        if len(lines) != size:
            raise PatternError(f"Pattern file must have {size} rows, got {len(lines)}")
        for row, line in enumerate(lines):
            if len(line) != size or set(line) - {'0', '1'}:
                raise PatternError(f"Pattern row {row} must be {size} characters of 0/1")
        return cls(np.array([[c == '1' for c in line] for line in lines]))

    def to_text(self) -> str:
        return ''.join(''.join('1' if v else '0' for v in row) + '\n' for row in self.on_pixels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DropPattern):
            return NotImplemented
        return np.array_equal(self.on_pixels, other.on_pixels)

    def __hash__(self) -> int:
        return hash(tuple(self.indices()))

    def __str__(self) -> str:
        return f"DropPattern(count={self.count}, indices={self.indices()})"


@dataclass(frozen=True, eq=False)
class ImprintImage:
    """
    Top-down wet/dry map of the liquid film (the high resolution image)

    Attributes:
        wet_pixels (np.ndarray): Boolean grid, True where the film is wet
    """

    wet_pixels: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.wet_pixels)
        if grid.ndim != 2:
            raise PatternError(f"Imprint image must be 2-D, got shape {grid.shape}")
        object.__setattr__(self, 'wet_pixels', _frozen_bool_grid(grid, grid.shape, 'Imprint image'))

    @property
    def wet_fraction(self) -> float:
        return float(self.wet_pixels.mean())

    def indices(self) -> List[int]:
        return np.flatnonzero(self.wet_pixels).tolist()

    @classmethod
    def from_indices(cls, indices: Iterable[int], size: int) -> 'ImprintImage':
        grid = np.zeros(size * size, dtype=bool)
        idx = np.asarray(list(indices), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= size * size):
            raise PatternError(f"Imprint index out of range [0, {size * size})")
        grid[idx] = True
        return cls(grid.reshape(size, size))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ImprintImage):
            return NotImplemented
        return np.array_equal(self.wet_pixels, other.wet_pixels)

    def __hash__(self) -> int:
        return hash(tuple(self.indices()))


def make_pattern_random(category: int, seed: int, size: int = NOZZLE_N) -> DropPattern:
    """
    Sample a droplet pattern with exactly `category` On pixels

    Args:
        category: Number of firing nozzles, 1..size²
        seed: Seed of the sampler

    Returns:
        DropPattern drawn uniformly without replacement

    Raises:
        PatternError: If category is out of range
    """
    total = size * size
    if isinstance(category, bool) or not isinstance(category, (int, np.integer)) \
            or not 1 <= category <= total:
        raise PatternError(f"Category must be an integer in [1, {total}], got {category!r}")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(total, size=int(category), replace=False)
    return DropPattern.from_indices(np.sort(chosen), size)
