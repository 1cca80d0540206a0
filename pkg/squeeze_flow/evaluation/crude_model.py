"""Non-trainable inverse baseline: three stacked 2×2 max-poolings"""

import logging
from dataclasses import dataclass

import numpy as np

from ..core.patterns import DropPattern, ImprintImage

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PixelScores:
    """
    Per-nozzle droplet likelihood predicted from an imprint image

    Attributes:
        scores (np.ndarray): Values in [0, 1], one per nozzle
    """

    scores: np.ndarray

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=float)
        if scores.ndim != 2:
            raise ValueError(f"Scores must be 2-D, got shape {scores.shape}")
        if scores.size and (scores.min() < 0 or scores.max() > 1 or not np.isfinite(scores).all()):
            raise ValueError("Scores must lie in [0, 1]")
        scores = scores.copy()
        scores.setflags(write=False)
        object.__setattr__(self, 'scores', scores)


def max_pool_2x2(image: np.ndarray) -> np.ndarray:
    """2×2 max pooling with stride 2"""
    rows, cols = image.shape
    if rows % 2 or cols % 2:
        raise ValueError(f"Cannot pool an image of shape {image.shape}")
    return image.reshape(rows // 2, 2, cols // 2, 2).max(axis=(1, 3))


def crude_predict(img: ImprintImage, stages: int = 3, out_size: int = 20) -> PixelScores:
    """
    Droplet pattern guess: a nozzle scores 1 iff its pixel block holds any wet pixel

    Raises:
        ValueError: If the image does not pool down to out_size × out_size
    """
    wet = img.wet_pixels
    expected = out_size * 2 ** stages
    if wet.shape != (expected, expected):
        raise ValueError(f"Imprint must be {expected}×{expected}, got {wet.shape}")
    pooled = wet.astype(float)
    for _ in range(stages):
        pooled = max_pool_2x2(pooled)
    return PixelScores(pooled)


def assert_blocks_retained(dp: DropPattern, imprint: ImprintImage):
    """
    Raise if some On nozzle's pixel block has no wet pixel

    On data passing this check the crude model's recall is exactly 1.

    Raises:
        ValueError: Naming the first nozzle whose block is dry
    """
    block = imprint.wet_pixels.shape[0] // dp.size
    wet_blocks = imprint.wet_pixels.reshape(dp.size, block, dp.size, block).any(axis=(1, 3))
    dry = dp.on_pixels & ~wet_blocks
    if dry.any():
        i, j = (int(v[0]) for v in np.nonzero(dry))
        raise ValueError(f"Nozzle ({i}, {j}) fired but its {block}×{block} block is dry")
