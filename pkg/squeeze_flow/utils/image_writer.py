import logging
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from ..core.patterns import DropPattern, ImprintImage

logger = logging.getLogger(__name__)

DRY, WET = 0, 255


class ImageWriter:
    """Writes imprint images and droplet patterns as binary PGM (P5) files"""

    def __init__(self, out_dir: Optional[Path] = None):
        """
        Initialize ImageWriter

        Args:
            out_dir: Directory receiving relative paths. Defaults to the working directory
        """
        self.out_dir = Path(out_dir) if out_dir else Path('.')

    def resolve(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        if not path.is_absolute():
            path = self.out_dir / path
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    @staticmethod
    def encode_pgm(mask: np.ndarray) -> bytes:
        """P5 bytes of a boolean image: 0 dry, 255 wet, rows top to bottom"""
        mask = np.asarray(mask, dtype=bool)
        if mask.ndim != 2:
            raise ValueError(f"PGM images must be 2-D, got shape {mask.shape}")
        rows, cols = mask.shape
        header = f"P5\n{cols} {rows}\n255\n".encode('ascii')
        return header + np.where(mask, WET, DRY).astype(np.uint8).tobytes()

    def write_pgm(self, mask: np.ndarray, path: Union[str, Path]) -> Path:
        path = self.resolve(path)
        path.write_bytes(self.encode_pgm(mask))
        logger.debug(f"Wrote {mask.shape[1]}x{mask.shape[0]} PGM to {path}")
        return path

    @staticmethod
    def overlay_path(path: Union[str, Path]) -> Path:
        """Companion file of a rendered imprint: img.pgm -> img_dp.pgm"""
        path = Path(path)
        return path.with_name(f"{path.stem}_dp{path.suffix or '.pgm'}")

    def write_example(self, imprint: ImprintImage, path: Union[str, Path],
                      dp: Optional[DropPattern] = None) -> Tuple[Path, Optional[Path]]:
        """
        Write an imprint image and, when a pattern is given, its overlay

        The overlay upscales every nozzle to its block of imprint pixels so both files
        share one pixel grid.

        Returns:
            (imprint path, overlay path or None)
        """
        image_path = self.write_pgm(imprint.wet_pixels, path)
        if dp is None:
            return image_path, None
        block = imprint.wet_pixels.shape[0] // dp.size
        upscaled = np.kron(dp.on_pixels, np.ones((block, block), dtype=bool))
        return image_path, self.write_pgm(upscaled, self.overlay_path(image_path))


def read_pgm(path: Union[str, Path]) -> np.ndarray:
    """Boolean image of a P5 file written by ImageWriter"""
    data = Path(path).read_bytes()
    fields = data.split(maxsplit=4)
    if len(fields) < 5 or fields[0] != b'P5':
        raise ValueError(f"{path} is not a binary PGM file")
    cols, rows, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    if maxval != 255:
        raise ValueError(f"Unsupported PGM maxval {maxval}")
    pixels = np.frombuffer(data[-rows * cols:], dtype=np.uint8)
    return pixels.reshape(rows, cols) == WET
