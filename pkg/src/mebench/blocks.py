"""Macroblock partition of a frame and displaced-block extraction.

A motion vector (dx, dy) names where a block's content sits in the anchor
frame: the block at origin (x, y) in the target frame matches the anchor
pixels at (x + dx, y + dy). Compensation reads anchor[y+dy : , x+dx : ].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .video_io import Frame

# Integer pixel displacement (dx, dy).
MotionVector = tuple[int, int]


@dataclass(frozen=True)
class BlockGrid:
    """Non-overlapping block_size x block_size tiling of a frame's top-left region."""

    block_size: int
    cols: int
    rows: int

    def __post_init__(self):
        if self.block_size < 2:
            raise ValueError(f"block_size must be >= 2, got {self.block_size}")
        if self.cols < 1 or self.rows < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.cols}x{self.rows}")

    @classmethod
    def for_frame(cls, frame: Frame, block_size: int = 16) -> "BlockGrid":
        return cls(block_size, frame.width // block_size, frame.height // block_size)

    @property
    def n_blocks(self) -> int:
        return self.rows * self.cols


def block_origin(grid: BlockGrid, index: int) -> tuple[int, int]:
    """Top-left pixel (x, y) of block `index`, raster order."""
    if not 0 <= index < grid.n_blocks:
        raise ValueError(f"block index {index} out of range [0, {grid.n_blocks})")
    return (grid.block_size * (index % grid.cols), grid.block_size * (index // grid.cols))


def displacement_bounds(
    width: int, height: int, origin: tuple[int, int], block_size: int
) -> tuple[int, int, int, int]:
    """(dx_min, dx_max, dy_min, dy_max) keeping the displaced block inside the frame."""
    x, y = origin
    return (-x, width - block_size - x, -y, height - block_size - y)


def clamp_displacement(
    grid: BlockGrid, frame: Frame, origin: tuple[int, int], d: MotionVector
) -> MotionVector:
    """Component-wise clamp of d to the nearest displacement that keeps the
    block at `origin` fully inside the frame. Idempotent."""
    dx_min, dx_max, dy_min, dy_max = displacement_bounds(
        frame.width, frame.height, origin, grid.block_size
    )
    dx = min(max(d[0], dx_min), dx_max)
    dy = min(max(d[1], dy_min), dy_max)
    return (dx, dy)


def extract_block(
    frame: Frame, origin: tuple[int, int], d: MotionVector, block_size: int
) -> np.ndarray:
    """The block_size x block_size pixels at origin displaced by d.

    The caller must have clamped d already; an out-of-frame read is a
    contract violation and raises rather than clamping silently.
    """
    x, y = origin[0] + d[0], origin[1] + d[1]
    if x < 0 or y < 0 or x + block_size > frame.width or y + block_size > frame.height:
        raise ValueError(
            f"displaced block at ({x},{y}) size {block_size} leaves the "
            f"{frame.width}x{frame.height} frame; clamp the displacement first"
        )
    return frame.luma[y : y + block_size, x : x + block_size]
