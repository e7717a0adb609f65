"""Matching cost and reconstruction quality metrics.

Cost convention: the reported SAD divides the absolute-difference sum by the
block SIDE length N (not by N*N), so a 16x16 block's cost is sum/16. All
searching and thresholding is done on the raw integer sum instead, so
comparisons stay exact; threshold_sum is the one place that converts a
divided-by-N threshold into raw-sum units.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .blocks import MotionVector
from .video_io import Frame, Sequence

# Reported in place of an infinite PSNR (zero MSE); far above the ~40 dB
# "excellent" band, so averages are not distorted.
PSNR_CAP_DB = 100.0


def sad_sum(a: np.ndarray, b: np.ndarray) -> int:
    """Raw sum of absolute differences between two equal-sized blocks."""
    if a.shape != b.shape:
        raise ValueError(f"block shapes differ: {a.shape} vs {b.shape}")
    return int(np.abs(a.astype(np.int32) - b.astype(np.int32)).sum())


def sad(a: np.ndarray, b: np.ndarray) -> float:
    """Side-normalized SAD between two N x N blocks: |a - b| summed, over N."""
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"blocks must be square, got {a.shape}")
    return sad_sum(a, b) / a.shape[0]


def threshold_sum(threshold: float, block_size: int) -> float:
    """Convert a side-normalized cost threshold to raw-sum units."""
    return threshold * block_size


class EvalCounter:
    """Per-block ledger of distinct cost evaluations.

    memo maps each clamped displacement to its raw SAD sum; re-querying a
    memoized displacement is free and does not count as new work.
    """

    def __init__(self):
        self.memo: dict[MotionVector, int] = {}

    @property
    def evals(self) -> int:
        return len(self.memo)


class BlockCost:
    """Memoized cost oracle d -> raw SAD sum for one target block.

    anchor/target are full-frame int32 arrays; origin is the block's top-left
    corner in the target frame. Candidate blocks are read from the anchor at
    origin + d, which must stay inside the frame. An optional window
    (dx_min, dx_max, dy_min, dy_max) further restricts what `legal` admits.
    """

    def __init__(
        self,
        anchor: np.ndarray,
        target: np.ndarray,
        origin: tuple[int, int],
        block_size: int,
        counter: EvalCounter,
        window: tuple[int, int, int, int] | None = None,
    ):
        self.x, self.y = origin
        self.block_size = block_size
        self.anchor = anchor
        self.tgt = target[self.y : self.y + block_size, self.x : self.x + block_size]
        self.counter = counter
        h, w = anchor.shape
        dx_min, dx_max = -self.x, w - block_size - self.x
        dy_min, dy_max = -self.y, h - block_size - self.y
        if window is not None:
            dx_min, dx_max = max(dx_min, window[0]), min(dx_max, window[1])
            dy_min, dy_max = max(dy_min, window[2]), min(dy_max, window[3])
        self.bounds = (dx_min, dx_max, dy_min, dy_max)

    def legal(self, d: MotionVector) -> bool:
        dx_min, dx_max, dy_min, dy_max = self.bounds
        return dx_min <= d[0] <= dx_max and dy_min <= d[1] <= dy_max

    def clamp(self, d: MotionVector) -> MotionVector:
        dx_min, dx_max, dy_min, dy_max = self.bounds
        return (min(max(d[0], dx_min), dx_max), min(max(d[1], dy_min), dy_max))

    def __call__(self, d: MotionVector) -> int:
        c = self.counter.memo.get(d)
        if c is None:
            bs = self.block_size
            cx, cy = self.x + d[0], self.y + d[1]
            h, w = self.anchor.shape
            if not (0 <= cx <= w - bs and 0 <= cy <= h - bs):
                raise ValueError(
                    f"displacement {d} leaves the frame for block at ({self.x},{self.y})"
                )
            c = int(np.abs(self.tgt - self.anchor[cy : cy + bs, cx : cx + bs]).sum())
            self.counter.memo[d] = c
        return c


def sad_at(
    counter: EvalCounter,
    anchor: Frame,
    target: Frame,
    origin: tuple[int, int],
    d: MotionVector,
    block_size: int,
) -> int:
    """Memoized raw SAD sum between the target block at origin and the anchor
    block at origin + d. Counts one evaluation only when d is new."""
    cost = BlockCost(
        anchor.luma.astype(np.int32),
        target.luma.astype(np.int32),
        origin,
        block_size,
        counter,
    )
    return cost(d)


def candidate_key(cost: int, d: MotionVector) -> tuple[int, int, int, int]:
    """Total order on search candidates: lowest cost first, then the
    center-biased tie-break (smaller |dx|+|dy|, then raster order of (dy, dx))."""
    return (cost, abs(d[0]) + abs(d[1]), d[1], d[0])


@dataclass
class PsnrReport:
    """Per-frame PSNR values plus their arithmetic mean, in dB."""

    per_frame_db: list[float] = field(default_factory=list)

    @property
    def mean_db(self) -> float:
        return float(np.mean(self.per_frame_db))


def frame_mse(a: Frame, b: Frame) -> float:
    if a.luma.shape != b.luma.shape:
        raise ValueError(f"frame shapes differ: {a.luma.shape} vs {b.luma.shape}")
    diff = a.luma.astype(np.float64) - b.luma.astype(np.float64)
    return float(np.mean(diff * diff))


def frame_psnr(a: Frame, b: Frame) -> float:
    """PSNR between two frames in dB: 10*log10(255^2 / MSE), capped when MSE=0."""
    mse = frame_mse(a, b)
    if mse == 0.0:
        return PSNR_CAP_DB
    return min(float(10.0 * np.log10(255.0 * 255.0 / mse)), PSNR_CAP_DB)


def psnr(
    original: Sequence,
    compensated: Sequence,
    frame_range: tuple[int, int] | None = None,
) -> PsnrReport:
    """Per-frame PSNR of compensated vs original over [start, stop)."""
    if original.width != compensated.width or original.height != compensated.height:
        raise ValueError(
            f"sequences differ in size: {original.width}x{original.height} vs "
            f"{compensated.width}x{compensated.height}"
        )
    start, stop = frame_range if frame_range is not None else (0, None)
    a_frames = original.frames[start:stop]
    b_frames = compensated.frames[start:stop]
    if len(a_frames) != len(b_frames):
        raise ValueError(
            f"sequences differ in length over range: {len(a_frames)} vs {len(b_frames)}"
        )
    if not a_frames:
        raise ValueError("empty frame range")
    return PsnrReport([frame_psnr(a, b) for a, b in zip(a_frames, b_frames)])
