"""Block matchers: exhaustive search, diamond search, adaptive rood pattern
search, and the frame-level dispatch shared with the swarm matcher.

All searches run per block with a memoized BlockCost, so revisiting a
displacement never inflates the evaluation count. Ties are broken uniformly
by candidate_key (center-biased, then raster order).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .blocks import BlockGrid, MotionVector, block_origin
from .metrics import BlockCost, EvalCounter, candidate_key, threshold_sum
from .video_io import Frame

if TYPE_CHECKING:
    from .pso import PsoConfig

ALGORITHMS = ("es", "ds", "arps", "pso-zmp")

# Large and small diamond offsets of the two-pattern diamond search.
_LDSP = ((0, 0), (2, 0), (-2, 0), (0, 2), (0, -2), (1, 1), (1, -1), (-1, 1), (-1, -1))
_SDSP = ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1))


@dataclass(frozen=True)
class EstimatorConfig:
    """Shared matcher settings.

    search_param bounds the ES/DS/ARPS candidate window to |dx|,|dy| <= P.
    zmp_threshold is the per-sequence static-block cut, required by ARPS and
    the swarm matcher (and by DS when ds_zmp is set). The swarm matcher and
    ds_zmp compare it against the side-normalized cost (sum/side); ARPS
    follows its original convention and compares the raw sum, which keeps its
    prejudgment far stricter at the same threshold number. Set
    arps_raw_threshold=False to give ARPS the normalized convention too.
    """

    block_size: int = 16
    search_param: int = 7
    zmp_threshold: float | None = None
    ds_zmp: bool = False
    arps_raw_threshold: bool = True

    def __post_init__(self):
        if self.block_size < 2:
            raise ValueError(f"block_size must be >= 2, got {self.block_size}")
        if self.search_param < 1:
            raise ValueError(f"search_param must be >= 1, got {self.search_param}")
        if self.zmp_threshold is not None and self.zmp_threshold < 0:
            raise ValueError(f"zmp_threshold must be >= 0, got {self.zmp_threshold}")

    def require_threshold(self) -> float:
        if self.zmp_threshold is None:
            raise ValueError(
                "no static-block threshold set; pass zmp_threshold "
                "(CLI: --zmp-threshold)"
            )
        return self.zmp_threshold


@dataclass
class MotionField:
    """Per-block estimation output for one frame pair."""

    grid: BlockGrid
    vectors: np.ndarray       # (rows, cols, 2) int32, last axis (dx, dy)
    evals_per_block: np.ndarray  # (rows, cols) int64
    static_flags: np.ndarray  # (rows, cols) bool, True when prejudged static
    memos: list[dict[MotionVector, int]] | None = None  # raster order, optional

    @classmethod
    def empty(cls, grid: BlockGrid) -> "MotionField":
        return cls(
            grid,
            np.zeros((grid.rows, grid.cols, 2), dtype=np.int32),
            np.zeros((grid.rows, grid.cols), dtype=np.int64),
            np.zeros((grid.rows, grid.cols), dtype=bool),
        )

    def vector(self, row: int, col: int) -> MotionVector:
        dx, dy = self.vectors[row, col]
        return (int(dx), int(dy))

    @property
    def total_evals(self) -> int:
        return int(self.evals_per_block.sum())

    @property
    def static_count(self) -> int:
        return int(self.static_flags.sum())


def _best_over(cost: BlockCost, candidates) -> tuple[MotionVector, int]:
    """Evaluate the legal candidates and return the key-minimal (d, cost)."""
    best_d = None
    best_key = None
    for d in candidates:
        if not cost.legal(d):
            continue
        k = candidate_key(cost(d), d)
        if best_key is None or k < best_key:
            best_key, best_d = k, d
    if best_d is None:
        raise ValueError("no legal candidate displacement")
    return best_d, best_key[0]


def es_search(cost: BlockCost) -> MotionVector:
    """Exhaustive scan of every legal displacement in the cost's window."""
    dx_min, dx_max, dy_min, dy_max = cost.bounds
    return _best_over(
        cost, ((dx, dy) for dy in range(dy_min, dy_max + 1) for dx in range(dx_min, dx_max + 1))
    )[0]


def ds_search(cost: BlockCost) -> MotionVector:
    """Two-pattern diamond search: large diamond walked until its minimum sits
    at the center, then one small-diamond refinement."""
    center, _ = _best_over(cost, [(0, 0)])
    while True:
        best, _ = _best_over(cost, ((center[0] + ox, center[1] + oy) for ox, oy in _LDSP))
        if best == center:
            break
        center = best
    best, _ = _best_over(cost, ((center[0] + ox, center[1] + oy) for ox, oy in _SDSP))
    return best


def _unit_rood_refine(cost: BlockCost, center: MotionVector) -> MotionVector:
    """Walk the unit rood until its minimum stays at the center."""
    while True:
        best, _ = _best_over(cost, ((center[0] + ox, center[1] + oy) for ox, oy in _SDSP))
        if best == center:
            return center
        center = best


def zmp_check(cost: BlockCost, threshold: float, block_size: int) -> MotionVector | None:
    """One co-located evaluation; (0, 0) when its cost falls under the static
    threshold (strict), else None. The evaluation stays memoized either way."""
    if cost((0, 0)) < threshold_sum(threshold, block_size):
        return (0, 0)
    return None


def arps_search(
    cost: BlockCost,
    config: EstimatorConfig,
    left_neighbor_mv: MotionVector | None,
) -> tuple[MotionVector, bool]:
    """Adaptive rood pattern search with zero-motion prejudgment.

    Returns (vector, static). The prejudgment compares the co-located raw
    SAD sum against the threshold (its original convention) unless
    config.arps_raw_threshold is off. The rood arm stretches to the
    predictor's largest component (2 when the block has no left neighbor);
    the predictor itself joins the initial candidate set, and a unit-rood
    walk refines.
    """
    threshold = config.require_threshold()
    if not config.arps_raw_threshold:
        threshold = threshold_sum(threshold, config.block_size)
    if cost((0, 0)) < threshold:
        return (0, 0), True

    if left_neighbor_mv is None:
        arm = 2
        candidates = [(0, 0), (arm, 0), (-arm, 0), (0, arm), (0, -arm)]
    else:
        arm = max(abs(left_neighbor_mv[0]), abs(left_neighbor_mv[1]))
        candidates = [(0, 0), (arm, 0), (-arm, 0), (0, arm), (0, -arm), left_neighbor_mv]
    start, _ = _best_over(cost, candidates)
    return _unit_rood_refine(cost, start), False


def _window(config: EstimatorConfig) -> tuple[int, int, int, int]:
    p = config.search_param
    return (-p, p, -p, p)


def estimate(
    algorithm: str,
    anchor: Frame,
    target: Frame,
    config: EstimatorConfig | None = None,
    pso: PsoConfig | None = None,
    seed: int = 0,
    keep_memos: bool = False,
) -> MotionField:
    """Estimate the motion field of `target` relative to `anchor`.

    algorithm is one of es, ds, arps, pso-zmp. Blocks are processed in raster
    order; the result is a pure function of the inputs, config, and seed.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}, expected one of {ALGORITHMS}")
    if anchor.width != target.width or anchor.height != target.height:
        raise ValueError(
            f"frame sizes differ: {anchor.width}x{anchor.height} vs "
            f"{target.width}x{target.height}"
        )
    config = config or EstimatorConfig()

    if algorithm == "pso-zmp":
        from .pso import estimate_pso_zmp

        return estimate_pso_zmp(
            anchor, target, config, pso, seed=seed, keep_memos=keep_memos
        )

    grid = BlockGrid.for_frame(anchor, config.block_size)
    field = MotionField.empty(grid)
    if keep_memos:
        field.memos = []
    anc = anchor.luma.astype(np.int32)
    tgt = target.luma.astype(np.int32)
    window = _window(config)

    for index in range(grid.n_blocks):
        row, col = index // grid.cols, index % grid.cols
        counter = EvalCounter()
        cost = BlockCost(anc, tgt, block_origin(grid, index), config.block_size, counter, window)
        static = False
        if algorithm == "es":
            mv = es_search(cost)
        elif algorithm == "ds":
            if config.ds_zmp:
                hit = zmp_check(cost, config.require_threshold(), config.block_size)
                mv, static = (hit, True) if hit is not None else (ds_search(cost), False)
            else:
                mv = ds_search(cost)
        else:  # arps
            left = field.vector(row, col - 1) if col > 0 else None
            mv, static = arps_search(cost, config, left)
        field.vectors[row, col] = mv
        field.evals_per_block[row, col] = counter.evals
        field.static_flags[row, col] = static
        if keep_memos:
            field.memos.append(counter.memo)
    return field
