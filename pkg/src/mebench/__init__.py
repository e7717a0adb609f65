"""Block-matching motion estimation and benchmarking.

Estimation convention: a block at origin (x, y) in the target frame carries
vector (dx, dy) when its best match in the anchor frame sits at
(x + dx, y + dy); compensation copies that anchor block back to (x, y).
"""

__version__ = "0.1.0"

from .blocks import BlockGrid, MotionVector, block_origin, clamp_displacement, extract_block
from .compensate import CompensatedFrame, compensate
from .estimators import (
    ALGORITHMS,
    EstimatorConfig,
    MotionField,
    arps_search,
    ds_search,
    es_search,
    estimate,
    zmp_check,
)
from .metrics import (
    EvalCounter,
    PsnrReport,
    candidate_key,
    frame_psnr,
    psnr,
    sad,
    sad_at,
    sad_sum,
)
from .pso import (
    PsoConfig,
    estimate_pso_zmp,
    inertia_weight,
    init_pattern,
    predict_mv_ros_d,
    pso_match,
    select_pattern,
)
from .video_io import Frame, Sequence, VideoFormatError, load_raw_yuv, load_y4m, read_pgm, write_pgm

__all__ = [
    "ALGORITHMS",
    "BlockGrid",
    "CompensatedFrame",
    "EstimatorConfig",
    "EvalCounter",
    "Frame",
    "MotionField",
    "MotionVector",
    "PsnrReport",
    "PsoConfig",
    "Sequence",
    "VideoFormatError",
    "arps_search",
    "block_origin",
    "candidate_key",
    "clamp_displacement",
    "compensate",
    "ds_search",
    "es_search",
    "estimate",
    "estimate_pso_zmp",
    "extract_block",
    "frame_psnr",
    "inertia_weight",
    "init_pattern",
    "load_raw_yuv",
    "load_y4m",
    "predict_mv_ros_d",
    "psnr",
    "pso_match",
    "read_pgm",
    "sad",
    "sad_at",
    "sad_sum",
    "select_pattern",
    "write_pgm",
    "zmp_check",
]
