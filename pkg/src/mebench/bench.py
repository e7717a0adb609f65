"""Benchmark harness: run selected matchers over a sequence, score each frame
pair by evaluation count and PSNR, and emit CSV reports.

Output files (in the run's output directory):
  per_frame.csv  frame,algo,avg_evals,psnr_db,static_fraction
  summary.csv    algo,mean_psnr_db,mean_evals
  gains.csv      pairwise speed matrix, gain(A over B) = mean_evals(B)/mean_evals(A)
  meta.json      config echo, seed, eval-counting policy, code version

Ratios (avg_evals, static_fraction, gains) are exact integer ratios rendered
half-up to three decimals, so identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from . import __version__
from .blocks import BlockGrid
from .compensate import compensate
from .estimators import ALGORITHMS, EstimatorConfig, MotionField, estimate
from .metrics import frame_psnr
from .pso import PsoConfig
from .video_io import Sequence, load_raw_yuv, load_y4m, write_pgm

# Static-block thresholds by sequence name, matched case-insensitively as a
# substring of the input filename. Always overridable with an explicit value.
ZMP_THRESHOLDS = {
    "akiyo": 384,
    "container": 512,
    "mother": 384,
    "news": 512,
    "silent": 384,
}

# Algorithms that prejudge static blocks and therefore need a threshold.
_NEEDS_THRESHOLD = ("arps", "pso-zmp")


def resolve_zmp_threshold(input_name: str, explicit: float | None) -> float | None:
    """Explicit value if given, else the per-sequence table keyed on the
    filename; None when neither applies."""
    if explicit is not None:
        return explicit
    name = Path(input_name).name.lower()
    for key, value in ZMP_THRESHOLDS.items():
        if key in name:
            return value
    return None


@dataclass
class RunSpec:
    input: str
    algos: list[str]
    fmt: str = "y4m"  # y4m | yuv
    width: int | None = None
    height: int | None = None
    chroma: str = "420"  # raw yuv plane layout; "400" = luma-only
    max_frames: int | None = None
    config: EstimatorConfig = dc_field(default_factory=EstimatorConfig)
    pso: PsoConfig = dc_field(default_factory=PsoConfig)
    seed: int = 0
    out_dir: str = "."
    dump_mv: bool = False
    dump_recon: bool = False

    def validate(self) -> None:
        if not self.algos:
            raise ValueError("at least one algorithm must be selected")
        for a in self.algos:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}, expected one of {ALGORITHMS}")
        if len(set(self.algos)) != len(self.algos):
            raise ValueError(f"duplicate algorithm in selection {self.algos}")
        if self.fmt not in ("y4m", "yuv"):
            raise ValueError(f"format must be y4m or yuv, got {self.fmt!r}")
        if self.fmt == "yuv" and (self.width is None or self.height is None):
            raise ValueError("raw yuv input needs --width and --height")
        needs = [a for a in self.algos if a in _NEEDS_THRESHOLD]
        if "ds" in self.algos and self.config.ds_zmp:
            needs.append("ds")
        if needs and self.config.zmp_threshold is None:
            raise ValueError(
                f"{'/'.join(needs)} need a static-block threshold and the input "
                f"name matches no known sequence; pass --zmp-threshold"
            )


@dataclass
class FrameRow:
    frame: int  # target frame index, 1-based
    algo: str
    evals_total: int
    static_blocks: int
    n_blocks: int
    psnr_db: float

    @property
    def avg_evals(self) -> float:
        return self.evals_total / self.n_blocks

    @property
    def static_fraction(self) -> float:
        return self.static_blocks / self.n_blocks


@dataclass
class SequenceReport:
    algos: list[str]
    rows: list[FrameRow]
    n_blocks: int
    n_pairs: int
    meta: dict

    def _algo_rows(self, algo: str) -> list[FrameRow]:
        return [r for r in self.rows if r.algo == algo]

    def total_evals(self, algo: str) -> int:
        return sum(r.evals_total for r in self._algo_rows(algo))

    def mean_evals(self, algo: str) -> float:
        return self.total_evals(algo) / (self.n_pairs * self.n_blocks)

    def mean_psnr(self, algo: str) -> float:
        rows = self._algo_rows(algo)
        return sum(r.psnr_db for r in rows) / len(rows)

    def static_fraction(self, algo: str) -> float:
        return sum(r.static_blocks for r in self._algo_rows(algo)) / (
            self.n_pairs * self.n_blocks
        )

    def gain(self, algo: str, over: str) -> float:
        """How many times fewer evaluations `algo` spends than `over`."""
        return self.total_evals(over) / self.total_evals(algo)


def ratio_3dp(numer: int, denom: int) -> str:
    """Exact rendering of a nonnegative integer ratio to 3 decimals, half-up."""
    q, r = divmod(numer * 1000, denom)
    if 2 * r >= denom:
        q += 1
    return f"{q // 1000}.{q % 1000:03d}"


def load_input(spec: RunSpec) -> Sequence:
    if spec.fmt == "y4m":
        return load_y4m(spec.input, max_frames=spec.max_frames)
    return load_raw_yuv(
        spec.input, spec.width, spec.height, max_frames=spec.max_frames, chroma=spec.chroma
    )


def run(spec: RunSpec) -> SequenceReport:
    """Estimate, compensate, and score every consecutive frame pair with every
    selected algorithm; write CSVs (and optional dumps) to spec.out_dir."""
    spec.validate()
    seq = load_input(spec)
    if len(seq) < 2:
        raise ValueError(f"need at least 2 frames to estimate motion, got {len(seq)}")
    grid = BlockGrid.for_frame(seq[0], spec.config.block_size)

    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if spec.dump_mv:
        (out / "mv").mkdir(exist_ok=True)
    if spec.dump_recon:
        (out / "recon").mkdir(exist_ok=True)

    rows: list[FrameRow] = []
    for k in range(1, len(seq)):
        anchor, target = seq[k - 1], seq[k]
        for algo in spec.algos:
            field = estimate(
                algo, anchor, target, spec.config, spec.pso, seed=spec.seed ^ k
            )
            recon = compensate(anchor, field, grid)
            rows.append(
                FrameRow(
                    frame=k,
                    algo=algo,
                    evals_total=field.total_evals,
                    static_blocks=field.static_count,
                    n_blocks=grid.n_blocks,
                    psnr_db=frame_psnr(target, recon.frame),
                )
            )
            if spec.dump_mv:
                dump_mv_field(field, out / "mv" / f"{algo}_frame{k:04d}.mvf")
            if spec.dump_recon:
                write_pgm(recon.frame, out / "recon" / f"{algo}_frame{k:04d}.pgm")

    report = SequenceReport(
        algos=list(spec.algos),
        rows=rows,
        n_blocks=grid.n_blocks,
        n_pairs=len(seq) - 1,
        meta={
            "input": str(spec.input),
            "format": spec.fmt,
            "chroma": spec.chroma if spec.fmt == "yuv" else None,
            "width": seq.width,
            "height": seq.height,
            "frames": len(seq),
            "algorithms": list(spec.algos),
            "block_size": spec.config.block_size,
            "search_param": spec.config.search_param,
            "zmp_threshold": spec.config.zmp_threshold,
            "arps_raw_threshold": spec.config.arps_raw_threshold,
            "ds_zmp": spec.config.ds_zmp,
            "pso": {
                "particles": spec.pso.particles,
                "iterations": spec.pso.iterations,
                "w_start": spec.pso.w_start,
                "w_end": spec.pso.w_end,
                "c1": spec.pso.c1,
                "c2": spec.pso.c2,
                "v_max": spec.pso.v_max,
                "seed_predictor": spec.pso.seed_predictor,
            },
            "seed": spec.seed,
            "per_pair_seed": "seed XOR target_frame_index",
            "eval_counting": "distinct displacements per block; memoized revisits uncounted",
            "psnr_cap_db": 100.0,
            "version": __version__,
        },
    )
    write_csv(report, out)
    return report


def write_csv(report: SequenceReport, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    lines = ["frame,algo,avg_evals,psnr_db,static_fraction"]
    for r in report.rows:
        lines.append(
            f"{r.frame},{r.algo},{ratio_3dp(r.evals_total, r.n_blocks)},"
            f"{r.psnr_db:.2f},{ratio_3dp(r.static_blocks, r.n_blocks)}"
        )
    (out / "per_frame.csv").write_text("\n".join(lines) + "\n")

    denom = report.n_pairs * report.n_blocks
    lines = ["algo,mean_psnr_db,mean_evals"]
    for a in report.algos:
        lines.append(f"{a},{report.mean_psnr(a):.2f},{ratio_3dp(report.total_evals(a), denom)}")
    (out / "summary.csv").write_text("\n".join(lines) + "\n")

    lines = ["algo," + ",".join(report.algos)]
    for a in report.algos:
        cells = [ratio_3dp(report.total_evals(b), report.total_evals(a)) for b in report.algos]
        lines.append(a + "," + ",".join(cells))
    (out / "gains.csv").write_text("\n".join(lines) + "\n")

    (out / "meta.json").write_text(json.dumps(report.meta, indent=2) + "\n")


def dump_mv_field(field: MotionField, path: str | Path) -> None:
    """Text dump: header `MVF v1 <cols> <rows> <block_size>`, then one line
    `dx dy evals static` per block in raster order."""
    grid = field.grid
    lines = [f"MVF v1 {grid.cols} {grid.rows} {grid.block_size}"]
    for row in range(grid.rows):
        for col in range(grid.cols):
            dx, dy = field.vector(row, col)
            lines.append(
                f"{dx} {dy} {int(field.evals_per_block[row, col])} "
                f"{int(field.static_flags[row, col])}"
            )
    Path(path).write_text("\n".join(lines) + "\n")


def load_mv_field(path: str | Path) -> MotionField:
    """Parse a dump_mv_field file back into a MotionField."""
    lines = Path(path).read_text().splitlines()
    head = lines[0].split()
    if len(head) != 5 or head[0] != "MVF" or head[1] != "v1":
        raise ValueError(f"bad MVF header {lines[0]!r}")
    cols, rows, block_size = int(head[2]), int(head[3]), int(head[4])
    grid = BlockGrid(block_size, cols, rows)
    field = MotionField.empty(grid)
    if len(lines) - 1 != grid.n_blocks:
        raise ValueError(f"MVF body holds {len(lines) - 1} lines, expected {grid.n_blocks}")
    for i, line in enumerate(lines[1:]):
        dx, dy, evals, static = line.split()
        row, col = i // cols, i % cols
        field.vectors[row, col] = (int(dx), int(dy))
        field.evals_per_block[row, col] = int(evals)
        field.static_flags[row, col] = bool(int(static))
    return field


def format_summary(report: SequenceReport) -> str:
    """Human-readable summary table for stdout."""
    denom = report.n_pairs * report.n_blocks
    out = [
        f"{'algo':<10} {'mean_psnr_db':>12} {'mean_evals':>12} {'static_frac':>12}",
    ]
    for a in report.algos:
        out.append(
            f"{a:<10} {report.mean_psnr(a):>12.2f} "
            f"{ratio_3dp(report.total_evals(a), denom):>12} "
            f"{ratio_3dp(sum(r.static_blocks for r in report.rows if r.algo == a), denom):>12}"
        )
    if len(report.algos) > 1:
        out.append("gains (row over column):")
        out.append(" " * 10 + "".join(f"{b:>12}" for b in report.algos))
        for a in report.algos:
            cells = "".join(f"{report.gain(a, b):>12.3f}" for b in report.algos)
            out.append(f"{a:<10}{cells}")
    return "\n".join(out)
