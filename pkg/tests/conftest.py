"""Shared synthetic-data helpers.

shifted_pair builds an exact global translation with no wrap-around: the
target block at (x, y) equals the anchor pixels at (x+dx, y+dy), so a correct
matcher returns exactly (dx, dy) wherever that displacement is legal.
"""

from __future__ import annotations

import numpy as np
import pytest
from scipy.ndimage import uniform_filter

from mebench import Frame


def smooth_texture(h: int, w: int, seed: int, passes: int = 2, size: int = 5) -> np.ndarray:
    """Aperiodic smooth uint8 texture: box-filtered white noise, full contrast.

    Smoothness makes block-matching cost surfaces near-unimodal (pattern
    searches walk downhill to the true shift); the noise keeps them aperiodic
    (no equal-cost aliases).
    """
    rng = np.random.default_rng(seed)
    a = rng.random((h, w))
    for _ in range(passes):
        a = uniform_filter(a, size=size, mode="reflect")
    a -= a.min()
    a /= a.max()
    return (a * 220 + 16).astype(np.uint8)


def shifted_pair(h: int, w: int, shift: tuple[int, int], seed: int, pad: int = 8):
    """(anchor, target) frames where target content sits at +shift in the anchor."""
    dx, dy = shift
    assert abs(dx) <= pad and abs(dy) <= pad
    base = smooth_texture(h + 2 * pad, w + 2 * pad, seed)
    anchor = base[pad : pad + h, pad : pad + w]
    target = base[pad + dy : pad + dy + h, pad + dx : pad + dx + w]
    return Frame(anchor.copy()), Frame(target.copy())


def noise_frame(h: int, w: int, seed: int) -> Frame:
    rng = np.random.default_rng(seed)
    return Frame(rng.integers(0, 256, (h, w), dtype=np.uint8))


def write_y4m(path, lumas, chroma_value: int = 128, header: bytes | None = None) -> None:
    """Scripted YUV4MPEG2 writer, independent of the reader under test."""
    h, w = lumas[0].shape
    assert h % 2 == 0 and w % 2 == 0
    parts = [header if header is not None else f"YUV4MPEG2 W{w} H{h} F25:1 Ip A1:1 C420jpeg\n".encode()]
    chroma = bytes([chroma_value]) * ((w // 2) * (h // 2) * 2)
    for y in lumas:
        parts.append(b"FRAME\n")
        parts.append(np.asarray(y, dtype=np.uint8).tobytes())
        parts.append(chroma)
    path.write_bytes(b"".join(parts))


@pytest.fixture
def qcif_grid():
    from mebench import BlockGrid

    return BlockGrid(16, 11, 9)
