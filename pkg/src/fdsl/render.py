"""Rasterization of point clouds into grayscale occupancy images.

Images are plain 2D numpy uint8 arrays, shape (height, width), row-major,
holding exactly two values: the background and the foreground gray level.
Point clouds are min-max normalized into the pixel grid, then stamped
either as single pixels or as 3x3 binary patches.

Patch law: each of the 9 cells of a patch is set independently with
probability 1/2 and the pattern is re-drawn while all nine cells are
empty.  "patch-fix" uses one such pattern (from the config's pattern
seed) for every dot of the image; "patch-random" draws a fresh pattern
per dot from the patch stream passed to `rasterize`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import EmptyCloud
from .ifs import DEFAULT_BURN_IN, IfsSystem, IterationConfig, iterate
from .rng import stream_u64

DRAW_MODES = ("point", "patch-random", "patch-fix")

DEFAULT_PIXEL_VALUE = 127
DEFAULT_MARGIN = 0.02


@dataclass(frozen=True)
class RenderConfig:
    """How a point cloud becomes an image."""

    width: int = 256
    height: int = 256
    point_count: int = 200_000
    draw_mode: str = "patch-fix"
    pattern_seed: int = 0
    pixel_value: int = DEFAULT_PIXEL_VALUE
    background_value: int = 0
    margin: float = DEFAULT_MARGIN

    def __post_init__(self):
        if self.width < 8 or self.height < 8:
            raise ValueError("width and height must be >= 8")
        if self.point_count < 1:
            raise ValueError("point_count must be >= 1")
        if self.draw_mode not in DRAW_MODES:
            raise ValueError(f"draw_mode must be one of {DRAW_MODES}")
        if not 0 <= self.pixel_value <= 255 or not 0 <= self.background_value <= 255:
            raise ValueError("pixel values must be 8-bit")
        if self.pixel_value == self.background_value:
            raise ValueError("pixel_value must differ from background_value")
        if not 0 <= self.margin < 0.5:
            raise ValueError("margin must be in [0, 0.5)")

    def with_mode(self, draw_mode: str, pattern_seed: int | None = None) -> "RenderConfig":
        if pattern_seed is None:
            pattern_seed = self.pattern_seed
        return replace(self, draw_mode=draw_mode, pattern_seed=pattern_seed)

    def size_label(self) -> str:
        return f"{self.width}x{self.height}"


def normalize_points(points: np.ndarray, width: int, height: int,
                     margin: float = DEFAULT_MARGIN) -> np.ndarray:
    """Map attractor coordinates onto integer pixel coordinates.

    Each axis is min-max normalized independently, scaled into
    [margin*W, (1-margin)*W) x [margin*H, (1-margin)*H) and floored:

        px = floor(margin*W + u * ((1 - 2*margin)*W - 1)),  u = (x-min)/(max-min)

    so the extreme points land exactly on the first and last pixel of the
    framed region.  An axis whose min and max coincide maps to the center
    line.  Returns (n, 2) int32 of (px, py) pairs; py is still in y-up
    attractor orientation (rasterize flips it into row indices).
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        raise EmptyCloud("cannot normalize an empty point cloud")
    if not np.isfinite(pts).all():
        raise ValueError("points must all be finite")

    out = np.empty((pts.shape[0], 2), dtype=np.int32)
    for axis, extent in ((0, width), (1, height)):
        lo = pts[:, axis].min()
        hi = pts[:, axis].max()
        if hi == lo:
            out[:, axis] = extent // 2
            continue
        u = (pts[:, axis] - lo) / (hi - lo)
        span = (1.0 - 2.0 * margin) * extent - 1.0
        out[:, axis] = np.floor(margin * extent + u * span).astype(np.int32)
    return out


def _patch_offsets(pattern_bits: int) -> np.ndarray:
    """(k, 2) row/col offsets in {-1,0,1} for the set cells of a 9-bit pattern.

    Bit k (0..8) is cell (k // 3, k % 3) of the patch read row-major, so
    bit 4 is the center.
    """
    offs = [(k // 3 - 1, k % 3 - 1) for k in range(9) if (pattern_bits >> k) & 1]
    return np.array(offs, dtype=np.int32)


def fixed_pattern(pattern_seed: int) -> int:
    """9-bit patch pattern for patch-fix mode: first non-empty draw of the seed's stream."""
    offset = 0
    while True:
        u = stream_u64(pattern_seed, 64, offset)
        bits = (u & np.uint64(0x1FF)).astype(np.int64)
        nz = np.nonzero(bits)[0]
        if nz.size:
            return int(bits[nz[0]])
        offset += 64


def _random_patterns(patch_rng_seed: int, n: int) -> np.ndarray:
    """One 9-bit pattern per dot, all-zero draws re-filled in ascending dot order."""
    bits = (stream_u64(patch_rng_seed, n) & np.uint64(0x1FF)).astype(np.int64)
    offset = n
    while True:
        bad = np.nonzero(bits == 0)[0]
        if bad.size == 0:
            return bits
        redraw = (stream_u64(patch_rng_seed, bad.size, offset) & np.uint64(0x1FF)).astype(np.int64)
        bits[bad] = redraw
        offset += bad.size


def _stamp(img: np.ndarray, rows: np.ndarray, cols: np.ndarray, value: int) -> None:
    """Set img[r, c] = value for in-bounds (r, c) pairs."""
    h, w = img.shape
    ok = (rows >= 0) & (rows < h) & (cols >= 0) & (cols < w)
    img[rows[ok], cols[ok]] = value


def _dot_patterns(cfg: RenderConfig, n_dots: int, patch_rng_seed: int) -> np.ndarray:
    """Per-dot 9-bit patterns for any draw mode (point = center cell only)."""
    if cfg.draw_mode == "point":
        return np.full(n_dots, 1 << 4, dtype=np.int64)
    if cfg.draw_mode == "patch-fix":
        return np.full(n_dots, fixed_pattern(cfg.pattern_seed), dtype=np.int64)
    return _random_patterns(patch_rng_seed, n_dots)


def _rasterize_numpy(points: np.ndarray, cfg: RenderConfig, patch_rng_seed: int) -> np.ndarray:
    """Vectorized reference path; bit-identical to the numba kernel."""
    pix = normalize_points(points, cfg.width, cfg.height, cfg.margin)
    cols = pix[:, 0]
    rows = (cfg.height - 1) - pix[:, 1]
    img = np.full((cfg.height, cfg.width), cfg.background_value, dtype=np.uint8)

    if cfg.draw_mode == "point":
        img[rows, cols] = cfg.pixel_value
    elif cfg.draw_mode == "patch-fix":
        for dr, dc in _patch_offsets(fixed_pattern(cfg.pattern_seed)):
            _stamp(img, rows + dr, cols + dc, cfg.pixel_value)
    else:  # patch-random
        patterns = _random_patterns(patch_rng_seed, len(rows))
        for k in range(9):
            sel = (patterns >> k) & 1 == 1
            if not sel.any():
                continue
            dr, dc = k // 3 - 1, k % 3 - 1
            _stamp(img, rows[sel] + dr, cols[sel] + dc, cfg.pixel_value)
    return img


try:
    from numba import njit

    @njit(cache=True, nogil=True)
    def _raster_kernel(pts, width, height, margin, patterns, value, img):  # pragma: no cover
        n = pts.shape[0]
        minx = pts[0, 0]
        maxx = pts[0, 0]
        miny = pts[0, 1]
        maxy = pts[0, 1]
        for i in range(n):
            x = pts[i, 0]
            y = pts[i, 1]
            if x < minx:
                minx = x
            if x > maxx:
                maxx = x
            if y < miny:
                miny = y
            if y > maxy:
                maxy = y
        span_x = (1.0 - 2.0 * margin) * width - 1.0
        span_y = (1.0 - 2.0 * margin) * height - 1.0
        base_x = margin * width
        base_y = margin * height
        range_x = maxx - minx
        range_y = maxy - miny
        for i in range(n):
            if maxx > minx:
                px = int(np.floor(base_x + (pts[i, 0] - minx) / range_x * span_x))
            else:
                px = width // 2
            if maxy > miny:
                py = int(np.floor(base_y + (pts[i, 1] - miny) / range_y * span_y))
            else:
                py = height // 2
            row = (height - 1) - py
            pat = patterns[i]
            for k in range(9):
                if (pat >> k) & 1:
                    r = row + (k // 3 - 1)
                    c = px + (k % 3 - 1)
                    if 0 <= r < height and 0 <= c < width:
                        img[r, c] = value

    _HAVE_RASTER_KERNEL = True
except ImportError:  # pragma: no cover
    _HAVE_RASTER_KERNEL = False


def rasterize(points: np.ndarray, cfg: RenderConfig, patch_rng_seed: int = 0) -> np.ndarray:
    """Draw a point cloud into a fresh (height, width) uint8 image.

    The image is y-up: larger attractor y means a smaller row index.
    Patch cells falling outside the image are clipped.  Deterministic in
    (points, cfg, patch_rng_seed).
    """
    if not _HAVE_RASTER_KERNEL:
        return _rasterize_numpy(points, cfg, patch_rng_seed)
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.size == 0:
        raise EmptyCloud("cannot rasterize an empty point cloud")
    if not np.isfinite(pts).all():
        raise ValueError("points must all be finite")
    patterns = _dot_patterns(cfg, pts.shape[0], patch_rng_seed)
    img = np.full((cfg.height, cfg.width), cfg.background_value, dtype=np.uint8)
    _raster_kernel(pts, cfg.width, cfg.height, cfg.margin, patterns,
                   np.uint8(cfg.pixel_value), img)
    return img


def filling_rate(img: np.ndarray, background_value: int = 0) -> float:
    """Fraction of pixels that differ from the background."""
    return float(np.count_nonzero(img != background_value)) / img.size


def flip_image(img: np.ndarray, flip: str) -> np.ndarray:
    """Mirror a pixel buffer: none, horizontal (left-right), vertical, both."""
    if flip == "none":
        return img
    if flip == "horizontal":
        return np.fliplr(img)
    if flip == "vertical":
        return np.flipud(img)
    if flip == "both":
        return np.flipud(np.fliplr(img))
    raise ValueError(f"unknown flip {flip!r}")


def render_system(system: IfsSystem, cfg: RenderConfig, iteration_seed: int,
                  burn_in: int | None = None, patch_rng_seed: int = 0) -> np.ndarray:
    """Iterate a system and rasterize it in one step.

    Raises Diverged for non-contractive systems, like `iterate`.
    """
    it = IterationConfig(
        point_count=cfg.point_count,
        seed=iteration_seed,
        burn_in=DEFAULT_BURN_IN if burn_in is None else burn_in,
    )
    return rasterize(iterate(system, it), cfg, patch_rng_seed=patch_rng_seed)
