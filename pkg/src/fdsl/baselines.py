"""Comparison datasets drawn from non-fractal formulas.

Two families, same on-disk shape as the fractal sets:

* Bezier: each category fixes a stroke layout (control points per
  stroke, stroke count, line thickness); instances jitter the control
  points.  Curves are evaluated by De Casteljau and stamped with a
  round brush.
* Perlin: each category fixes a gradient-noise spectrum (lattice
  frequencies, octave count, binarization threshold); instances reseed
  the gradients.

Category structure comes from a deterministic grid walked in id order,
so a given (count, seed) pair always produces the same categories.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidCount
from .render import RenderConfig
from .rng import Rng, mix, stream_floats

BEZIER_CONTROL_POINT_CHOICES = (3, 4, 5, 6)
BEZIER_STROKE_CHOICES = (1, 2, 3, 4, 5, 6)
BEZIER_THICKNESS_CHOICES = (1, 2, 3, 4, 5, 6)

PERLIN_DEFAULT_OCTAVES = 3
PERLIN_DEFAULT_THRESHOLD = 0.5
# the 6^4 grid used when exactly 1296 categories are requested
PERLIN_FULL_FREQS = (1, 2, 3, 4, 5, 6)
PERLIN_FULL_OCTAVES = (1, 2, 3, 4, 5, 6)
PERLIN_FULL_THRESHOLDS = (0.35, 0.40, 0.45, 0.50, 0.55, 0.60)

# stream salts keeping the two families' seeds disjoint
_BEZIER_STREAM = 0x62657A69
_PERLIN_STREAM = 0x7065726C
_JITTER = 0.08


@dataclass(frozen=True)
class BezierCategory:
    category_id: int
    control_point_count: int
    stroke_count: int
    thickness: int
    seed: int


@dataclass(frozen=True)
class PerlinCategory:
    category_id: int
    freq_x: int
    freq_y: int
    octaves: int
    threshold: float
    seed: int


def generate_bezier_categories(count: int, seed: int) -> list[BezierCategory]:
    """Exactly `count` categories: the 4x6x6 structural grid, then
    seeded random structures once the grid is exhausted."""
    if count < 1:
        raise InvalidCount(f"count must be >= 1, got {count}")
    grid = [(cp, st, th)
            for cp in BEZIER_CONTROL_POINT_CHOICES
            for st in BEZIER_STROKE_CHOICES
            for th in BEZIER_THICKNESS_CHOICES]
    out = []
    for cid in range(count):
        cat_seed = mix(mix(seed, _BEZIER_STREAM), cid)
        if cid < len(grid):
            cp, st, th = grid[cid]
        else:
            rng = Rng(cat_seed)
            cp = BEZIER_CONTROL_POINT_CHOICES[rng.randrange(4)]
            st = BEZIER_STROKE_CHOICES[rng.randrange(6)]
            th = BEZIER_THICKNESS_CHOICES[rng.randrange(6)]
        out.append(BezierCategory(category_id=cid, control_point_count=cp,
                                  stroke_count=st, thickness=th, seed=cat_seed))
    return out


def generate_perlin_categories(count: int, seed: int) -> list[PerlinCategory]:
    """Exactly `count` categories over a frequency grid.

    1296 requests the full 6x6x6x6 (freq_x, freq_y, octaves, threshold)
    grid; any other count walks an m x m frequency grid (m = ceil of
    sqrt(count)) at the default octave count and threshold.
    """
    if count < 1:
        raise InvalidCount(f"count must be >= 1, got {count}")
    if count == 1296:
        combos = [(fx, fy, oc, th)
                  for fx in PERLIN_FULL_FREQS
                  for fy in PERLIN_FULL_FREQS
                  for oc in PERLIN_FULL_OCTAVES
                  for th in PERLIN_FULL_THRESHOLDS]
    else:
        m = math.isqrt(count - 1) + 1
        combos = [(fx, fy, PERLIN_DEFAULT_OCTAVES, PERLIN_DEFAULT_THRESHOLD)
                  for fx in range(1, m + 1) for fy in range(1, m + 1)]
    out = []
    for cid in range(count):
        fx, fy, oc, th = combos[cid]
        out.append(PerlinCategory(category_id=cid, freq_x=fx, freq_y=fy,
                                  octaves=oc, threshold=th,
                                  seed=mix(mix(seed, _PERLIN_STREAM), cid)))
    return out


def _unit_to_pixel(coords: np.ndarray, extent: int, margin: float) -> np.ndarray:
    """Map unit-interval coordinates into pixel indices, same framing
    law as the point renderer but with fixed [0, 1] bounds."""
    span = (1.0 - 2.0 * margin) * extent - 1.0
    px = np.floor(margin * extent + coords * span).astype(np.int64)
    return np.clip(px, 0, extent - 1)


def _de_casteljau(ctrl: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Evaluate a Bezier curve with rows of `ctrl` as control points."""
    pts = np.repeat(ctrl[np.newaxis, :, :], len(ts), axis=0)
    t = ts[:, np.newaxis]
    while pts.shape[1] > 1:
        pts = (1.0 - t)[..., np.newaxis] * pts[:, :-1, :] + t[..., np.newaxis] * pts[:, 1:, :]
    return pts[:, 0, :]


def _brush_offsets(thickness: int) -> np.ndarray:
    r = thickness / 2.0
    k = int(math.floor(r))
    dy, dx = np.mgrid[-k:k + 1, -k:k + 1]
    keep = dx * dx + dy * dy <= r * r
    return np.stack([dy[keep], dx[keep]], axis=1)


def _stroke_points(category: BezierCategory, instance_seed: int,
                   stroke: int) -> np.ndarray:
    """Control points of one stroke: category base plus instance jitter,
    kept inside the unit square."""
    base_rng = Rng(mix(category.seed, stroke))
    jitter_rng = Rng(mix(instance_seed, stroke))
    n = category.control_point_count
    base = np.array([[base_rng.next_float(), base_rng.next_float()]
                     for _ in range(n)])
    off = np.array([[jitter_rng.uniform(-_JITTER, _JITTER),
                     jitter_rng.uniform(-_JITTER, _JITTER)] for _ in range(n)])
    return np.clip(base + off, 0.0, 1.0)


def rasterize_strokes(strokes: list[np.ndarray], thickness: int,
                      cfg: RenderConfig) -> np.ndarray:
    """Draw Bezier strokes (one (n, 2) control-point array each) with a
    round brush of the given thickness.

    Sampling density is two samples per pixel of control-polygon length
    (at least 256 per stroke), which over-samples the curve enough that
    consecutive samples never skip a pixel.
    """
    img = np.full((cfg.height, cfg.width), cfg.background_value, dtype=np.uint8)
    offsets = _brush_offsets(thickness)
    scale = max(cfg.width, cfg.height)
    for ctrl in strokes:
        poly_len = float(np.linalg.norm(np.diff(ctrl, axis=0), axis=1).sum())
        samples = max(256, int(2.0 * poly_len * scale) + 1)
        curve = _de_casteljau(np.asarray(ctrl, dtype=np.float64),
                              np.linspace(0.0, 1.0, samples))
        px = _unit_to_pixel(curve[:, 0], cfg.width, cfg.margin)
        py = _unit_to_pixel(curve[:, 1], cfg.height, cfg.margin)
        rows = (cfg.height - 1 - py)[:, np.newaxis] + offsets[:, 0]
        cols = px[:, np.newaxis] + offsets[:, 1]
        keep = ((rows >= 0) & (rows < cfg.height)
                & (cols >= 0) & (cols < cfg.width))
        img[rows[keep], cols[keep]] = cfg.pixel_value
    return img


def render_bezier(category: BezierCategory, instance_seed: int,
                  cfg: RenderConfig) -> np.ndarray:
    """Rasterize one Bezier instance."""
    strokes = [_stroke_points(category, instance_seed, s)
               for s in range(category.stroke_count)]
    return rasterize_strokes(strokes, category.thickness, cfg)


def _fade(t: np.ndarray) -> np.ndarray:
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


def _octave_field(seed: int, fx: int, fy: int, width: int, height: int) -> np.ndarray:
    """One octave of gradient noise over the pixel grid, values in
    [-sqrt(2)/2, sqrt(2)/2]."""
    angles = 2.0 * np.pi * stream_floats(seed, (fx + 1) * (fy + 1))
    gx = np.cos(angles).reshape(fy + 1, fx + 1)
    gy = np.sin(angles).reshape(fy + 1, fx + 1)

    x = (np.arange(width) + 0.5) * (fx / width)
    y = (np.arange(height) + 0.5) * (fy / height)
    ix = x.astype(np.int64)
    iy = y.astype(np.int64)
    tx = (x - ix)[np.newaxis, :]
    ty = (y - iy)[:, np.newaxis]

    col0, col1 = ix[np.newaxis, :], (ix + 1)[np.newaxis, :]
    row0, row1 = iy[:, np.newaxis], (iy + 1)[:, np.newaxis]
    d00 = gx[row0, col0] * tx + gy[row0, col0] * ty
    d10 = gx[row0, col1] * (tx - 1.0) + gy[row0, col1] * ty
    d01 = gx[row1, col0] * tx + gy[row1, col0] * (ty - 1.0)
    d11 = gx[row1, col1] * (tx - 1.0) + gy[row1, col1] * (ty - 1.0)

    u, w = _fade(tx), _fade(ty)
    top = d00 + u * (d10 - d00)
    bottom = d01 + u * (d11 - d01)
    return top + w * (bottom - top)


def perlin_field(category: PerlinCategory, instance_seed: int,
                 width: int, height: int) -> np.ndarray:
    """Multi-octave noise normalized into [0, 1]."""
    field_seed = mix(category.seed, instance_seed)
    total = np.zeros((height, width))
    amp_sum = 0.0
    for o in range(category.octaves):
        amp = 0.5 ** o
        total += amp * _octave_field(mix(field_seed, o),
                                     category.freq_x << o,
                                     category.freq_y << o, width, height)
        amp_sum += amp
    return 0.5 + total / (math.sqrt(2.0) * amp_sum)


def render_perlin(category: PerlinCategory, instance_seed: int,
                  cfg: RenderConfig) -> np.ndarray:
    """Binarize the noise field at the category threshold."""
    field = perlin_field(category, instance_seed, cfg.width, cfg.height)
    img = np.full((cfg.height, cfg.width), cfg.background_value, dtype=np.uint8)
    img[field >= category.threshold] = cfg.pixel_value
    return img
