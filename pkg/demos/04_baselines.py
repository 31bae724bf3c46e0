"""Render the two comparison families: Bezier strokes and Perlin noise.

Both share the fractal datasets' on-disk shape but come from entirely
different formulas; the sheets make the visual difference obvious.
"""

from pathlib import Path

import numpy as np
from PIL import Image

from fdsl import (
    RenderConfig,
    generate_bezier_categories,
    generate_perlin_categories,
    mix,
    render_bezier,
    render_perlin,
)

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

cfg = RenderConfig(width=128, height=128)


def sheet(images, cols):
    rows = (len(images) + cols - 1) // cols
    canvas = Image.new("L", (cols * 128, rows * 128))
    for k, img in enumerate(images):
        canvas.paste(Image.fromarray(np.asarray(img)),
                     ((k % cols) * 128, (k // cols) * 128))
    return canvas


bezier = generate_bezier_categories(8, seed=9)
for cat in bezier[:3]:
    print(f"bezier {cat.category_id}: {cat.stroke_count} strokes, "
          f"{cat.control_point_count} control points, "
          f"thickness {cat.thickness}")
images = [render_bezier(c, mix(c.seed, 0), cfg) for c in bezier]
sheet(images, 4).save(OUT / "bezier-sheet.png")

perlin = generate_perlin_categories(8, seed=9)
for cat in perlin[:3]:
    print(f"perlin {cat.category_id}: freq ({cat.freq_x}, {cat.freq_y}), "
          f"{cat.octaves} octaves, threshold {cat.threshold}")
images = [render_perlin(c, mix(c.seed, 0), cfg) for c in perlin]
sheet(images, 4).save(OUT / "perlin-sheet.png")

print(f"wrote {OUT}/bezier-sheet.png and {OUT}/perlin-sheet.png")
