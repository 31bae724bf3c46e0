"""Render one hand-built and one random fractal with the chaos game.

Writes demos/out/triangle.png and demos/out/random.png and prints the
filling rate of each, showing how draw modes change coverage.
"""

from pathlib import Path

from fdsl import (
    RenderConfig,
    Rng,
    filling_rate,
    render_system,
    sample_system,
    sierpinski_system,
)
from fdsl.pipeline import write_png

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

cfg = RenderConfig(width=256, height=256, point_count=200_000,
                   draw_mode="point")

triangle = sierpinski_system()
img = render_system(triangle, cfg, iteration_seed=1)
write_png(OUT / "triangle.png", img)
print(f"triangle: 3 maps, point mode, fill {filling_rate(img):.3f}")

# a random system: most draws are sparse dust or thin filaments
system = sample_system(Rng(20))
for mode in ("point", "patch-fix"):
    img = render_system(system, cfg.with_mode(mode), iteration_seed=1)
    write_png(OUT / f"random-{mode}.png", img)
    print(f"random ({len(system.maps)} maps, {mode}): "
          f"fill {filling_rate(img):.3f}")

print(f"wrote {OUT}/triangle.png and {OUT}/random-*.png")
